#pragma once

#include <cstddef>
#include <vector>

#include "groves/rational.hpp"

// Exact-rational dense two-phase primal simplex with Bland's rule.
// Intended for desk-scale problems (hundreds of variables and rows).
namespace groves::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var;
  Rational coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// maximize objective . x subject to constraints; x_j >= 0 unless free[j].
struct Problem {
  std::size_t num_vars = 0;
  std::vector<bool> free;  // empty means all nonnegative
  Tuple objective;         // empty means zero objective
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  Rational value;
  Tuple x;
  std::size_t pivots = 0;
};

Solution maximize(const Problem& problem);

/// True when x meets every constraint and sign restriction exactly.
bool satisfies(const Problem& problem, const Tuple& x);

}  // namespace groves::lp
