#include "groves/simplex.hpp"

#include <optional>
#include <stdexcept>

namespace groves::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : a_(rows, Tuple(cols + 1, Rational(0))), basis_(rows), cols_(cols) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][cols_]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // Reduced costs d_j = c_j - c_B B^-1 A_j and the objective value c_B x_B.
  void price(const Tuple& cost) {
    reduced_ = cost;
    reduced_.resize(cols_, Rational(0));
    value_ = 0;
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (a_[r][c] != 0) reduced_[c] -= cb * a_[r][c];
      }
      value_ += cb * rhs(r);
    }
  }

  // Bland's rule on the columns allowed by `enterable`. Returns false when
  // unbounded.
  template <class Enterable>
  bool optimize(const Enterable& enterable, std::size_t& pivots) {
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (enterable(c) && reduced_[c] > 0) {
          entering = c;
          break;
        }
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        const Rational& coeff = a_[r][*entering];
        if (coeff <= 0) continue;
        Rational ratio = rhs(r) / coeff;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
      ++pivots;
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Tuple& pr = a_[row];
    const Rational inv = 1 / pr[col];
    std::vector<std::size_t> nonzero;
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (pr[c] != 0) {
        pr[c] *= inv;
        nonzero.push_back(c);
      }
    }
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == row || a_[r][col] == 0) continue;
      const Rational factor = a_[r][col];
      for (std::size_t c : nonzero) a_[r][c] -= factor * pr[c];
    }
    if (reduced_[col] != 0) {
      const Rational factor = reduced_[col];
      for (std::size_t c : nonzero) {
        if (c < cols_) reduced_[c] -= factor * pr[c];
      }
      value_ += factor * pr[cols_];
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  const Rational& value() const { return value_; }

 private:
  std::vector<Tuple> a_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
  Tuple reduced_;
  Rational value_;
};

}  // namespace

Solution maximize(const Problem& problem) {
  const std::size_t n = problem.num_vars;
  const auto is_free = [&](std::size_t j) { return !problem.free.empty() && problem.free[j]; };

  // Column layout: [x_j (or x_j^+)] [x_j^- for free j] [slack/surplus] [artificial]
  std::vector<std::size_t> negative_col(n, 0);
  std::size_t cols = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_free(j)) negative_col[j] = cols++;
  }
  const std::size_t m = problem.constraints.size();
  std::vector<std::optional<std::size_t>> slack_col(m);
  std::vector<std::optional<std::size_t>> artificial_col(m);
  std::vector<int> sign(m, 1);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = problem.constraints[r];
    Relation rel = con.relation;
    if (con.rhs < 0) {
      sign[r] = -1;
      if (rel == Relation::LessEqual) rel = Relation::GreaterEqual;
      else if (rel == Relation::GreaterEqual) rel = Relation::LessEqual;
    }
    if (rel != Relation::Equal) slack_col[r] = cols++;
  }
  const std::size_t first_artificial = cols;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = problem.constraints[r];
    const bool flipped = sign[r] < 0;
    const bool needs = con.relation == Relation::Equal ||
                       (con.relation == Relation::GreaterEqual && !flipped) ||
                       (con.relation == Relation::LessEqual && flipped);
    if (needs) artificial_col[r] = cols++;
  }

  Tableau t(m, cols);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = problem.constraints[r];
    const Rational s(sign[r]);
    for (const auto& term : con.terms) {
      if (term.var >= n) throw std::out_of_range("LP term references unknown variable");
      t.at(r, term.var) += s * term.coeff;
      if (is_free(term.var)) t.at(r, negative_col[term.var]) -= s * term.coeff;
    }
    t.rhs(r) = s * con.rhs;
    if (slack_col[r]) {
      // after normalization: "<=" gets +slack, ">=" gets -surplus
      t.at(r, *slack_col[r]) = artificial_col[r] ? Rational(-1) : Rational(1);
    }
    if (artificial_col[r]) {
      t.at(r, *artificial_col[r]) = 1;
      t.basis()[r] = *artificial_col[r];
    } else {
      t.basis()[r] = *slack_col[r];
    }
  }

  Solution out;

  // Phase 1: maximize -sum(artificials).
  if (first_artificial < cols) {
    Tuple phase1(cols, Rational(0));
    for (std::size_t c = first_artificial; c < cols; ++c) phase1[c] = -1;
    t.price(phase1);
    t.optimize([](std::size_t) { return true; }, out.pivots);
    if (t.value() < 0) {
      out.status = Status::Infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis()[r] < first_artificial) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < first_artificial; ++c) {
        if (t.at(r, c) != 0) {
          col = c;
          break;
        }
      }
      if (col) {
        t.pivot(r, *col);
        ++out.pivots;
        ++r;
      } else {
        t.drop_row(r);
      }
    }
  }

  // Phase 2.
  Tuple cost(cols, Rational(0));
  for (std::size_t j = 0; j < n && j < problem.objective.size(); ++j) {
    cost[j] = problem.objective[j];
    if (is_free(j)) cost[negative_col[j]] = -problem.objective[j];
  }
  t.price(cost);
  const bool bounded =
      t.optimize([&](std::size_t c) { return c < first_artificial; }, out.pivots);
  if (!bounded) {
    out.status = Status::Unbounded;
    return out;
  }

  Tuple column_value(cols, Rational(0));
  for (std::size_t r = 0; r < t.rows(); ++r) column_value[t.basis()[r]] = t.rhs(r);
  out.x.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    out.x[j] = column_value[j];
    if (is_free(j)) out.x[j] -= column_value[negative_col[j]];
  }
  out.value = t.value();
  out.status = Status::Optimal;
  return out;
}

bool satisfies(const Problem& problem, const Tuple& x) {
  if (x.size() != problem.num_vars) return false;
  for (std::size_t j = 0; j < problem.num_vars; ++j) {
    const bool free = !problem.free.empty() && problem.free[j];
    if (!free && x[j] < 0) return false;
  }
  for (const auto& con : problem.constraints) {
    Rational lhs = 0;
    for (const auto& term : con.terms) lhs += term.coeff * x[term.var];
    switch (con.relation) {
      case Relation::LessEqual:
        if (lhs > con.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < con.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != con.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace groves::lp
