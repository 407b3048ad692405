#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groves/core.hpp"

namespace groves::analysis {

enum class Verdict { No, Yes };

/// A grid profile, and the agent concerned when the statement is per-agent.
struct Witness {
  Tuple profile;
  std::optional<std::size_t> agent;
};

/// Outcome of asking whether mechanism B (weakly, strictly somewhere) improves
/// on mechanism A over every grid profile. Witnesses are the lexicographically
/// first profile (and lowest agent) exhibiting each relation.
struct DominanceResult {
  Verdict dominates = Verdict::No;
  Verdict welfare_dominates = Verdict::No;
  bool equal = false;
  std::optional<Witness> strict_witness;             // t^B_i > t^A_i
  std::optional<Witness> violation_witness;          // t^B_i < t^A_i
  std::optional<Witness> welfare_strict_witness;     // T^B > T^A
  std::optional<Witness> welfare_violation_witness;  // T^B < T^A
  std::size_t profiles = 0;
};

/// Both mechanisms' taxes at one profile.
struct ProfileComparison {
  Tuple taxes_a;
  Tuple taxes_b;
  Rational total_a;
  Rational total_b;
  Rational rebates_a;  // total minus the VCG total
  Rational rebates_b;
};

ProfileComparison compare_at(const Setting& setting, const Mechanism& a, const Mechanism& b,
                             const TypeProfile& profile);

/// Does `b` dominate / welfare dominate `a` on grid^n?
DominanceResult compare(const Setting& setting, const Mechanism& a, const Mechanism& b,
                        const GridSpec& grid);

struct FeasibilityCheck {
  bool feasible = true;
  std::optional<Tuple> witness;  // first profile with positive total tax
  std::optional<Rational> witness_total;
};

FeasibilityCheck check_feasible(const Setting& setting, const Mechanism& mech,
                                const GridSpec& grid);

struct PayOnlyCheck {
  bool pay_only = true;
  std::optional<Witness> witness;  // first (profile, agent) with positive tax
  std::optional<Rational> witness_tax;
};

PayOnlyCheck check_pay_only(const Setting& setting, const Mechanism& mech, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Linear mechanisms in the unit-demand auction

/// Total tax of a linear rebate as C_0 + sum_j C_j [theta]_j (C has n+1 entries).
struct TotalCoefficients {
  Tuple c;
};

TotalCoefficients total_coefficients(const AuctionSetting& setting, const RebateCoefficients& a);

/// constant + sum_j coeffs[j] * s_{j+1} over the sorted others s_1 >= ... >= s_{n-1}.
struct AffineForm {
  Rational constant;
  Tuple coeffs;

  bool is_zero() const;
  Rational at(const Tuple& s) const;
};

/// The n+1 candidate maxima of the total tax over the agent's own report,
/// indexed by where that report lands in the sorted order: (0) above s_1 at U,
/// (i) tied with s_i for 1 <= i <= n-1, (n) at L below s_{n-1}.
std::vector<AffineForm> boundary_expressions(const AuctionSetting& setting,
                                             const TotalCoefficients& totals);

struct Classification {
  enum class Kind { Infeasible, UndominatedOel, Dominated };
  Kind kind = Kind::Dominated;
  std::optional<std::size_t> oel_index;  // UndominatedOel
  Rational slack;                        // Dominated: -min_s max_e expr_e(s) > 0
  Tuple witness;  // Infeasible: full profile with positive total; Dominated: sorted others s
  std::optional<std::size_t> expression;  // Infeasible: the offending boundary expression
};

/// Exact verdict for an anonymous linear rebate: feasibility from the sorted-box
/// vertices, undominance iff some boundary expression vanishes identically.
Classification classify_linear(const AuctionSetting& setting, const RebateCoefficients& a);

// ---------------------------------------------------------------------------
// Improvement search over anonymous rebate perturbations on a grid

enum class LpStatus { NoImprovement, ImprovementFound, BaseInfeasible };

struct LpOutcome {
  LpStatus status = LpStatus::NoImprovement;
  Rational optimum;
  std::optional<RebateTable> improvement;  // delta, present iff ImprovementFound
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::size_t pivots = 0;
  std::string scope;
};

/// max sum_theta sum_i delta(theta_{-i}) s.t. for every grid profile
///   sum_i (t_i + delta(theta_{-i})) <= 0  and  sum_i delta(theta_{-i}) >= 0.
LpOutcome search_welfare_improvement(const Setting& setting, const Mechanism& mech,
                                     const GridSpec& grid);

/// As above with delta >= 0 per multiset instead of the welfare row, and
/// t_i + delta(theta_{-i}) <= 0 per agent when `pay_only`.
LpOutcome search_dominance_improvement(const Setting& setting, const Mechanism& mech,
                                       const GridSpec& grid, bool pay_only);

/// Worker pool size for grid scans: hardware concurrency, capped by the
/// GROVES_WORKERS environment variable when set.
std::size_t configured_workers();

}  // namespace groves::analysis
