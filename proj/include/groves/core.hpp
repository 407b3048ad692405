#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "groves/rational.hpp"

namespace groves {

// ---------------------------------------------------------------------------
// Errors

/// Malformed input: bad setting parameters, out-of-range types or indices.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mechanism could not be evaluated on a profile (e.g. a missing table key).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested surplus strategy cannot be applied to the mechanism.
class UnsupportedStrategy : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Settings

/// m identical units, n unit-demand bidders, bids in [lower, upper].
struct AuctionSetting {
  std::size_t n = 0;
  std::size_t m = 0;
  Rational lower;
  Rational upper;

  static AuctionSetting make(std::size_t n, std::size_t m, Rational lower, Rational upper);
};

/// Binary project of cost c, agent i pays share c_i when built; types in [0, c].
struct PublicProjectSetting {
  std::size_t n = 0;
  Rational cost;
  Tuple shares;

  static PublicProjectSetting make(Rational cost, Tuple shares);
  static PublicProjectSetting equal_shares(std::size_t n, Rational cost);

  bool has_equal_shares() const;
};

using Setting = std::variant<AuctionSetting, PublicProjectSetting>;

std::size_t agent_count(const Setting& setting);
Rational type_lower_bound(const Setting& setting);
Rational type_upper_bound(const Setting& setting);
bool is_auction(const Setting& setting);

// ---------------------------------------------------------------------------
// Profiles

/// Announced types of all n agents. Bounds are checked once, here.
class TypeProfile {
 public:
  TypeProfile(const Setting& setting, Tuple values);

  const Tuple& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const TypeProfile&, const TypeProfile&) = default;

 private:
  Tuple values_;
};

/// j-th largest value (1-based, counting multiplicity).
Rational sorted_stat(std::span<const Rational> values, std::size_t j);
Rational sorted_stat(const TypeProfile& profile, std::size_t j);

/// Reports of every agent except `agent` (0-based), in agent order.
Tuple exclude(const TypeProfile& profile, std::size_t agent);

/// Descending sort; the canonical key for anonymous rebates.
Tuple canonical(Tuple values);

/// `others` with `value` inserted at position `agent`.
Tuple insert_at(const Tuple& others, std::size_t agent, const Rational& value);

// ---------------------------------------------------------------------------
// Rebate representations

/// Anonymous rebate given by a table over canonical (descending) tuples.
/// Lookups canonicalize first, so permutation independence holds by construction.
class RebateTable {
 public:
  RebateTable() = default;

  void set(Tuple others, Rational value);
  const Rational& at(const Tuple& others) const;  // throws EvaluationError if absent
  bool contains(const Tuple& others) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const RebateTable&, const RebateTable&) = default;

 private:
  std::map<Tuple, Rational> entries_;
};

/// Agent-specific rebate over ordered tuples of the other agents' reports.
/// Not assumed permutation independent; input to anonymization.
class AgentRebateTable {
 public:
  void set(Tuple others, Rational value);
  const Rational& at(const Tuple& others) const;
  bool contains(const Tuple& others) const;

  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<Tuple, Rational> entries_;
};

/// r(x) = constant + sum_j slopes[j-1] * [x]_j over the n-1 other reports.
struct RebateCoefficients {
  Rational constant;
  Tuple slopes;

  friend bool operator==(const RebateCoefficients&, const RebateCoefficients&) = default;
};

// ---------------------------------------------------------------------------
// Grids

/// Finite discretization of one agent's type interval. Strictly increasing
/// and pinned to both interval endpoints.
struct GridSpec {
  Tuple points;

  static GridSpec make(const Setting& setting, Tuple points);
  /// `count` evenly spaced points from the lower to the upper type bound.
  static GridSpec uniform(const Setting& setting, std::size_t count);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// How the BCGC surplus max over an agent's own report is taken.
struct SurplusStrategy {
  enum class Kind { Exact, Grid };
  Kind kind = Kind::Exact;
  std::optional<GridSpec> grid;

  static SurplusStrategy exact() { return {}; }
  static SurplusStrategy on_grid(GridSpec grid) { return {Kind::Grid, std::move(grid)}; }
};

// ---------------------------------------------------------------------------
// Mechanisms

class Mechanism;
using MechanismPtr = std::shared_ptr<const Mechanism>;

struct OelIndex {
  std::size_t k = 0;
};

namespace mechanism {

struct Vcg {};
struct Linear {
  RebateCoefficients coeffs;
};
struct Oel {
  OelIndex index;
  RebateCoefficients coeffs;  // resolved against the setting at construction
};
struct Tabular {
  RebateTable table;
};
struct PerAgentTabular {
  std::vector<AgentRebateTable> tables;
};
struct Bcgc {
  MechanismPtr inner;
  SurplusStrategy strategy;
};
/// inner mechanism plus an anonymous table-valued rebate adjustment.
struct Shifted {
  MechanismPtr inner;
  RebateTable delta;
};

}  // namespace mechanism

/// A Groves mechanism, described by its rebate on top of the VCG tax:
/// t_i(theta) = t_i^VCG(theta) + h_i(theta_{-i}). Immutable once built.
class Mechanism {
 public:
  using Variant = std::variant<mechanism::Vcg, mechanism::Linear, mechanism::Oel,
                               mechanism::Tabular, mechanism::PerAgentTabular,
                               mechanism::Bcgc, mechanism::Shifted>;

  static Mechanism vcg();
  static Mechanism linear(RebateCoefficients coeffs);
  static Mechanism oel(const AuctionSetting& setting, std::size_t k);
  static Mechanism tabular(RebateTable table);
  static Mechanism per_agent(std::vector<AgentRebateTable> tables);
  static Mechanism bcgc(Mechanism inner, SurplusStrategy strategy = SurplusStrategy::exact());
  static Mechanism shifted(Mechanism inner, RebateTable delta);

  const Variant& variant() const noexcept { return v_; }
  std::string describe() const;

  /// Anonymous in the sense that h_i is the same permutation-independent
  /// function for every agent (given an anonymous setting).
  bool is_anonymous() const;

 private:
  explicit Mechanism(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct AuctionDecision {
  std::vector<std::size_t> winners;  // ascending agent indices
};
struct ProjectDecision {
  bool build = false;
};
using Decision = std::variant<AuctionDecision, ProjectDecision>;

struct TaxReport {
  Decision decision;
  Tuple taxes;
  Rational total_tax;
  Tuple utilities;
  Rational welfare;
};

/// Efficient decision for the setting.
Decision efficient_decision(const Setting& setting, const TypeProfile& profile);

/// v_i(d, theta_i).
Rational valuation(const Setting& setting, const Decision& decision, std::size_t agent,
                   const Rational& type);

/// Sum of valuations at the efficient decision, G(theta).
Rational initial_welfare(const Setting& setting, const TypeProfile& profile);

/// Clarke taxes for the setting.
Tuple vcg_taxes(const Setting& setting, const TypeProfile& profile);

/// h_i(theta_{-i}) for `agent`.
Rational rebate(const Setting& setting, const Mechanism& mech, const TypeProfile& profile,
                std::size_t agent);

Tuple taxes(const Setting& setting, const Mechanism& mech, const TypeProfile& profile);
Rational total_tax(const Setting& setting, const Mechanism& mech, const TypeProfile& profile);

TaxReport evaluate(const Setting& setting, const Mechanism& mech, const TypeProfile& profile);

}  // namespace groves
