#include "groves/core.hpp"

#include <algorithm>
#include <sstream>

#include "groves/auction.hpp"
#include "groves/public_project.hpp"
#include "groves/transforms.hpp"

namespace groves {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Settings

AuctionSetting AuctionSetting::make(std::size_t n, std::size_t m, Rational lower, Rational upper) {
  if (n < 2) throw ArgumentError("auction needs n >= 2 agents");
  if (m < 1 || m > n - 1) {
    throw ArgumentError("auction needs 1 <= m <= n-1 (n=" + std::to_string(n) +
                        ", m=" + std::to_string(m) + ")");
  }
  if (!(lower < upper)) {
    throw ArgumentError("auction needs L < U (L=" + to_string(lower) + ", U=" + to_string(upper) +
                        ")");
  }
  return AuctionSetting{n, m, std::move(lower), std::move(upper)};
}

PublicProjectSetting PublicProjectSetting::make(Rational cost, Tuple shares) {
  if (shares.size() < 2) throw ArgumentError("public project needs n >= 2 agents");
  if (!(cost > 0)) throw ArgumentError("project cost must be positive");
  Rational total = 0;
  for (const auto& s : shares) {
    if (!(s > 0)) throw ArgumentError("cost shares must be positive, got " + to_string(s));
    total += s;
  }
  if (total != cost) {
    throw ArgumentError("cost shares sum to " + to_string(total) + ", expected " + to_string(cost));
  }
  const std::size_t n = shares.size();
  return PublicProjectSetting{n, std::move(cost), std::move(shares)};
}

PublicProjectSetting PublicProjectSetting::equal_shares(std::size_t n, Rational cost) {
  if (n < 2) throw ArgumentError("public project needs n >= 2 agents");
  Rational share = cost / Rational(static_cast<long>(n));
  return make(std::move(cost), Tuple(n, share));
}

bool PublicProjectSetting::has_equal_shares() const {
  return std::all_of(shares.begin(), shares.end(),
                     [&](const Rational& s) { return s == shares.front(); });
}

std::size_t agent_count(const Setting& setting) {
  return std::visit([](const auto& s) { return s.n; }, setting);
}

Rational type_lower_bound(const Setting& setting) {
  return std::visit(overloaded{[](const AuctionSetting& s) { return s.lower; },
                               [](const PublicProjectSetting&) { return Rational(0); }},
                    setting);
}

Rational type_upper_bound(const Setting& setting) {
  return std::visit(overloaded{[](const AuctionSetting& s) { return s.upper; },
                               [](const PublicProjectSetting& s) { return s.cost; }},
                    setting);
}

bool is_auction(const Setting& setting) {
  return std::holds_alternative<AuctionSetting>(setting);
}

// ---------------------------------------------------------------------------
// Profiles

TypeProfile::TypeProfile(const Setting& setting, Tuple values) : values_(std::move(values)) {
  const std::size_t n = agent_count(setting);
  if (values_.size() != n) {
    throw ArgumentError("profile has " + std::to_string(values_.size()) + " types, setting has " +
                        std::to_string(n) + " agents");
  }
  const Rational lo = type_lower_bound(setting);
  const Rational hi = type_upper_bound(setting);
  for (const auto& v : values_) {
    if (v < lo || v > hi) {
      throw ArgumentError("type " + to_string(v) + " outside [" + to_string(lo) + ", " +
                          to_string(hi) + "]");
    }
  }
}

Rational sorted_stat(std::span<const Rational> values, std::size_t j) {
  if (j < 1 || j > values.size()) {
    throw ArgumentError("order statistic index " + std::to_string(j) + " outside 1.." +
                        std::to_string(values.size()));
  }
  Tuple copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(j - 1), copy.end(),
                   std::greater<>());
  return copy[j - 1];
}

Rational sorted_stat(const TypeProfile& profile, std::size_t j) {
  return sorted_stat(std::span<const Rational>(profile.values()), j);
}

Tuple exclude(const TypeProfile& profile, std::size_t agent) {
  if (agent >= profile.size()) {
    throw ArgumentError("agent index " + std::to_string(agent) + " outside 0.." +
                        std::to_string(profile.size() - 1));
  }
  Tuple out;
  out.reserve(profile.size() - 1);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != agent) out.push_back(profile[j]);
  }
  return out;
}

Tuple canonical(Tuple values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

Tuple insert_at(const Tuple& others, std::size_t agent, const Rational& value) {
  if (agent > others.size()) throw ArgumentError("insert position out of range");
  Tuple out;
  out.reserve(others.size() + 1);
  out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(agent));
  out.push_back(value);
  out.insert(out.end(), others.begin() + static_cast<std::ptrdiff_t>(agent), others.end());
  return out;
}

// ---------------------------------------------------------------------------
// Tables

void RebateTable::set(Tuple others, Rational value) {
  entries_[canonical(std::move(others))] = std::move(value);
}

const Rational& RebateTable::at(const Tuple& others) const {
  const auto it = entries_.find(canonical(others));
  if (it == entries_.end()) {
    throw EvaluationError("rebate table has no entry for multiset {" + join(canonical(others)) +
                          "}");
  }
  return it->second;
}

bool RebateTable::contains(const Tuple& others) const {
  return entries_.contains(canonical(others));
}

void AgentRebateTable::set(Tuple others, Rational value) {
  entries_[std::move(others)] = std::move(value);
}

const Rational& AgentRebateTable::at(const Tuple& others) const {
  const auto it = entries_.find(others);
  if (it == entries_.end()) {
    throw EvaluationError("agent rebate table has no entry for (" + join(others) + ")");
  }
  return it->second;
}

bool AgentRebateTable::contains(const Tuple& others) const { return entries_.contains(others); }

// ---------------------------------------------------------------------------
// Grids

GridSpec GridSpec::make(const Setting& setting, Tuple points) {
  if (points.size() < 2) throw ArgumentError("grid needs at least 2 points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1] < points[i])) throw ArgumentError("grid points must strictly increase");
  }
  const Rational lo = type_lower_bound(setting);
  const Rational hi = type_upper_bound(setting);
  if (points.front() != lo || points.back() != hi) {
    throw ArgumentError("grid must start at " + to_string(lo) + " and end at " + to_string(hi));
  }
  return GridSpec{std::move(points)};
}

GridSpec GridSpec::uniform(const Setting& setting, std::size_t count) {
  if (count < 2) throw ArgumentError("grid needs at least 2 points");
  const Rational lo = type_lower_bound(setting);
  const Rational hi = type_upper_bound(setting);
  const Rational step = (hi - lo) / Rational(static_cast<long>(count - 1));
  Tuple points(count);
  for (std::size_t i = 0; i < count; ++i) points[i] = lo + step * Rational(static_cast<long>(i));
  return make(setting, std::move(points));
}

// ---------------------------------------------------------------------------
// Mechanisms

Mechanism Mechanism::vcg() { return Mechanism(mechanism::Vcg{}); }

Mechanism Mechanism::linear(RebateCoefficients coeffs) {
  return Mechanism(mechanism::Linear{std::move(coeffs)});
}

Mechanism Mechanism::oel(const AuctionSetting& setting, std::size_t k) {
  const OelIndex index = auction::make_oel_index(setting, k);
  return Mechanism(mechanism::Oel{index, auction::oel_coefficients(setting, index)});
}

Mechanism Mechanism::tabular(RebateTable table) {
  return Mechanism(mechanism::Tabular{std::move(table)});
}

Mechanism Mechanism::per_agent(std::vector<AgentRebateTable> tables) {
  return Mechanism(mechanism::PerAgentTabular{std::move(tables)});
}

Mechanism Mechanism::bcgc(Mechanism inner, SurplusStrategy strategy) {
  if (strategy.kind == SurplusStrategy::Kind::Exact && !transforms::supports_exact_surplus(inner)) {
    throw UnsupportedStrategy("exact BCGC surplus is unavailable for " + inner.describe() +
                              "; use a grid strategy");
  }
  if (strategy.kind == SurplusStrategy::Kind::Grid && !strategy.grid) {
    throw ArgumentError("grid surplus strategy needs a grid");
  }
  return Mechanism(
      mechanism::Bcgc{std::make_shared<const Mechanism>(std::move(inner)), std::move(strategy)});
}

Mechanism Mechanism::shifted(Mechanism inner, RebateTable delta) {
  return Mechanism(
      mechanism::Shifted{std::make_shared<const Mechanism>(std::move(inner)), std::move(delta)});
}

std::string Mechanism::describe() const {
  return std::visit(
      overloaded{
          [](const mechanism::Vcg&) { return std::string("vcg"); },
          [](const mechanism::Linear& l) {
            Tuple all{l.coeffs.constant};
            all.insert(all.end(), l.coeffs.slopes.begin(), l.coeffs.slopes.end());
            return "linear:" + join(all);
          },
          [](const mechanism::Oel& o) { return "oel:k=" + std::to_string(o.index.k); },
          [](const mechanism::Tabular& t) {
            return "table(" + std::to_string(t.table.size()) + " entries)";
          },
          [](const mechanism::PerAgentTabular& p) {
            return "per-agent-table(" + std::to_string(p.tables.size()) + " agents)";
          },
          [](const mechanism::Bcgc& b) {
            return "bcgc:" + b.inner->describe() +
                   (b.strategy.kind == SurplusStrategy::Kind::Grid ? "@grid" : "");
          },
          [](const mechanism::Shifted& s) { return "shifted(" + s.inner->describe() + ")"; },
      },
      v_);
}

bool Mechanism::is_anonymous() const {
  return std::visit(overloaded{
                        [](const mechanism::PerAgentTabular&) { return false; },
                        [](const mechanism::Bcgc& b) { return b.inner->is_anonymous(); },
                        [](const mechanism::Shifted& s) { return s.inner->is_anonymous(); },
                        [](const auto&) { return true; },
                    },
                    v_);
}

// ---------------------------------------------------------------------------
// Evaluation

Decision efficient_decision(const Setting& setting, const TypeProfile& profile) {
  return std::visit(overloaded{[&](const AuctionSetting& s) -> Decision {
                                 return AuctionDecision{auction::efficient_allocation(s, profile)};
                               },
                               [&](const PublicProjectSetting& s) -> Decision {
                                 return ProjectDecision{public_project::pp_decision(s, profile) ==
                                                        1};
                               }},
                    setting);
}

Rational valuation(const Setting& setting, const Decision& decision, std::size_t agent,
                   const Rational& type) {
  if (const auto* a = std::get_if<AuctionDecision>(&decision)) {
    const bool won = std::binary_search(a->winners.begin(), a->winners.end(), agent);
    return won ? type : Rational(0);
  }
  const auto& p = std::get<ProjectDecision>(decision);
  return public_project::pp_value(std::get<PublicProjectSetting>(setting), agent, p.build ? 1 : 0,
                                  type);
}

Rational initial_welfare(const Setting& setting, const TypeProfile& profile) {
  const Decision d = efficient_decision(setting, profile);
  Rational out = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) out += valuation(setting, d, i, profile[i]);
  return out;
}

Tuple vcg_taxes(const Setting& setting, const TypeProfile& profile) {
  return std::visit(
      overloaded{[&](const AuctionSetting& s) { return auction::vcg_tax(s, profile); },
                 [&](const PublicProjectSetting& s) { return public_project::pp_vcg_tax(s, profile); }},
      setting);
}

Rational rebate(const Setting& setting, const Mechanism& mech, const TypeProfile& profile,
                std::size_t agent) {
  const Tuple others = exclude(profile, agent);
  return std::visit(
      overloaded{
          [](const mechanism::Vcg&) { return Rational(0); },
          [&](const mechanism::Linear& l) { return auction::linear_rebate(l.coeffs, others); },
          [&](const mechanism::Oel& o) { return auction::linear_rebate(o.coeffs, others); },
          [&](const mechanism::Tabular& t) { return t.table.at(others); },
          [&](const mechanism::PerAgentTabular& p) {
            if (p.tables.size() != profile.size()) {
              throw EvaluationError("per-agent rebate family has " +
                                    std::to_string(p.tables.size()) + " tables for " +
                                    std::to_string(profile.size()) + " agents");
            }
            return p.tables[agent].at(others);
          },
          [&](const mechanism::Bcgc& b) {
            const Rational surplus =
                transforms::bcgc_surplus(setting, *b.inner, agent, others, b.strategy);
            return Rational(rebate(setting, *b.inner, profile, agent) -
                            surplus / Rational(static_cast<long>(profile.size())));
          },
          [&](const mechanism::Shifted& s) {
            return Rational(rebate(setting, *s.inner, profile, agent) + s.delta.at(others));
          },
      },
      mech.variant());
}

Tuple taxes(const Setting& setting, const Mechanism& mech, const TypeProfile& profile) {
  Tuple out = vcg_taxes(setting, profile);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += rebate(setting, mech, profile, i);
  return out;
}

Rational total_tax(const Setting& setting, const Mechanism& mech, const TypeProfile& profile) {
  Rational out = 0;
  for (const auto& t : taxes(setting, mech, profile)) out += t;
  return out;
}

TaxReport evaluate(const Setting& setting, const Mechanism& mech, const TypeProfile& profile) {
  TaxReport report;
  report.decision = efficient_decision(setting, profile);
  report.taxes = taxes(setting, mech, profile);
  report.total_tax = 0;
  for (const auto& t : report.taxes) report.total_tax += t;
  report.utilities.resize(profile.size());
  report.welfare = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    report.utilities[i] = valuation(setting, report.decision, i, profile[i]) + report.taxes[i];
    report.welfare += report.utilities[i];
  }
  return report;
}

}  // namespace groves
