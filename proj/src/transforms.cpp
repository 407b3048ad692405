#include "groves/transforms.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "groves/enumerate.hpp"
#include "groves/public_project.hpp"

namespace groves::transforms {

namespace {

Rational total_at(const Setting& setting, const Mechanism& mech, const Tuple& others,
                  std::size_t agent, const Rational& own) {
  return total_tax(setting, mech, TypeProfile(setting, insert_at(others, agent, own)));
}

Tuple exact_candidates(const Setting& setting, std::size_t agent, const Tuple& others) {
  const Rational lo = type_lower_bound(setting);
  const Rational hi = type_upper_bound(setting);
  Tuple out{lo, hi};
  out.insert(out.end(), others.begin(), others.end());
  if (const auto* pp = std::get_if<PublicProjectSetting>(&setting)) {
    const Tuple thresholds = public_project::surplus_candidates(*pp, agent, others);
    out.insert(out.end(), thresholds.begin(), thresholds.end());
  }
  for (auto& x : out) x = std::clamp(x, lo, hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool supports_exact_surplus(const Mechanism& mech) {
  return std::holds_alternative<mechanism::Vcg>(mech.variant()) ||
         std::holds_alternative<mechanism::Linear>(mech.variant()) ||
         std::holds_alternative<mechanism::Oel>(mech.variant());
}

Rational bcgc_surplus(const Setting& setting, const Mechanism& mech, std::size_t agent,
                      const Tuple& others, const SurplusStrategy& strategy) {
  const std::size_t n = agent_count(setting);
  if (others.size() + 1 != n || agent >= n) {
    throw ArgumentError("BCGC surplus needs n-1 other reports and a valid agent index");
  }

  std::optional<Rational> best;
  const auto consider = [&](Rational value) {
    if (!best || value > *best) best = std::move(value);
  };

  if (strategy.kind == SurplusStrategy::Kind::Grid) {
    if (!strategy.grid) throw ArgumentError("grid surplus strategy needs a grid");
    for (const auto& point : strategy.grid->points) {
      consider(total_at(setting, mech, others, agent, point));
    }
    return *best;
  }

  if (!supports_exact_surplus(mech)) {
    throw UnsupportedStrategy("exact BCGC surplus is unavailable for " + mech.describe());
  }

  const Tuple candidates = exact_candidates(setting, agent, others);
  Tuple values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) {
    values.push_back(total_at(setting, mech, others, agent, c));
    consider(values.back());
  }

  // The public project total jumps where the decision flips. Between two
  // consecutive candidates it is affine, so the one-sided limits at the
  // interval ends follow from two interior samples.
  if (!is_auction(setting)) {
    for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
      const Rational width = candidates[i + 1] - candidates[i];
      const Rational first = total_at(setting, mech, others, agent, candidates[i] + width / 3);
      const Rational second =
          total_at(setting, mech, others, agent, candidates[i] + width * 2 / 3);
      consider(2 * first - second);
      consider(2 * second - first);
    }
  }
  return *best;
}

Rational bcgc_surplus(const Setting& setting, const Mechanism& mech, const Tuple& others,
                      const SurplusStrategy& strategy) {
  return bcgc_surplus(setting, mech, 0, others, strategy);
}

Mechanism bcgc_transform(const Setting& setting, const Mechanism& mech,
                         const SurplusStrategy& strategy) {
  if (strategy.kind == SurplusStrategy::Kind::Grid && strategy.grid) {
    GridSpec::make(setting, strategy.grid->points);  // validates against the setting
  }
  return Mechanism::bcgc(mech, strategy);
}

RebateTable anonymize(const std::vector<AgentRebateTable>& family, const GridSpec& grid) {
  const std::size_t n = family.size();
  if (n < 2) throw ArgumentError("anonymization needs a family of at least 2 rebate tables");

  const std::size_t expected = enumerate::profile_count(grid, n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (family[j].size() != expected) {
      throw ArgumentError("rebate table " + std::to_string(j) + " has " +
                          std::to_string(family[j].size()) + " entries; the common grid needs " +
                          std::to_string(expected));
    }
    for (const auto& [key, _] : family[j]) {
      if (key.size() != n - 1 ||
          !std::all_of(key.begin(), key.end(), [&](const Rational& v) {
            return std::binary_search(grid.points.begin(), grid.points.end(), v);
          })) {
        throw ArgumentError("rebate table " + std::to_string(j) + " has key (" + join(key) +
                            ") outside the common grid");
      }
    }
  }

  RebateTable out;
  const Rational agents(static_cast<long>(n));
  for (const Tuple& x : enumerate::multisets(grid, n - 1)) {
    Rational sum = 0;
    enumerate::for_each_arrangement(x, [&](const Tuple& y) {
      for (const auto& h : family) sum += h.at(y);
    });
    // (n-1)!/orbit copies of each arrangement, divided by n!
    out.set(x, sum / (agents * Rational(enumerate::orbit_size(x))));
  }
  return out;
}

}  // namespace groves::transforms
