#include "groves/public_project.hpp"

#include <algorithm>
#include <string>

namespace groves::public_project {

namespace {

Rational sum(std::span<const Rational> values) {
  Rational out = 0;
  for (const auto& v : values) out += v;
  return out;
}

// max_d sum_{j != skip} v_j(d, theta_j) over d in {0, 1}
Rational best_without(const PublicProjectSetting& setting, std::span<const Rational> values,
                      std::size_t skip) {
  Rational built = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j != skip) built += values[j] - setting.shares[j];
  }
  return built > 0 ? built : Rational(0);
}

// Bracket of the BCGC surplus for a full profile.
Rational surplus_bracket(const PublicProjectSetting& setting, std::span<const Rational> values) {
  const std::size_t n = values.size();
  const int d = pp_decision(setting, values);
  Rational welfare = 0;
  for (std::size_t k = 0; k < n; ++k) welfare += pp_value(setting, k, d, values[k]);
  Rational out = Rational(static_cast<long>(n - 1)) * welfare;
  for (std::size_t k = 0; k < n; ++k) out -= best_without(setting, values, k);
  return out;
}

}  // namespace

int pp_decision(const PublicProjectSetting& setting, std::span<const Rational> values) {
  if (values.size() != setting.n) {
    throw ArgumentError("expected " + std::to_string(setting.n) + " valuations, got " +
                        std::to_string(values.size()));
  }
  for (const auto& v : values) {
    if (v < 0 || v > setting.cost) {
      throw ArgumentError("valuation " + to_string(v) + " outside [0, " + to_string(setting.cost) +
                          "]");
    }
  }
  return sum(values) >= setting.cost ? 1 : 0;
}

int pp_decision(const PublicProjectSetting& setting, const TypeProfile& profile) {
  return pp_decision(setting, std::span<const Rational>(profile.values()));
}

Rational pp_value(const PublicProjectSetting& setting, std::size_t agent, int decision,
                  const Rational& type) {
  if (decision == 0) return 0;
  return type - setting.shares.at(agent);
}

Tuple pp_vcg_tax(const PublicProjectSetting& setting, const TypeProfile& profile) {
  const auto& values = profile.values();
  const int d = pp_decision(setting, profile);
  Tuple out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Rational others_at_d = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j != i) others_at_d += pp_value(setting, j, d, values[j]);
    }
    out[i] = others_at_d - best_without(setting, values, i);
  }
  return out;
}

Tuple surplus_candidates(const PublicProjectSetting& setting, std::size_t agent,
                         const Tuple& others) {
  if (others.size() + 1 != setting.n || agent >= setting.n) {
    throw ArgumentError("surplus candidates need n-1 other reports and a valid agent");
  }
  const Tuple full_others = insert_at(others, agent, Rational(0));  // agent's slot is zero
  const Rational rest = sum(full_others);

  Tuple out{Rational(0), setting.cost, setting.cost - rest};
  for (std::size_t k = 0; k < setting.n; ++k) {
    if (k == agent) continue;
    out.push_back(setting.cost - setting.shares[k] - (rest - full_others[k]));
  }
  for (auto& x : out) x = std::clamp(x, Rational(0), setting.cost);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational pp_bcgc_surplus(const PublicProjectSetting& setting, std::size_t agent,
                         const Tuple& others) {
  std::optional<Rational> best;
  for (const auto& candidate : surplus_candidates(setting, agent, others)) {
    const Tuple full = insert_at(others, agent, candidate);
    Rational value = surplus_bracket(setting, full);
    if (!best || value > *best) best = std::move(value);
  }
  return *best;
}

}  // namespace groves::public_project
