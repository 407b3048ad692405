#pragma once

#include "groves/core.hpp"

// Public project: build (1) or not (0) at cost c; agent i values the outcome
// d at d * (theta_i - c_i). Equal shares are the special case c_i = c/n.
namespace groves::public_project {

/// 1 iff sum theta >= c. Throws ArgumentError if any value lies outside [0, c].
int pp_decision(const PublicProjectSetting& setting, std::span<const Rational> values);
int pp_decision(const PublicProjectSetting& setting, const TypeProfile& profile);

/// d * (theta_i - c_i)
Rational pp_value(const PublicProjectSetting& setting, std::size_t agent, int decision,
                  const Rational& type);

/// Clarke taxes; nonzero only for pivotal agents, always <= 0.
Tuple pp_vcg_tax(const PublicProjectSetting& setting, const TypeProfile& profile);

/// Breakpoints of the total VCG tax as agent `agent`'s own report sweeps [0, c],
/// given the others' reports in agent order (agent's slot omitted).
/// Always contains 0 and c; sorted ascending, deduplicated.
Tuple surplus_candidates(const PublicProjectSetting& setting, std::size_t agent,
                         const Tuple& others);

/// max over theta'_i in [0, c] of
///   (n-1) * sum_k v_k(f(theta'), theta'_k) - sum_k max_d sum_{j != k} v_j(d, theta'_j)
/// evaluated on the candidate breakpoints. Zero whenever shares are equal.
Rational pp_bcgc_surplus(const PublicProjectSetting& setting, std::size_t agent,
                         const Tuple& others);

}  // namespace groves::public_project
