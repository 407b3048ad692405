#pragma once

#include <vector>

#include "groves/core.hpp"

namespace groves::transforms {

/// S_i(theta_{-i}) = max over agent i's own report of the total tax T.
///
/// Exact: T is piecewise linear in the agent's report with kinks only at the
/// other agents' reports, the type bounds, and (public project) the decision
/// and pivotality thresholds. The result is the supremum over the closed type
/// interval, taking one-sided limits at any decision discontinuity. Supported
/// for Vcg, Linear and Oel mechanisms.
///
/// Grid: max over the grid points only; works for every mechanism and never
/// exceeds the Exact value.
Rational bcgc_surplus(const Setting& setting, const Mechanism& mech, std::size_t agent,
                      const Tuple& others, const SurplusStrategy& strategy);

/// Convenience overload for agent 0 (anonymous settings).
Rational bcgc_surplus(const Setting& setting, const Mechanism& mech, const Tuple& others,
                      const SurplusStrategy& strategy);

/// True when the Exact strategy can handle `mech`.
bool supports_exact_surplus(const Mechanism& mech);

/// t_i^BCGC = t_i - S_i / n. Throws UnsupportedStrategy if Exact is requested
/// for a mechanism without computable breakpoints.
Mechanism bcgc_transform(const Setting& setting, const Mechanism& mech,
                         const SurplusStrategy& strategy = SurplusStrategy::exact());

/// Permutation-averaged anonymous rebate
///   h'(x) = sum_{pi} sum_j h_j(x^pi) / n!
/// over a per-agent family defined on grid^(n-1). Averaging runs over the
/// distinct rearrangements of each multiset, weighted by orbit size.
RebateTable anonymize(const std::vector<AgentRebateTable>& family, const GridSpec& grid);

}  // namespace groves::transforms
