#pragma once

#include <vector>

#include "groves/core.hpp"

// Multi-unit auction with unit demand: m identical units, each bidder wants one.
namespace groves::auction {

/// Exact binomial coefficient; zero when q < 0 or q > p.
mpz_class binomial(long p, long q);

/// The m highest bidders, lowest index first among ties. Returned ascending.
std::vector<std::size_t> efficient_allocation(const AuctionSetting& setting,
                                              const TypeProfile& profile);

/// Winner i pays the m-th highest other bid; losers pay nothing.
Tuple vcg_tax(const AuctionSetting& setting, const TypeProfile& profile);

/// constant + sum_j slope_j * (j-th highest of `others`).
Rational linear_rebate(const RebateCoefficients& coeffs, std::span<const Rational> others);

/// Validates 0 <= k <= n and k - m odd.
OelIndex make_oel_index(const AuctionSetting& setting, std::size_t k);

/// Coefficients of the OEL mechanism with index k. The constant term is
/// nonzero only for k = 0 (scaled by U) and k = n (scaled by L).
RebateCoefficients oel_coefficients(const AuctionSetting& setting, OelIndex index);

Tuple oel_tax(const AuctionSetting& setting, OelIndex index, const TypeProfile& profile);

/// The profiles on which the OEL total tax is exactly zero:
///   k = 0: [theta]_1 = U;  1 <= k <= n-1: [theta]_k = [theta]_{k+1};  k = n: [theta]_n = L.
bool oel_zero_boundary(const AuctionSetting& setting, OelIndex index, const TypeProfile& profile);

}  // namespace groves::auction
