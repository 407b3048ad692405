#pragma once

#include <array>

#include "groves/core.hpp"

// Two anonymous rebates for a 4-bidder single-item auction with integer bids
// 0..3 where the second welfare dominates the first without dominating it.
namespace groves::fixtures {

struct TableRow {
  std::array<int, 3> others;  // descending
  Rational r;
  Rational r_prime;
};

/// All 20 multisets of three bids from {0,1,2,3}.
const std::array<TableRow, 20>& welfare_gap_rows();

AuctionSetting welfare_gap_setting();  // n=4, m=1, L=0, U=3
GridSpec welfare_gap_grid();           // {0,1,2,3}
RebateTable welfare_gap_table_r();
RebateTable welfare_gap_table_r_prime();

}  // namespace groves::fixtures
