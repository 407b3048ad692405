#include "groves/fixtures.hpp"

namespace groves::fixtures {

namespace {

Rational q(long num, long den = 1) {
  Rational out{mpz_class(num), mpz_class(den)};
  out.canonicalize();
  return out;
}

RebateTable build(bool prime) {
  RebateTable table;
  for (const auto& row : welfare_gap_rows()) {
    table.set(Tuple{Rational(row.others[0]), Rational(row.others[1]), Rational(row.others[2])},
              prime ? row.r_prime : row.r);
  }
  return table;
}

}  // namespace

const std::array<TableRow, 20>& welfare_gap_rows() {
  static const std::array<TableRow, 20> rows{{
      {{0, 0, 0}, q(0), q(0)},
      {{1, 0, 0}, q(0), q(0)},
      {{1, 1, 0}, q(1, 4), q(1, 4)},
      {{1, 1, 1}, q(1, 4), q(1, 4)},
      {{2, 0, 0}, q(0), q(0)},
      {{2, 1, 0}, q(1, 12), q(7, 24)},
      {{2, 1, 1}, q(0), q(1, 6)},
      {{2, 2, 0}, q(1, 2), q(1, 2)},
      {{2, 2, 1}, q(0), q(1, 4)},
      {{2, 2, 2}, q(1, 2), q(1, 2)},
      {{3, 0, 0}, q(0), q(0)},
      {{3, 1, 0}, q(1, 4), q(1, 4)},
      {{3, 1, 1}, q(0), q(1, 4)},
      {{3, 2, 0}, q(2, 3), q(2, 3)},
      {{3, 2, 1}, q(1), q(19, 24)},
      {{3, 2, 2}, q(0), q(1, 6)},
      {{3, 3, 0}, q(2, 3), q(5, 6)},
      {{3, 3, 1}, q(0), q(7, 12)},
      {{3, 3, 2}, q(1), q(5, 6)},
      {{3, 3, 3}, q(0), q(1, 2)},
  }};
  return rows;
}

AuctionSetting welfare_gap_setting() { return AuctionSetting::make(4, 1, Rational(0), Rational(3)); }

GridSpec welfare_gap_grid() {
  return GridSpec::make(welfare_gap_setting(),
                        Tuple{Rational(0), Rational(1), Rational(2), Rational(3)});
}

RebateTable welfare_gap_table_r() { return build(false); }
RebateTable welfare_gap_table_r_prime() { return build(true); }

}  // namespace groves::fixtures
