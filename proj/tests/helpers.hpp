#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "groves/core.hpp"
#include "groves/enumerate.hpp"
#include "groves/rational.hpp"

namespace testing {

using groves::Rational;
using groves::Tuple;

inline Rational Q(std::string_view text) { return groves::parse_rational(text); }
inline Rational Q(long num, long den = 1) {
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

inline Tuple T(std::initializer_list<long> values) {
  Tuple out;
  for (long v : values) out.emplace_back(v);
  return out;
}

inline Tuple T(const char* text) { return groves::parse_tuple(text); }

/// Deterministic generator so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

/// Random rational p/q with |p| <= range, 1 <= q <= den.
inline Rational random_rational(long range, long den = 6) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> d(1, den);
  return Q(num(rng()), d(rng()));
}

/// Random grid point.
inline Rational pick(const groves::GridSpec& grid) {
  std::uniform_int_distribution<std::size_t> idx(0, grid.points.size() - 1);
  return grid.points[idx(rng())];
}

inline Tuple random_profile(const groves::GridSpec& grid, std::size_t n) {
  Tuple out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(grid));
  return out;
}

// ---------------------------------------------------------------------------
// Independent Clarke oracles: enumerate every outcome and take maxima directly.

/// Auction: an outcome is a set of m winners; v_i = theta_i if i wins.
inline Tuple clarke_auction(std::size_t m, const Tuple& theta) {
  const std::size_t n = theta.size();
  auto best_without = [&](std::optional<std::size_t> skip) {
    Rational best = 0;
    bool first = true;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + m, true);
    std::sort(mask.begin(), mask.end());
    do {
      Rational sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask[j] && (!skip || j != *skip)) sum += theta[j];
      }
      if (first || sum > best) best = sum;
      first = false;
    } while (std::next_permutation(mask.begin(), mask.end()));
    return best;
  };
  // the efficient outcome maximizes everyone's value; taxes only need sums
  Tuple sorted = theta;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  Rational total_eff = 0;
  for (std::size_t j = 0; j < m; ++j) total_eff += sorted[j];
  // winners by lowest index among ties
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return theta[a] > theta[b]; });
  std::vector<bool> wins(n, false);
  for (std::size_t j = 0; j < m; ++j) wins[order[j]] = true;
  Tuple taxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational others_at_eff = total_eff - (wins[i] ? theta[i] : Rational(0));
    taxes[i] = others_at_eff - best_without(i);
  }
  return taxes;
}

/// Public project: brute force over d in {0, 1}.
inline Tuple clarke_project(const Rational& cost, const Tuple& shares, const Tuple& theta) {
  const std::size_t n = theta.size();
  Rational sum = 0;
  for (const auto& v : theta) sum += v;
  const int d = sum >= cost ? 1 : 0;
  Tuple taxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational others1 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others1 += theta[j] - shares[j];
    }
    const Rational at_f = d ? others1 : Rational(0);
    taxes[i] = at_f - std::max(Rational(0), others1);
  }
  return taxes;
}

}  // namespace testing
