#include "groves/auction.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace groves::auction {

mpz_class binomial(long p, long q) {
  if (p < 0 || q < 0 || q > p) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(q));
  return out;
}

std::vector<std::size_t> efficient_allocation(const AuctionSetting& setting,
                                              const TypeProfile& profile) {
  std::vector<std::size_t> order(profile.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable: equal bids keep index order, so the lowest index wins ties
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return profile[a] > profile[b]; });
  order.resize(setting.m);
  std::sort(order.begin(), order.end());
  return order;
}

Tuple vcg_tax(const AuctionSetting& setting, const TypeProfile& profile) {
  const auto winners = efficient_allocation(setting, profile);
  // removing one of the m highest bids leaves [theta]_{m+1} as the m-th highest
  const Rational price = sorted_stat(profile, setting.m + 1);
  Tuple out(profile.size(), Rational(0));
  for (std::size_t i : winners) out[i] = -price;
  return out;
}

Rational linear_rebate(const RebateCoefficients& coeffs, std::span<const Rational> others) {
  if (coeffs.slopes.size() != others.size()) {
    throw ArgumentError("linear rebate expects " + std::to_string(coeffs.slopes.size()) +
                        " other reports, got " + std::to_string(others.size()));
  }
  const Tuple sorted = canonical(Tuple(others.begin(), others.end()));
  Rational out = coeffs.constant;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (sgn(coeffs.slopes[j]) != 0) out += coeffs.slopes[j] * sorted[j];
  }
  return out;
}

OelIndex make_oel_index(const AuctionSetting& setting, std::size_t k) {
  if (k > setting.n) {
    throw ArgumentError("OEL index k=" + std::to_string(k) + " outside 0.." +
                        std::to_string(setting.n));
  }
  const long diff = static_cast<long>(k) - static_cast<long>(setting.m);
  if (diff % 2 == 0) {
    throw ArgumentError("OEL index k=" + std::to_string(k) + " requires k - m odd (m=" +
                        std::to_string(setting.m) + ")");
  }
  return OelIndex{k};
}

namespace {

// Slope used for indices 1..m in the k <= m branches.
Rational lower_branch_slope(long n, long m, long i) {
  const mpz_class num = ((m - i) % 2 == 0) ? binomial(n - i - 1, n - m - 1)
                                            : mpz_class(-binomial(n - i - 1, n - m - 1));
  Rational out(num, binomial(m - 1, i - 1));
  out.canonicalize();
  return out;
}

// Slope used for indices m+1..n-1 in the k >= m+1 branches.
Rational upper_branch_slope(long n, long m, long i) {
  const mpz_class num = ((m - i - 1) % 2 == 0) ? binomial(i - 1, m - 1)
                                                : mpz_class(-binomial(i - 1, m - 1));
  Rational out(num, binomial(n - m - 1, n - i - 1));
  out.canonicalize();
  return out;
}

}  // namespace

RebateCoefficients oel_coefficients(const AuctionSetting& setting, OelIndex index) {
  make_oel_index(setting, index.k);
  const long n = static_cast<long>(setting.n);
  const long m = static_cast<long>(setting.m);
  const long k = static_cast<long>(index.k);
  Rational share{mpz_class(m), mpz_class(n)};
  share.canonicalize();

  RebateCoefficients out{Rational(0), Tuple(setting.n - 1, Rational(0))};
  auto slope = [&](long i) -> Rational& { return out.slopes[static_cast<std::size_t>(i - 1)]; };

  if (k <= m) {
    // indices max(k,0)+1 .. m carry the alternating slopes
    Rational tail = 0;
    for (long i = k + 1; i <= m; ++i) {
      slope(i) = lower_branch_slope(n, m, i);
      tail += slope(i);
    }
    if (k == 0) {
      out.constant = setting.upper * share - setting.upper * tail;
    } else {
      slope(k) = share - tail;
    }
  } else {
    const long last = (k == n) ? n - 1 : k - 1;
    Rational tail = 0;
    for (long i = m + 1; i <= last; ++i) {
      slope(i) = upper_branch_slope(n, m, i);
      tail += slope(i);
    }
    if (k == n) {
      out.constant = setting.lower * share - setting.lower * tail;
    } else {
      slope(k) = share - tail;
    }
  }
  for (auto& c : out.slopes) c.canonicalize();
  out.constant.canonicalize();
  return out;
}

Tuple oel_tax(const AuctionSetting& setting, OelIndex index, const TypeProfile& profile) {
  const RebateCoefficients coeffs = oel_coefficients(setting, index);
  Tuple out = vcg_tax(setting, profile);
  // Agent i's sorted others are `sorted` with one copy of theta_i removed at
  // position p, so the rebate is before[p] + after[p].
  const Tuple sorted = canonical(profile.values());
  const std::size_t n = sorted.size();
  Tuple before(n, Rational(0)), after(n, Rational(0));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    before[j + 1] = before[j];
    if (sgn(coeffs.slopes[j]) != 0) before[j + 1] += coeffs.slopes[j] * sorted[j];
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    after[j] = after[j + 1];
    if (sgn(coeffs.slopes[j]) != 0) after[j] += coeffs.slopes[j] * sorted[j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(
        std::find(sorted.begin(), sorted.end(), profile[i]) - sorted.begin());
    out[i] += coeffs.constant + before[p] + after[p];
  }
  return out;
}

bool oel_zero_boundary(const AuctionSetting& setting, OelIndex index, const TypeProfile& profile) {
  make_oel_index(setting, index.k);
  const std::size_t n = setting.n;
  const std::size_t k = index.k;
  if (k == 0) return sorted_stat(profile, 1) == setting.upper;
  if (k == n) return sorted_stat(profile, n) == setting.lower;
  return sorted_stat(profile, k) == sorted_stat(profile, k + 1);
}

}  // namespace groves::auction
