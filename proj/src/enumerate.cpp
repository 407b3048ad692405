#include "groves/enumerate.hpp"

#include <limits>
#include <map>

namespace groves::enumerate {

std::size_t profile_count(const GridSpec& grid, std::size_t n) {
  const std::size_t g = grid.points.size();
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / g) {
      throw ArgumentError("grid profile space too large to enumerate");
    }
    out *= g;
  }
  return out;
}

Tuple profile_at(const GridSpec& grid, std::size_t n, std::size_t index) {
  const std::size_t g = grid.points.size();
  Tuple out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = grid.points[index % g];
    index /= g;
  }
  return out;
}

void for_each_profile(const GridSpec& grid, std::size_t n,
                      const std::function<void(const Tuple&)>& visit) {
  const std::size_t g = grid.points.size();
  std::vector<std::size_t> digits(n, 0);
  Tuple current(n, grid.points.front());
  while (true) {
    visit(current);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < g) {
        current[pos] = grid.points[digits[pos]];
        break;
      }
      digits[pos] = 0;
      current[pos] = grid.points.front();
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<Tuple> multisets(const GridSpec& grid, std::size_t size) {
  std::vector<Tuple> out;
  const std::size_t g = grid.points.size();
  // non-increasing index sequences, emitted in ascending lexicographic order of values
  std::vector<std::size_t> idx(size, 0);
  while (true) {
    Tuple t(size);
    for (std::size_t i = 0; i < size; ++i) t[i] = grid.points[idx[i]];
    out.push_back(std::move(t));

    std::size_t pos = size;
    bool advanced = false;
    while (pos > 0) {
      --pos;
      if (idx[pos] + 1 < g && (pos == 0 || idx[pos] + 1 <= idx[pos - 1])) {
        ++idx[pos];
        for (std::size_t j = pos + 1; j < size; ++j) idx[j] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

mpz_class factorial(std::size_t n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

mpz_class orbit_size(const Tuple& values) {
  std::map<Rational, std::size_t> counts;
  for (const auto& v : values) ++counts[v];
  mpz_class out = factorial(values.size());
  for (const auto& [_, c] : counts) out /= factorial(c);
  return out;
}

}  // namespace groves::enumerate
