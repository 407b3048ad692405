#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "groves/core.hpp"

namespace groves::enumerate {

/// |grid|^n; throws ArgumentError on overflow of size_t.
std::size_t profile_count(const GridSpec& grid, std::size_t n);

/// Profile number `index` in lexicographic order (agent 0 most significant,
/// grid order ascending).
Tuple profile_at(const GridSpec& grid, std::size_t n, std::size_t index);

/// Visits grid^n in lexicographic order.
void for_each_profile(const GridSpec& grid, std::size_t n,
                      const std::function<void(const Tuple&)>& visit);

/// All multisets of `size` grid points, each as a descending tuple, in
/// lexicographic order of those tuples.
std::vector<Tuple> multisets(const GridSpec& grid, std::size_t size);

/// Visits every distinct rearrangement of `values` exactly once.
template <class Visit>
void for_each_arrangement(Tuple values, Visit&& visit) {
  std::sort(values.begin(), values.end());
  do {
    visit(static_cast<const Tuple&>(values));
  } while (std::next_permutation(values.begin(), values.end()));
}

/// Number of distinct rearrangements of `values`.
mpz_class orbit_size(const Tuple& values);

mpz_class factorial(std::size_t n);

}  // namespace groves::enumerate
