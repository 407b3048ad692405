#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace groves {

/// Exact arbitrary-precision rational. Every monetary or type value in the
/// library is one of these; there is no floating point on any decision path.
using Rational = mpq_class;

/// An ordered sequence of types (a profile's values, or the reports of the
/// other agents).
using Tuple = std::vector<Rational>;

/// Accepts "p/q", "p", and finite decimals such as "-1.25".
/// Throws std::invalid_argument on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

/// Always "numerator/denominator" in lowest terms, e.g. "0/1", "-7/24".
std::string to_string(const Rational& value);

/// Rounded decimal rendering with `digits` fractional digits (half away from zero).
std::string to_decimal(const Rational& value, int digits);

/// Comma-separated list of rationals ("3,2,1/2").
Tuple parse_tuple(std::string_view text);
std::string join(const Tuple& values, std::string_view separator = ",");

}  // namespace groves
