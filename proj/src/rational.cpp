#include "groves/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace groves {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto invalid = [&] {
    return std::invalid_argument("invalid rational literal: '" + std::string(text) + "'");
  };

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) throw invalid();
    const mpz_class d = parse_integer(den);
    if (d == 0) throw invalid();
    Rational r(parse_integer(num), d);
    r.canonicalize();
    return r;
  }

  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      negative = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if (whole.empty() && frac.empty()) throw invalid();
    if (!whole.empty() && !is_integer_literal(whole)) throw invalid();
    if (!frac.empty() && (!is_integer_literal(frac) || frac.front() == '-' || frac.front() == '+')) {
      throw invalid();
    }
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const mpz_class w = whole.empty() ? mpz_class(0) : parse_integer(whole);
    const mpz_class f = frac.empty() ? mpz_class(0) : parse_integer(frac);
    Rational r(w * scale + f, scale);
    r.canonicalize();
    if (negative) r = -r;
    return r;
  }

  if (!is_integer_literal(s)) throw invalid();
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  // round half away from zero: floor(|x| * scale + 1/2)
  const Rational scaled = magnitude * scale + Rational(1, 2);
  const mpz_class rounded = scaled.get_num() / scaled.get_den();
  const mpz_class whole = rounded / scale;
  const mpz_class frac = rounded % scale;

  std::string out = (negative && rounded != 0) ? "-" : "";
  out += whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

Tuple parse_tuple(std::string_view text) {
  Tuple out;
  const std::string_view s = trim(text);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_rational(s.substr(start, comma == std::string_view::npos ? s.size() - start
                                                                               : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const Tuple& values, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += separator;
    // integers render bare so table keys read like "3,2,1"
    out += values[i].get_den() == 1 ? values[i].get_num().get_str() : to_string(values[i]);
  }
  return out;
}

}  // namespace groves
