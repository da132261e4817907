#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fplab {

// Exact arbitrary-precision rational scalar. GMP keeps values canonical
// (lowest terms, positive denominator) through arithmetic; parsing below
// canonicalizes explicitly because mpq string construction does not.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline BigInt rational_num(const Rational& r) { return numerator(r); }
inline BigInt rational_den(const Rational& r) { return denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Renders "p/q", or just "p" when q == 1.
inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Accepts "p" or "p/q" with optional leading '-', decimal digits only,
// q > 0. Anything else is rejected.
inline std::optional<Rational> try_parse_rational(std::string_view token) {
  if (token.empty()) return std::nullopt;
  std::string_view num = token;
  std::string_view den;
  if (auto slash = token.find('/'); slash != std::string_view::npos) {
    num = token.substr(0, slash);
    den = token.substr(slash + 1);
    if (den.empty()) return std::nullopt;
  }
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num, true)) return std::nullopt;
  if (!den.empty() && !digits_ok(den, false)) return std::nullopt;
  BigInt p{std::string(num)};
  BigInt q = den.empty() ? BigInt(1) : BigInt{std::string(den)};
  if (q == 0) return std::nullopt;
  // Division canonicalizes; the raw string constructor would not.
  return Rational(p) / Rational(q);
}

inline Rational parse_rational(std::string_view token) {
  auto r = try_parse_rational(token);
  if (!r)
    throw std::invalid_argument("not a rational token: '" + std::string(token) +
                                "'");
  return *r;
}

}  // namespace fplab
