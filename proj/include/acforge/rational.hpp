#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "acforge/error.hpp"

namespace acforge {

using BigInt = boost::multiprecision::cpp_int;
// Always normalized: gcd(num, den) = 1 and den > 0.
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

inline BigInt floor_of(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) --q;
  return q;
}

// Reduced form, integers without a "/1" suffix.
inline std::string format_rational(const Rational& r) {
  const BigInt& d = boost::multiprecision::denominator(r);
  std::string out = boost::multiprecision::numerator(r).str();
  if (d != 1) {
    out += '/';
    out += d.str();
  }
  return out;
}

namespace detail {

inline BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw InputError("malformed rational '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(s));
}

}  // namespace detail

// Accepts "p/q" or "p". A leading '-' is only accepted when allow_negative.
inline Rational parse_rational(std::string_view text, bool allow_negative = false) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    if (!allow_negative) {
      throw InputError("negative value '" + std::string(text) + "' not allowed");
    }
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  BigInt num = detail::parse_digits(body.substr(0, slash), text);
  BigInt den = 1;
  if (slash != std::string_view::npos) {
    den = detail::parse_digits(body.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

}  // namespace acforge
