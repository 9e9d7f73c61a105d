#pragma once

// Exact rational scalars backed by GMP.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace acf {

using Rational = mpq_class;
using Integer = mpz_class;

// Builds num/den in lowest terms. Throws on a zero or negative denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (sgn(den) <= 0) {
    throw std::invalid_argument("rational denominator must be positive, got " + den.get_str());
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer literal '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer literal '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

// Accepts "p", "-p" and "p/q".
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline Rational abs_value(const Rational& r) { return sgn(r) < 0 ? Rational(-r) : r; }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace acf
