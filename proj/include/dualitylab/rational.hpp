#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dualitylab {

// Exact rational scalar used throughout the identity checks. cpp_rational keeps
// values in lowest terms with a positive denominator, which is exactly the
// invariant we need; floating point enters only in the semigroup module.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Int r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// Pochhammer symbol (a)_k = a(a+1)...(a+k-1); rational for rational a.
inline Rational pochhammer(const Rational& a, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= (a + i);
  return r;
}

// Falling factorial a(a-1)...(a-k+1).
inline Rational falling_factorial(const Rational& a, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= (a - i);
  return r;
}

// (2n-1)!! with the empty-product convention (-1)!! = 1.
inline Int double_factorial_odd(unsigned n) {
  Int r = 1;
  for (unsigned i = 1; i < 2 * n; i += 2) r *= i;
  return r;
}

inline Rational rat_pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("rat_pow: zero base with negative exponent");
    return 1 / rat_pow(base, -e);
  }
  Rational r = 1, b = base;
  unsigned long n = static_cast<unsigned long>(e);
  while (n != 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Accepts "n", "-n" and "n/d"; used by config and report code so fractions
// survive the round trip exactly.
inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Int(std::string(s)));
    Int num{std::string(s.substr(0, slash))};
    Int den{std::string(s.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("parse_rational: cannot parse '" + std::string(s) + "'");
  }
}

inline std::string to_fraction_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace dualitylab
