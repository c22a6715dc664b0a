#pragma once

#include <string>
#include <vector>

#include "dualitylab/rational.hpp"

namespace dualitylab {

// Dense univariate polynomial over Rational, coefficient index = degree.
// Trailing zeros are trimmed; the zero polynomial has no coefficients.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly1 constant(Rational v);
  static Poly1 x();                       // the monomial x
  static Poly1 x_pow(unsigned k);         // x^k
  static Poly1 linear(Rational a0, Rational a1);  // a0 + a1*x

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coeff(unsigned i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading_coeff() const { return c_.empty() ? Rational(0) : c_.back(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  Poly1& operator+=(const Poly1& o);
  Poly1& operator-=(const Poly1& o);
  friend Poly1 operator+(Poly1 a, const Poly1& b) { return a += b; }
  friend Poly1 operator-(Poly1 a, const Poly1& b) { return a -= b; }
  friend Poly1 operator*(const Poly1& a, const Poly1& b);
  friend Poly1 operator*(const Poly1& a, const Rational& s);
  friend Poly1 operator*(const Rational& s, const Poly1& a) { return a * s; }
  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }

  // f(x + c), expanded by the binomial theorem; implements the shifts behind
  // the discrete difference operators.
  Poly1 shift(const Rational& c) const;
  Poly1 derivative(unsigned order = 1) const;
  Rational eval(const Rational& x) const;
  double eval(double x) const;

  // Remainder mod a (monic-scalable) divisor; used to reduce residuals to
  // their canonical representative on a finite support.
  Poly1 remainder(const Poly1& divisor) const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

Poly1 delta(const Poly1& f);   // f(x+1) - f(x)
Poly1 nabla(const Poly1& f);   // f(x) - f(x-1)

// Dense bivariate polynomial; coeff(i, j) multiplies x1^i x2^j. Stored as a
// (deg1+1) x (deg2+1) matrix, empty for the zero polynomial.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(std::vector<std::vector<Rational>> m) : m_(std::move(m)) { trim(); }
  static Poly2 constant(Rational v);
  static Poly2 x1();
  static Poly2 x2();
  static Poly2 outer(const Poly1& f, const Poly1& g);  // f(x1) * g(x2)

  bool is_zero() const { return m_.empty(); }
  int degree1() const { return static_cast<int>(m_.size()) - 1; }
  int degree2() const { return m_.empty() ? -1 : static_cast<int>(m_[0].size()) - 1; }
  Rational coeff(unsigned i, unsigned j) const;
  const std::vector<std::vector<Rational>>& matrix() const { return m_; }

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(const Poly2& a, const Rational& s);
  friend Poly2 operator*(const Rational& s, const Poly2& a) { return a * s; }
  friend bool operator==(const Poly2& a, const Poly2& b) { return a.m_ == b.m_; }

  Poly2 shift(const Rational& c1, const Rational& c2) const;  // F(x1+c1, x2+c2)
  Poly2 d1() const;  // ∂/∂x1
  Poly2 d2() const;  // ∂/∂x2
  Rational eval(const Rational& x1, const Rational& x2) const;
  double eval(double x1, double x2) const;

  // Reduce mod divisor(x1) and divisor(x2); canonical representative of the
  // induced function on a finite per-site support.
  Poly2 remainder_each_var(const Poly1& divisor) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<std::vector<Rational>> m_;
};

}  // namespace dualitylab
