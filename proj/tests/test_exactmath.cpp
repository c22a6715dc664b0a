#include <doctest.h>

#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dualitylab/moments.hpp"
#include "dualitylab/poly.hpp"
#include "dualitylab/rational.hpp"

using namespace dualitylab;

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

BigFloat to_big(const Rational& r) {
  return BigFloat(numerator(r).str()) / BigFloat(denominator(r).str());
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  return Rational(num(rng), den(rng));
}

Poly1 random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<Rational> c(deg(rng) + 1);
  for (auto& v : c) v = random_rational(rng);
  return Poly1(std::move(c));
}

// Truncated exact-rational series oracle for the discrete measures: the ratio
// of truncated sums converges to the normalized moment; the truncation points
// below leave a relative tail far under 1e-30.
Rational discrete_series_oracle(const MomentFunctional& m, unsigned r, long x_max) {
  Rational num = 0, den = 0;
  for (long x = 0; x <= x_max; ++x) {
    const Rational w = m.weight(x);
    num += rat_pow(Rational(x), r) * w;
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_CASE("rational helpers") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK(to_fraction_string(Rational(-4, 6)) == "-2/3");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  // canonical form: lowest terms, positive denominator
  const Rational r(6, -8);
  CHECK(numerator(r) == -3);
  CHECK(denominator(r) == 4);
  CHECK(pochhammer(Rational(1, 2), 3) == Rational(15, 8));
  CHECK(double_factorial_odd(0) == 1);
  CHECK(double_factorial_odd(3) == 15);
  CHECK(rat_pow(Rational(2, 3), -2) == Rational(9, 4));
}

TEST_CASE("poly_shift examples") {
  const Poly1 x = Poly1::x();
  CHECK((x * x).shift(1) == Poly1({Rational(1), Rational(2), Rational(1)}));
  CHECK(Poly1::constant(1).shift(Rational(7, 3)) == Poly1::constant(1));
  CHECK(x.shift(-1) == Poly1::linear(-1, 1));
}

TEST_CASE("poly_derivative examples") {
  const Poly1 x3 = Poly1::x_pow(3);
  CHECK(x3.derivative(1) == Rational(3) * Poly1::x_pow(2));
  CHECK(x3.derivative(4).is_zero());
  CHECK((Rational(2) * Poly1::x_pow(2) - Poly1::constant(1)).derivative(2) == Poly1::constant(4));
}

TEST_CASE("poly_shift round trip on random polynomials") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    const Poly1 f = random_poly(rng, 12);
    const Rational c = random_rational(rng);
    CHECK(f.shift(c).shift(-c) == f);
  }
}

TEST_CASE("poly remainder") {
  // x^4 mod x(x-1)(x-2)(x-3) leaves the cubic interpolant of x^4 on {0..3}
  Poly1 v = Poly1::constant(1);
  for (int m = 0; m < 4; ++m) v = v * Poly1::linear(-Rational(m), 1);
  const Poly1 rem = Poly1::x_pow(4).remainder(v);
  CHECK(rem.degree() <= 3);
  for (int m = 0; m < 4; ++m) CHECK(rem.eval(Rational(m)) == rat_pow(Rational(m), 4));
  CHECK(Poly1::x_pow(2).remainder(v) == Poly1::x_pow(2));
}

TEST_CASE("measure_moments spec examples") {
  CHECK(MomentFunctional(Poisson{1}).moment(2) == 2);
  CHECK(MomentFunctional(GaussianHalf{}).moment(1) == 0);
  CHECK(MomentFunctional(BetaSym{1}).moment(1) == Rational(1, 2));
  CHECK(MomentFunctional(GammaShape{1}).moment(3) == 6);
  CHECK(MomentFunctional(Binomial{4, Rational(1, 2)}).moment(1) == 2);
  // every measure is normalized
  for (const Measure m : {Measure(Poisson{Rational(3, 2)}), Measure(Binomial{3, Rational(1, 3)}),
                          Measure(NegativeBinomial{Rational(1, 2), Rational(2, 5)}),
                          Measure(GaussianHalf{}), Measure(GammaShape{Rational(5, 2)}),
                          Measure(BetaSym{Rational(1, 2)})})
    CHECK(MomentFunctional(m).moment(0) == 1);
}

TEST_CASE("measure parameter domains rejected") {
  CHECK_THROWS_AS(MomentFunctional(Poisson{0}), std::invalid_argument);
  CHECK_THROWS_AS(MomentFunctional(Binomial{2, Rational(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(MomentFunctional(NegativeBinomial{Rational(-1), Rational(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MomentFunctional(GammaShape{0}), std::invalid_argument);
  CHECK_THROWS_AS(MomentFunctional(BetaSym{Rational(-1, 2)}), std::invalid_argument);
}

TEST_CASE("discrete moments against exact truncated series oracle") {
  for (const Rational lambda : {Rational(1), Rational(3), Rational(1, 2)}) {
    const MomentFunctional m((Poisson{lambda}));
    for (unsigned r = 0; r <= 20; ++r) {
      const Rational oracle = discrete_series_oracle(m, r, 400);
      CHECK(boost::multiprecision::abs(to_big(m.moment(r) / oracle - 1)) < BigFloat("1e-30"));
    }
  }
  // Binomial support is finite, so the oracle sum is exact: demand equality
  {
    const MomentFunctional m(Binomial{5, Rational(2, 5)});
    for (unsigned r = 0; r <= 20; ++r) CHECK(m.moment(r) == discrete_series_oracle(m, r, 5));
  }
  for (const auto& [tk, p] : std::vector<std::pair<Rational, Rational>>{
           {Rational(3, 2), Rational(1, 3)}, {Rational(1, 2), Rational(4, 5)}}) {
    const MomentFunctional m(NegativeBinomial{tk, p});
    for (unsigned r = 0; r <= 20; ++r) {
      const Rational oracle = discrete_series_oracle(m, r, 2500);
      CHECK(boost::multiprecision::abs(to_big(m.moment(r) / oracle - 1)) < BigFloat("1e-30"));
    }
  }
}

TEST_CASE("continuous moments against high-precision quadrature oracle") {
  boost::math::quadrature::exp_sinh<BigFloat> half_line;
  boost::math::quadrature::tanh_sinh<BigFloat> unit_interval;
  const BigFloat tol("1e-30");

  SUBCASE("gaussian, variance one half") {
    const MomentFunctional m((GaussianHalf{}));
    const BigFloat sqrt_pi = boost::math::constants::root_pi<BigFloat>();
    for (unsigned r = 0; r <= 20; r += 2) {
      const BigFloat q = 2 * half_line.integrate([&](const BigFloat& x) {
        return pow(x, static_cast<int>(r)) * exp(-x * x);
      }) / sqrt_pi;
      CHECK(abs(to_big(m.moment(r)) / q - 1) < tol);
      if (r + 1 <= 20) CHECK(m.moment(r + 1) == 0);
    }
  }
  SUBCASE("gamma of rational shape") {
    for (const Rational tk : {Rational(1, 2), Rational(3)}) {
      const MomentFunctional m((GammaShape{tk}));
      const BigFloat a = to_big(tk);
      const BigFloat norm = boost::math::tgamma(a);
      for (unsigned r = 0; r <= 20; ++r) {
        const BigFloat q = half_line.integrate([&](const BigFloat& x) {
          return pow(x, static_cast<int>(r)) * pow(x, a - 1) * exp(-x);
        }) / norm;
        CHECK(abs(to_big(m.moment(r)) / q - 1) < tol);
      }
    }
  }
  SUBCASE("symmetric beta") {
    for (const Rational tk : {Rational(1, 2), Rational(3, 2)}) {
      const MomentFunctional m((BetaSym{tk}));
      const BigFloat a = to_big(tk);
      const BigFloat norm =
          boost::math::tgamma(a) * boost::math::tgamma(a) / boost::math::tgamma(2 * a);
      for (unsigned r = 0; r <= 20; ++r) {
        const BigFloat q = unit_interval.integrate(
            [&](const BigFloat& x) {
              return pow(x, static_cast<int>(r)) * pow(x, a - 1) * pow(1 - x, a - 1);
            },
            BigFloat(0), BigFloat(1)) / norm;
        CHECK(abs(to_big(m.moment(r)) / q - 1) < tol);
      }
    }
  }
}

TEST_CASE("inner_product examples and bilinearity") {
  const MomentFunctional poisson(Poisson{Rational(7, 4)});
  CHECK(inner_product(Poly1::constant(1), Poly1::constant(1), poisson) == 1);
  CHECK(inner_product(Poly1::x(), Poly1::constant(1), poisson) == Rational(7, 4));
  // <H_1, H_1> under the Gaussian weight: H_1 = 2x, d_1^2 = 2
  const MomentFunctional gauss((GaussianHalf{}));
  const Poly1 h1 = Rational(2) * Poly1::x();
  CHECK(inner_product(h1, h1, gauss) == 2);

  std::mt19937_64 rng(777);
  for (int i = 0; i < 100; ++i) {
    const Poly1 f = random_poly(rng, 6), g = random_poly(rng, 6), h = random_poly(rng, 6);
    const Rational a = random_rational(rng);
    CHECK(inner_product(f, g, poisson) == inner_product(g, f, poisson));
    CHECK(inner_product(f + a * g, h, poisson) ==
          inner_product(f, h, poisson) + a * inner_product(g, h, poisson));
  }
}

TEST_CASE("Poly2 separable products equal outer products") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 100; ++i) {
    const Poly1 f1 = random_poly(rng, 5), g1 = random_poly(rng, 5);
    const Poly1 f2 = random_poly(rng, 5), g2 = random_poly(rng, 5);
    CHECK(Poly2::outer(f1, g1) * Poly2::outer(f2, g2) == Poly2::outer(f1 * f2, g1 * g2));
  }
}

TEST_CASE("Poly2 shift, derivatives, evaluation") {
  const Poly2 F = Poly2::outer(Poly1::x_pow(2), Poly1::linear(1, 1));  // x1^2 (1 + x2)
  CHECK(F.shift(1, -1) == Poly2::outer(Poly1::x_pow(2).shift(1), Poly1::linear(1, 1).shift(-1)));
  CHECK(F.d1() == Poly2::outer(Rational(2) * Poly1::x(), Poly1::linear(1, 1)));
  CHECK(F.d2() == Poly2::outer(Poly1::x_pow(2), Poly1::constant(1)));
  CHECK(F.eval(Rational(2), Rational(3)) == 16);
}
