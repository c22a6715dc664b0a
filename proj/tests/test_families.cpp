#include <doctest.h>

#include "dualitylab/families.hpp"

using namespace dualitylab;

namespace {

std::vector<FamilySpec> small_grid() {
  return {Charlier{Rational(1)},        Charlier{Rational(3)},
          Krawtchouk{2, Rational(1, 2)}, Krawtchouk{5, Rational(4, 5)},
          Meixner{Rational(3, 2), Rational(1, 4)}, Meixner{Rational(1, 2), Rational(1, 2)},
          Hermite{},                    Laguerre{Rational(1, 2)},
          Laguerre{Rational(3)}};
}

}  // namespace

TEST_CASE("generate: first polynomials match the recurrences") {
  CHECK(generate(Charlier{Rational(2)}, 1).poly(1) ==
        Poly1::linear(1, Rational(-1, 2)));  // (lambda - x)/lambda
  CHECK(generate(Hermite{}, 1).poly(1) == Rational(2) * Poly1::x());
  CHECK(generate(Laguerre{Rational(3, 2)}, 1).poly(1) == Poly1::linear(Rational(3, 2), -1));
  CHECK(generate(Krawtchouk{4, Rational(1, 4)}, 1).poly(1) == Poly1::linear(-1, 1));  // x - 2jp
  CHECK(generate(Charlier{Rational(2)}, 5).poly(0) == Poly1::constant(1));
}

TEST_CASE("generate: degree and leading-coefficient structure") {
  for (const auto& fam : small_grid()) {
    const unsigned hi = std::min(10u, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    for (unsigned n = 0; n <= hi; ++n) CHECK(seq.poly(n).degree() == static_cast<int>(n));
    // alpha_n a_{n+1} = a_n
    for (unsigned n = 0; n + 1 <= hi; ++n)
      CHECK(recurrence_coefficients(fam, n).alpha * seq.poly(n + 1).leading_coeff() ==
            seq.poly(n).leading_coeff());
  }
}

TEST_CASE("generate: Krawtchouk capped at 2j") {
  CHECK_THROWS_AS(generate(Krawtchouk{2, Rational(1, 2)}, 3), std::invalid_argument);
  CHECK_NOTHROW(generate(Krawtchouk{2, Rational(1, 2)}, 2));
}

TEST_CASE("family parameter domains") {
  CHECK_THROWS_AS(generate(Charlier{Rational(0)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(generate(Krawtchouk{2, Rational(3, 2)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(generate(Meixner{Rational(-1), Rational(1, 2)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(generate(Laguerre{Rational(0)}, 2), std::invalid_argument);
}

TEST_CASE("hypergeometric_residual is the zero polynomial") {
  for (const auto& fam : small_grid()) {
    const unsigned hi = std::min(10u, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    for (unsigned n = 0; n <= hi; ++n) CHECK(hypergeometric_residual(seq, n).is_zero());
  }
  // Hermite n=2 by hand: (4x^2-2)'' - 2x (4x^2-2)' + 4 (4x^2-2) = 8 - 16x^2 + 16x^2 - 8
  const auto h = generate(Hermite{}, 2);
  CHECK(h.poly(2) == Poly1({Rational(-2), Rational(0), Rational(4)}));
  CHECK(hypergeometric_residual(h, 2).is_zero());
}

TEST_CASE("raising_residual is the zero polynomial") {
  for (const auto& fam : small_grid()) {
    const unsigned hi = std::min(10u, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    for (unsigned n = 1; n + 1 <= hi; ++n) CHECK(raising_residual(seq, n).is_zero());
  }
  // Hermite n=1: 2x*(2x) - 2 - (4x^2 - 2) = 0
  const auto h = generate(Hermite{}, 2);
  const Poly1 lhs = Rational(2) * (Poly1::x() * h.poly(1)) - h.poly(1).derivative();
  CHECK(lhs == h.poly(2));
  CHECK(raising_residual(h, 1).is_zero());
}

TEST_CASE("closed_norm examples and orthogonality") {
  CHECK(closed_norm(Krawtchouk{2, Rational(1, 2)}, 1) == Rational(1, 2));
  CHECK(closed_norm(Hermite{}, 2) == 8);
  CHECK(closed_norm(Charlier{Rational(5, 3)}, 0) == 1);

  for (const auto& fam : small_grid()) {
    const unsigned hi = std::min(10u, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    const auto measure = stationary_measure(fam);
    for (unsigned n = 0; n <= hi; ++n)
      for (unsigned m = 0; m <= hi; ++m) {
        const Rational expected = (n == m) ? closed_norm(fam, n) : Rational(0);
        CHECK(orthogonality_check(seq, measure, n, m) == expected);
      }
  }
  // named examples
  {
    const auto seq = generate(Charlier{Rational(1)}, 1);
    CHECK(orthogonality_check(seq, stationary_measure(Charlier{Rational(1)}), 1, 0) == 0);
  }
  {
    const auto seq = generate(Hermite{}, 1);
    CHECK(orthogonality_check(seq, stationary_measure(Hermite{}), 1, 1) == 2);
  }
  {
    const FamilySpec f = Krawtchouk{2, Rational(1, 2)};
    const auto seq = generate(f, 2);
    CHECK(orthogonality_check(seq, stationary_measure(f), 2, 1) == 0);
  }
}

TEST_CASE("rodrigues_value agrees with the generated polynomials") {
  const std::vector<FamilySpec> discrete = {Charlier{Rational(1)}, Charlier{Rational(3, 2)},
                                            Krawtchouk{4, Rational(2, 5)},
                                            Meixner{Rational(1, 2), Rational(1, 3)}};
  for (const auto& fam : discrete) {
    const unsigned hi = std::min(6u, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    for (unsigned n = 0; n <= hi; ++n) {
      const long xmax = family_degree_cap(fam) == 4 ? 4 : static_cast<long>(n) + 5;
      for (long x = 0; x <= xmax; ++x)
        CHECK(rodrigues_value(fam, n, x) == seq.poly(n).eval(Rational(x)));
    }
  }
  CHECK(rodrigues_value(Charlier{Rational(1)}, 1, 0) == 1);
  CHECK(rodrigues_value(Krawtchouk{2, Rational(1, 2)}, 1, 1) == 0);
  CHECK(rodrigues_value(Meixner{Rational(2), Rational(1, 2)}, 0, 3) == 1);
}

TEST_CASE("rodrigues_value rejections") {
  CHECK_THROWS_AS(rodrigues_value(Hermite{}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(rodrigues_value(Laguerre{Rational(1)}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(rodrigues_value(Charlier{Rational(1)}, 1, -2), std::invalid_argument);
  CHECK_THROWS_AS(rodrigues_value(Krawtchouk{2, Rational(1, 2)}, 1, 5), std::invalid_argument);
}

TEST_CASE("hypergeometric closed forms: Charlier equals the recurrence normalization") {
  const FamilySpec f = Charlier{Rational(5, 2)};
  const auto seq = generate(f, 8);
  for (unsigned n = 0; n <= 8; ++n) CHECK(hypergeometric_closed_form(f, n) == seq.poly(n));
}
