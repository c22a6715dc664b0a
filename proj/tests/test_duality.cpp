#include <doctest.h>

#include <random>

#include "dualitylab/duality.hpp"

using namespace dualitylab;

namespace {

std::vector<DualityPair> small_pair_grid() {
  std::vector<DualityPair> pairs;
  PairParams pp;
  pp.two_j = 2;
  pp.p = Rational(1, 2);
  pairs.push_back(make_duality_pair(PairTag::SepSep, pp));
  pp = {};
  pp.two_k = Rational(3, 2);
  pp.p = Rational(1, 4);
  pairs.push_back(make_duality_pair(PairTag::SipSip, pp));
  pp = {};
  pp.lambda = Rational(1);
  pairs.push_back(make_duality_pair(PairTag::IrwIrw, pp));
  pairs.push_back(make_duality_pair(PairTag::BmpSip, {}));
  pp = {};
  pp.two_k = Rational(1, 2);
  pairs.push_back(make_duality_pair(PairTag::BepSip, pp));
  pp = {};
  pp.two_k = Rational(1);
  pairs.push_back(make_duality_pair(PairTag::KmpDualKmp, pp));
  return pairs;
}

}  // namespace

TEST_CASE("duality_function spec examples") {
  PairParams pp;
  pp.lambda = Rational(2);
  CHECK(make_duality_pair(PairTag::IrwIrw, pp).family.duality_function(0) == Poly1::constant(1));

  CHECK(DualityFamily::theorem_normalized(Hermite{}).duality_function(1) ==
        Poly1({Rational(-2), Rational(0), Rational(4)}));  // H_2 / 1!!

  CHECK(DualityFamily::theorem_normalized(Krawtchouk{2, Rational(1, 2)}).duality_function(1) ==
        Poly1::linear(Rational(-1, 2), Rational(1, 2)));  // (x-1)/2

  // paper formula at 2k = 2 (k = 1): 1 - x/2; at 2k = 1: 1 - x
  CHECK(DualityFamily::theorem_normalized(Laguerre{Rational(2)}).duality_function(1) ==
        Poly1::linear(1, Rational(-1, 2)));
  CHECK(DualityFamily::theorem_normalized(Laguerre{Rational(1)}).duality_function(1) ==
        Poly1::linear(1, -1));

  CHECK(DualityFamily::theorem_normalized(Meixner{Rational(1), Rational(1, 2)})
            .normalization(0) == 1);
  CHECK_THROWS_AS(
      DualityFamily::theorem_normalized(Krawtchouk{2, Rational(1, 2)}).duality_function(3),
      std::out_of_range);
}

TEST_CASE("make_duality_pair admissibility") {
  PairParams pp;
  CHECK_THROWS_AS(make_duality_pair(PairTag::SepSep, pp), std::invalid_argument);
  pp.two_k = Rational(1);  // BMP cannot change the SIP parameter
  CHECK_THROWS_AS(make_duality_pair(PairTag::BmpSip, pp), std::invalid_argument);
  pp.two_k = Rational(1, 2);
  CHECK(make_duality_pair(PairTag::BmpSip, pp).dual_rate_factor == 4);
  CHECK(pair_from_name("kmp-dkmp").has_value());
  CHECK(!pair_from_name("bogus").has_value());
}

TEST_CASE("verify_generator_duality: named examples") {
  const auto pairs = small_pair_grid();
  CHECK(verify_generator_duality(pairs[0], 0, 0).zero());  // SEP (0,0)
  CHECK(verify_generator_duality(pairs[2], 1, 0).zero());  // IRW (1,0)
  CHECK(verify_generator_duality(pairs[3], 1, 1).zero());  // BMP-SIP (1,1)
  CHECK(verify_generator_duality(pairs[5], 2, 1).zero());  // KMP-dualKMP (2,1)
}

TEST_CASE("verify_generator_duality: all pairs on a small index grid") {
  for (const auto& pair : small_pair_grid()) {
    const unsigned hi = std::min(4u, pair.family.index_cap());
    for (unsigned n1 = 0; n1 <= hi; ++n1)
      for (unsigned n2 = 0; n2 <= hi; ++n2) {
        const Residual r = verify_generator_duality(pair, n1, n2);
        INFO(pair_name(pair.tag), " n1=", n1, " n2=", n2, " residual=", r.value.to_string());
        CHECK(r.zero());
      }
  }
}

TEST_CASE("SEP boundary indices need the support reduction") {
  // below the cap the raw polynomial residual is already zero; at n = 2j the
  // raw residual is a multiple of prod_m (x - m), zero as a function on the
  // state space
  PairParams pp;
  pp.two_j = 3;
  pp.p = Rational(2, 5);
  const auto pair = make_duality_pair(PairTag::SepSep, pp);
  const auto D = pair.family.duality_functions(3);

  const auto raw = [&](unsigned n1, unsigned n2) {
    return edge_generator_exact(pair.forward, Poly2::outer(D[n1], D[n2])) -
           dual_side_combination(pair.dual, n1, n2, D);
  };
  for (unsigned n1 = 0; n1 < 3; ++n1)
    for (unsigned n2 = 0; n2 < 3; ++n2) CHECK(raw(n1, n2).is_zero());

  const Poly2 boundary = raw(1, 3);
  CHECK(!boundary.is_zero());
  for (long x1 = 0; x1 <= 3; ++x1)
    for (long x2 = 0; x2 <= 3; ++x2) CHECK(boundary.eval(Rational(x1), Rational(x2)) == 0);
  CHECK(verify_generator_duality(pair, 1, 3).zero());
  CHECK(verify_generator_duality(pair, 3, 3).zero());
}

TEST_CASE("gauge invariance of the exact certification") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(1, 9), den(1, 9), sign(0, 1);
  for (const auto& pair : small_pair_grid()) {
    const Rational b = Rational(num(rng) * (sign(rng) ? 1 : -1), den(rng));
    DualityPair rescaled = pair;
    rescaled.family = pair.family.gauge_rescale(b);
    const unsigned hi = std::min(3u, pair.family.index_cap());
    for (unsigned n1 = 0; n1 <= hi; ++n1)
      for (unsigned n2 = 0; n2 <= hi; ++n2)
        CHECK(verify_generator_duality(rescaled, n1, n2).zero());
  }
}

TEST_CASE("gauge_rescale mechanics") {
  const auto fam = DualityFamily::theorem_normalized(Krawtchouk{2, Rational(1, 2)});
  CHECK(fam.gauge_rescale(1).duality_function(1) == fam.duality_function(1));
  CHECK(fam.gauge_rescale(-2).duality_function(1) == Poly1::linear(1, -1));  // 1 - x
  CHECK_THROWS_AS(fam.gauge_rescale(0), std::invalid_argument);
}

TEST_CASE("hypergeometric form = theorem form times the geometric gauge") {
  struct Case {
    FamilySpec fam;
    Rational gauge;  // b* with D_hyp = b*^n D_thm
  };
  const std::vector<Case> cases = {
      {Charlier{Rational(5, 2)}, Rational(1)},
      {Krawtchouk{4, Rational(2, 7)}, Rational(-7, 2)},  // -1/p
      {Meixner{Rational(3, 2), Rational(1, 4)}, Rational(1)},
      {Hermite{}, Rational(1)},
      {Laguerre{Rational(3)}, Rational(1)},
  };
  for (const auto& c : cases) {
    const auto thm = DualityFamily::theorem_normalized(c.fam);
    const auto hyp = DualityFamily::hypergeometric_form(c.fam);
    const unsigned hi = std::min(8u, family_degree_cap(c.fam));
    const auto Dt = thm.duality_functions(hi);
    const auto Dh = hyp.duality_functions(hi);
    // b* read from the n = 1 leading coefficients, then asserted for all n
    const Rational b_star = Dh[1].leading_coeff() / Dt[1].leading_coeff();
    CHECK(b_star == c.gauge);
    for (unsigned n = 0; n <= hi; ++n) CHECK(Dh[n] == rat_pow(b_star, n) * Dt[n]);
  }
}

TEST_CASE("selfduality_symmetry") {
  // Charlier: D(1,2) = D(2,1) = 0 at lambda = 2
  const auto charlier = DualityFamily::theorem_normalized(Charlier{Rational(2)});
  const auto D = charlier.duality_functions(2);
  CHECK(D[2].eval(Rational(1)) == 0);
  CHECK(D[1].eval(Rational(2)) == 0);
  CHECK(D[0].eval(Rational(0)) == 1);
  CHECK(selfduality_symmetry(charlier, 8, 8) == 0);

  const auto kra = DualityFamily::hypergeometric_form(Krawtchouk{2, Rational(1, 2)});
  const auto Dk = kra.duality_functions(1);
  CHECK(Dk[1].eval(Rational(0)) == 1);
  CHECK(Dk[0].eval(Rational(1)) == 1);
  CHECK(selfduality_symmetry(kra, 2, 2) == 0);
  CHECK(selfduality_symmetry(DualityFamily::hypergeometric_form(
            Meixner{Rational(3, 2), Rational(1, 4)}), 8, 8) == 0);

  CHECK_THROWS_AS(selfduality_symmetry(
      DualityFamily::theorem_normalized(Krawtchouk{2, Rational(1, 2)}), 2, 2),
      std::invalid_argument);
  CHECK_THROWS_AS(selfduality_symmetry(
      DualityFamily::theorem_normalized(Meixner{Rational(1), Rational(1, 2)}), 4, 4),
      std::invalid_argument);
  CHECK_THROWS_AS(selfduality_symmetry(DualityFamily::theorem_normalized(Hermite{}), 4, 4),
                  std::invalid_argument);
}

TEST_CASE("change_of_basis for IRW against the binomial pattern") {
  const auto basis = falling_factorial_basis(8);
  {
    const auto fam = DualityFamily::theorem_normalized(Charlier{Rational(1)});
    CHECK(change_of_basis(fam, basis, 0) == std::vector<Rational>{1});
    CHECK(change_of_basis(fam, basis, 1) == std::vector<Rational>{1, -1});
    CHECK(change_of_basis(fam, basis, 2) == std::vector<Rational>{1, -2, 1});
  }
  for (const Rational lambda : {Rational(1, 2), Rational(1), Rational(3)}) {
    const auto fam = DualityFamily::theorem_normalized(Charlier{lambda});
    for (unsigned n = 0; n <= 8; ++n) {
      const auto d = change_of_basis(fam, basis, n);
      REQUIRE(d.size() == n + 1);
      CHECK(d[n] != 0);
      for (unsigned k = 0; k <= n; ++k)
        CHECK(d[k] == Rational(binomial(n, k)) * rat_pow(-lambda, -(long)k));
    }
  }
  // degenerate basis rejected
  std::vector<Poly1> bad = basis;
  bad[1] = Poly1::constant(2);
  const auto fam = DualityFamily::theorem_normalized(Charlier{Rational(1)});
  CHECK_THROWS_AS(change_of_basis(fam, bad, 2), std::invalid_argument);
}

TEST_CASE("gram_schmidt_normalization recovers b_n = (-lambda)^n") {
  const auto basis = falling_factorial_basis(8);
  const auto old_duality = [&](unsigned n) { return basis[n]; };
  {
    const MomentFunctional m((Poisson{Rational(2)}));
    CHECK(gram_schmidt_normalization(old_duality, Charlier{Rational(2)}, m, 0) == 1);
    CHECK(gram_schmidt_normalization(old_duality, Charlier{Rational(2)}, m, 2) == 4);
  }
  {
    const MomentFunctional m((Poisson{Rational(1)}));
    CHECK(gram_schmidt_normalization(old_duality, Charlier{Rational(1)}, m, 1) == -1);
  }
  for (const Rational lambda : {Rational(1, 2), Rational(1), Rational(3)}) {
    const MomentFunctional m((Poisson{lambda}));
    for (unsigned n = 0; n <= 8; ++n)
      CHECK(gram_schmidt_normalization(old_duality, Charlier{lambda}, m, n) ==
            rat_pow(-lambda, n));
  }
}
