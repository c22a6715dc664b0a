#include <doctest.h>

#include <sstream>

#include "dualitylab/duality.hpp"
#include "dualitylab/processes.hpp"

using namespace dualitylab;

namespace {

const Poly2 X1 = Poly2::x1();
const Poly2 X2 = Poly2::x2();

}  // namespace

TEST_CASE("graph construction and parsing") {
  const Graph g = path_graph(3);
  CHECK(g.vertex_count == 3);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

  std::istringstream in("N 3\n0 1\n2 1\n");
  const Graph parsed = parse_graph(in);
  CHECK(parsed.edges == g.edges);

  CHECK_THROWS_AS(make_graph(3, {{0, 1}}), std::invalid_argument);          // disconnected
  CHECK_THROWS_AS(make_graph(2, {{0, 0}}), std::invalid_argument);          // self loop
  CHECK_THROWS_AS(make_graph(2, {{0, 1}, {1, 0}}), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(make_graph(2, {{0, 5}}), std::invalid_argument);          // out of range
}

TEST_CASE("edge_generator_exact spec examples") {
  CHECK(edge_generator_exact(Irw{}, X1) == X2 - X1);
  CHECK(edge_generator_exact(Bmp{}, X1 * X1 + X2 * X2).is_zero());
  CHECK(edge_generator_exact(Kmp{Rational(1)}, X1) == Rational(1, 2) * (X2 - X1));
  CHECK(edge_generator_exact(Sep{3}, X1 + X2).is_zero());
  CHECK(edge_generator_exact(Bmp{}, X1 * X1) == Rational(2) * (X2 * X2) - Rational(2) * (X1 * X1));
  CHECK_THROWS_AS(edge_generator_exact(DualKmp{Rational(1)}, X1), std::invalid_argument);
}

TEST_CASE("edge generators annihilate the conserved quantity") {
  const Poly2 sum = X1 + X2;
  const Poly2 energy = X1 * X1 + X2 * X2;
  for (const Rational tk : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(3)}) {
    CHECK(edge_generator_exact(Sip{tk}, sum).is_zero());
    CHECK(edge_generator_exact(Bep{tk}, sum).is_zero());
    CHECK(edge_generator_exact(Kmp{tk}, sum).is_zero());
  }
  for (unsigned tj : {1u, 2u, 5u}) CHECK(edge_generator_exact(Sep{tj}, sum).is_zero());
  CHECK(edge_generator_exact(Irw{}, sum).is_zero());
  CHECK(edge_generator_exact(Bmp{}, energy).is_zero());
}

TEST_CASE("BEP drift direction pushes energies together") {
  // L x1 = -2k (x1 - x2): heat flows from the hotter site to the colder one
  const Rational tk(3, 2);
  CHECK(edge_generator_exact(Bep{tk}, X1) == tk * (X2 - X1));
  // stationarity of the Gamma(2k) product measure on a quadratic observable
  const MomentFunctional gamma((GammaShape{tk}));
  const Poly2 image = edge_generator_exact(Bep{tk}, X1 * X1);
  Rational mean = 0;
  for (int i = 0; i <= image.degree1(); ++i)
    for (int j = 0; j <= image.degree2(); ++j)
      mean += image.coeff(i, j) * gamma.moment(i) * gamma.moment(j);
  CHECK(mean == 0);
}

TEST_CASE("dual_side_combination spec examples") {
  const Rational tk(3, 2);
  const auto fam = DualityFamily::theorem_normalized(Meixner{tk, Rational(1, 4)});
  const auto D = fam.duality_functions(3);

  CHECK(dual_side_combination(Sip{tk}, 1, 0, D) ==
        tk * (Poly2::outer(D[0], D[1]) - Poly2::outer(D[1], D[0])));
  CHECK(dual_side_combination(Sip{tk}, 0, 0, D).is_zero());
  CHECK(dual_side_combination(Irw{}, 0, 0, D).is_zero());

  const auto lag = DualityFamily::theorem_normalized(Laguerre{Rational(1)});
  const auto Dl = lag.duality_functions(2);
  const Poly2 expected = Rational(1, 2) * (Poly2::outer(Dl[0], Dl[1]) + Poly2::outer(Dl[1], Dl[0])) -
                         Poly2::outer(Dl[1], Dl[0]);
  CHECK(dual_side_combination(DualKmp{Rational(1)}, 1, 0, Dl) == expected);

  CHECK_THROWS_AS(dual_side_combination(Bmp{}, 1, 0, D), std::invalid_argument);
}

TEST_CASE("beta binomial weights sum to one") {
  for (const Rational tk : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(3)})
    for (unsigned C = 0; C <= 20; ++C) {
      Rational s = 0;
      for (unsigned r = 0; r <= C; ++r) s += beta_binomial_weight(tk, r, C);
      CHECK(s == 1);
    }
}

TEST_CASE("build_rate_matrix: IRW two-state example") {
  const auto Q = build_rate_matrix(Irw{}, path_graph(2), 1);
  REQUIRE(Q.size() == 2);
  CHECK(Q.states()[0] == DiscreteConfig{0, 1});
  CHECK(Q.states()[1] == DiscreteConfig{1, 0});
  CHECK(Q.diagonal()[0] == -1);
  CHECK(Q.diagonal()[1] == -1);
  REQUIRE(Q.off_diagonal().size() == 2);
  for (const auto& e : Q.off_diagonal()) CHECK(e.rate == 1);
}

TEST_CASE("build_rate_matrix: SIP rate and generator structure") {
  const Rational tk(3, 2);  // k arbitrary; rate (2,0)->(1,1) must be 2*2k
  const auto Q = build_rate_matrix(Sip{tk}, path_graph(2), 2);
  const int from = Q.index_of({2, 0});
  const int to = Q.index_of({1, 1});
  REQUIRE(from >= 0);
  REQUIRE(to >= 0);
  Rational rate = 0;
  for (const auto& e : Q.off_diagonal())
    if (e.from == from && e.to == to) rate += e.rate;
  CHECK(rate == 2 * tk);
}

TEST_CASE("build_rate_matrix: rows sum to zero, rates non-negative") {
  const std::vector<ProcessSpec> procs = {Sep{2}, Sip{Rational(1, 2)}, Irw{},
                                          DualKmp{Rational(3, 2)}};
  for (const auto& proc : procs) {
    for (const Graph& g : {path_graph(2), path_graph(3)}) {
      const auto Q = build_rate_matrix(proc, g, 3);
      std::vector<Rational> row_sum = Q.diagonal();
      for (const auto& e : Q.off_diagonal()) {
        CHECK(e.rate > 0);
        row_sum[e.from] += e.rate;
      }
      for (const auto& s : row_sum) CHECK(s == 0);
    }
  }
}

TEST_CASE("build_rate_matrix rejections") {
  CHECK_THROWS_AS(build_rate_matrix(Bmp{}, path_graph(2), 1), std::invalid_argument);
  CHECK_THROWS_AS(build_rate_matrix(Irw{}, path_graph(2), -1), std::invalid_argument);
  CHECK_THROWS_AS(build_rate_matrix(Sep{1}, path_graph(2), 3), std::invalid_argument);
  CHECK_THROWS_AS(build_rate_matrix(Irw{}, path_graph(3), 40, 100), std::length_error);
}

TEST_CASE("SEP occupancy bounds visible in the rates") {
  const auto Q = build_rate_matrix(Sep{1}, path_graph(2), 2);  // only state (1,1)
  REQUIRE(Q.size() == 1);
  CHECK(Q.off_diagonal().empty());
  CHECK(Q.diagonal()[0] == 0);
}

TEST_CASE("detailed_balance_residual vanishes exactly") {
  CHECK(detailed_balance_residual(Sep{2}, path_graph(2), 2, Rational(1, 3)) == 0);
  CHECK(detailed_balance_residual(Irw{}, path_graph(3), 2, Rational(1)) == 0);
  // single admissible state: no transitions at all
  CHECK(detailed_balance_residual(Sep{1}, path_graph(2), 2, Rational(1, 4)) == 0);

  for (const Rational p : {Rational(1, 5), Rational(1, 2), Rational(4, 5)}) {
    CHECK(detailed_balance_residual(Sep{2}, path_graph(3), 3, p) == 0);
    CHECK(detailed_balance_residual(Sip{Rational(3, 2)}, path_graph(3), 3, p) == 0);
  }
  for (const Rational l : {Rational(1, 2), Rational(1), Rational(3)})
    CHECK(detailed_balance_residual(Irw{}, path_graph(2), 4, l) == 0);
  CHECK_THROWS_AS(detailed_balance_residual(Kmp{Rational(1)}, path_graph(2), 2, Rational(1, 2)),
                  std::invalid_argument);
}
