#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dualitylab/poly.hpp"
#include "dualitylab/rational.hpp"

namespace dualitylab {

// Undirected connected graph, no self loops or duplicate edges.
struct Graph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // stored with first < second
};

Graph make_graph(int vertex_count, std::vector<std::pair<int, int>> edges);
Graph path_graph(int vertex_count);
// Edge-list format: first line "N <vertex_count>", then one "u v" per line.
Graph parse_graph(std::istream& in);
Graph load_graph(const std::string& path);

// The seven processes. Parameters mirror the family parameters: 2j a positive
// integer, 2k any positive rational.
struct Sep {
  unsigned two_j;
};
struct Sip {
  Rational two_k;
};
struct Irw {};
struct Bmp {};
struct Bep {
  Rational two_k;
};
struct Kmp {
  Rational two_k;
};
struct DualKmp {
  Rational two_k;
};

using ProcessSpec = std::variant<Sep, Sip, Irw, Bmp, Bep, Kmp, DualKmp>;

std::string process_name(const ProcessSpec& p);
void validate_process(const ProcessSpec& p);
bool process_discrete(const ProcessSpec& p);  // jump process on occupations

using DiscreteConfig = std::vector<long>;
using ContinuousConfig = std::vector<double>;

// Exact image of the two-site observable F(x1, x2) under the single-edge
// generator. Discrete processes act by shifts with polynomial rate
// prefactors, BMP/BEP by formal differentiation (BEP drift is
// -2k(x1-x2)(d1-d2), the sign the paper's proof actually uses), KMP by the
// Beta(2k,2k) thermalization operator minus identity. DualKmp acts on
// indices, not on x, and is rejected here.
Poly2 edge_generator_exact(const ProcessSpec& proc, const Poly2& F);

// Beta-binomial redistribution weight mu_2k(r | C).
Rational beta_binomial_weight(const Rational& two_k, unsigned r, unsigned C);

// Right-hand side of the duality proofs: the dual generator applied to the
// index pair (n1, n2) of the product D_{n1}(x1) D_{n2}(x2), expanded exactly
// in the supplied duality polynomials. Supported: Sep, Sip, Irw, DualKmp.
Poly2 dual_side_combination(const ProcessSpec& proc, unsigned n1, unsigned n2,
                            const std::vector<Poly1>& D);

// Exact generator restricted to the sector of fixed conserved total.
// States are occupation vectors in lexicographic order.
class RateMatrix {
 public:
  struct Entry {
    int from;
    int to;
    Rational rate;
  };

  const std::vector<DiscreteConfig>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Entry>& off_diagonal() const { return off_diagonal_; }
  const std::vector<Rational>& diagonal() const { return diagonal_; }
  int index_of(const DiscreteConfig& cfg) const;  // -1 if not in the sector

  friend RateMatrix build_rate_matrix(const ProcessSpec&, const Graph&, long, std::size_t);

 private:
  std::vector<DiscreteConfig> states_;
  std::map<DiscreteConfig, int> index_;
  std::vector<Entry> off_diagonal_;
  std::vector<Rational> diagonal_;
};

RateMatrix build_rate_matrix(const ProcessSpec& proc, const Graph& g, long total,
                             std::size_t state_cap = 200000);

// max over transitions of |rho(x) q(x,y) - rho(y) q(y,x)| with exact product
// measure weights; marginal_param is p for Sep/Sip and lambda for Irw.
Rational detailed_balance_residual(const ProcessSpec& proc, const Graph& g, long total,
                                   const Rational& marginal_param, std::size_t state_cap = 200000);

}  // namespace dualitylab
