#include "dualitylab/processes.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dualitylab/moments.hpp"

namespace dualitylab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Graph make_graph(int vertex_count, std::vector<std::pair<int, int>> edges) {
  if (vertex_count <= 0) throw std::invalid_argument("graph: vertex count must be positive");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second) throw std::invalid_argument("graph: self-loop");
    if (e.first < 0 || e.second >= vertex_count) throw std::invalid_argument("graph: vertex id out of range");
    if (!seen.insert(e).second) throw std::invalid_argument("graph: duplicate edge");
  }
  // connectivity via union-find
  std::vector<int> parent(vertex_count);
  for (int i = 0; i < vertex_count; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (const auto& e : edges) parent[find(e.first)] = find(e.second);
  for (int i = 0; i < vertex_count; ++i)
    if (find(i) != find(0)) throw std::invalid_argument("graph: not connected");
  std::sort(edges.begin(), edges.end());
  return Graph{vertex_count, std::move(edges)};
}

Graph path_graph(int vertex_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < vertex_count; ++i) edges.emplace_back(i, i + 1);
  return make_graph(vertex_count, std::move(edges));
}

Graph parse_graph(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "N")
    throw std::invalid_argument("graph: first line must be 'N <vertex_count>'");
  std::vector<std::pair<int, int>> edges;
  int u, v;
  while (in >> u >> v) edges.emplace_back(u, v);
  return make_graph(n, std::move(edges));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("graph: cannot open " + path);
  return parse_graph(in);
}

std::string process_name(const ProcessSpec& p) {
  return std::visit(overloaded{[](const Sep&) -> std::string { return "SEP"; },
                               [](const Sip&) -> std::string { return "SIP"; },
                               [](const Irw&) -> std::string { return "IRW"; },
                               [](const Bmp&) -> std::string { return "BMP"; },
                               [](const Bep&) -> std::string { return "BEP"; },
                               [](const Kmp&) -> std::string { return "KMP"; },
                               [](const DualKmp&) -> std::string { return "dual-KMP"; }},
                    p);
}

void validate_process(const ProcessSpec& p) {
  std::visit(overloaded{[](const Sep& v) {
                          if (v.two_j < 1) throw std::invalid_argument("SEP: 2j must be a positive integer");
                        },
                        [](const Sip& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("SIP: 2k must be > 0");
                        },
                        [](const Irw&) {}, [](const Bmp&) {},
                        [](const Bep& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("BEP: 2k must be > 0");
                        },
                        [](const Kmp& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("KMP: 2k must be > 0");
                        },
                        [](const DualKmp& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("dual-KMP: 2k must be > 0");
                        }},
             p);
}

bool process_discrete(const ProcessSpec& p) {
  return std::holds_alternative<Sep>(p) || std::holds_alternative<Sip>(p) ||
         std::holds_alternative<Irw>(p) || std::holds_alternative<DualKmp>(p);
}

namespace {

// hop part common to SEP/SIP/IRW: rate1(x1,x2) [F(x1-1,x2+1) - F] + rate2 [F(x1+1,x2-1) - F]
Poly2 hop_generator(const Poly2& F, const Poly2& rate_12, const Poly2& rate_21) {
  Poly2 r = rate_12 * (F.shift(-1, 1) - F);
  r += rate_21 * (F.shift(1, -1) - F);
  return r;
}

// Beta(2k,2k) thermalization: x1^a x2^b -> (2k)_a (2k)_b / (4k)_{a+b} (x1+x2)^{a+b}
Poly2 kmp_thermalize(const Rational& two_k, const Poly2& F) {
  if (F.is_zero()) return F;
  const unsigned dmax = static_cast<unsigned>(F.degree1() + F.degree2());
  // group by total degree s: c_s = sum_{a+b=s} F_{ab} (2k)_a (2k)_b / (4k)_s
  std::vector<Rational> by_total(dmax + 1, Rational(0));
  for (int a = 0; a <= F.degree1(); ++a)
    for (int b = 0; b <= F.degree2(); ++b) {
      const Rational c = F.coeff(a, b);
      if (c == 0) continue;
      by_total[a + b] += c * pochhammer(two_k, a) * pochhammer(two_k, b) /
                         pochhammer(2 * two_k, a + b);
    }
  std::vector<std::vector<Rational>> m(dmax + 1, std::vector<Rational>(dmax + 1, Rational(0)));
  for (unsigned s = 0; s <= dmax; ++s) {
    if (by_total[s] == 0) continue;
    for (unsigned i = 0; i <= s; ++i) m[i][s - i] += by_total[s] * Rational(binomial(s, i));
  }
  return Poly2(std::move(m));
}

}  // namespace

Poly2 edge_generator_exact(const ProcessSpec& proc, const Poly2& F) {
  validate_process(proc);
  const Poly2 x1 = Poly2::x1();
  const Poly2 x2 = Poly2::x2();
  return std::visit(
      overloaded{
          [&](const Sep& v) {
            const Poly2 cap = Poly2::constant(Rational(v.two_j));
            return hop_generator(F, x1 * (cap - x2), (cap - x1) * x2);
          },
          [&](const Sip& v) {
            const Poly2 k2 = Poly2::constant(v.two_k);
            return hop_generator(F, x1 * (k2 + x2), x2 * (k2 + x1));
          },
          [&](const Irw&) { return hop_generator(F, x1, x2); },
          [&](const Bmp&) {
            // (x1 d2 - x2 d1)^2 = x1^2 d2^2 + x2^2 d1^2 - x1 d1 - x2 d2 - 2 x1 x2 d1 d2
            Poly2 r = x1 * x1 * F.d2().d2();
            r += x2 * x2 * F.d1().d1();
            r -= x1 * F.d1();
            r -= x2 * F.d2();
            r -= Rational(2) * (x1 * x2 * F.d1().d2());
            return r;
          },
          [&](const Bep& v) {
            const Poly2 d = F.d1() - F.d2();
            Poly2 r = x1 * x2 * (d.d1() - d.d2());
            r -= v.two_k * ((x1 - x2) * d);
            return r;
          },
          [&](const Kmp& v) { return kmp_thermalize(v.two_k, F) - F; },
          [&](const DualKmp&) -> Poly2 {
            throw std::invalid_argument(
                "edge_generator_exact: dual-KMP acts on indices; use dual_side_combination");
          }},
      proc);
}

Rational beta_binomial_weight(const Rational& two_k, unsigned r, unsigned C) {
  if (r > C) return 0;
  return Rational(binomial(C, r)) * pochhammer(two_k, r) * pochhammer(two_k, C - r) /
         pochhammer(2 * two_k, C);
}

Poly2 dual_side_combination(const ProcessSpec& proc, unsigned n1, unsigned n2,
                            const std::vector<Poly1>& D) {
  validate_process(proc);
  Poly2 out;
  const auto add = [&](const Rational& c, unsigned a, unsigned b) {
    if (c == 0) return;  // zero rate: the move is forbidden, skip before indexing D
    if (a >= D.size() || b >= D.size())
      throw std::out_of_range("dual_side_combination: duality family too short");
    out += c * Poly2::outer(D[a], D[b]);
  };
  const auto hop = [&](const Rational& c12, const Rational& c21) {
    add(c12, n1 - 1, n2 + 1);
    add(-c12, n1, n2);
    add(c21, n1 + 1, n2 - 1);
    add(-c21, n1, n2);
  };
  std::visit(overloaded{[&](const Sep& v) {
                          if (n1 > v.two_j || n2 > v.two_j)
                            throw std::invalid_argument("dual_side_combination: SEP index > 2j");
                          hop(Rational(n1) * (Rational(v.two_j) - n2),
                              (Rational(v.two_j) - n1) * Rational(n2));
                        },
                        [&](const Sip& v) {
                          hop(Rational(n1) * (v.two_k + n2), (v.two_k + n1) * Rational(n2));
                        },
                        [&](const Irw&) { hop(Rational(n1), Rational(n2)); },
                        [&](const DualKmp& v) {
                          const unsigned C = n1 + n2;
                          for (unsigned r = 0; r <= C; ++r)
                            add(beta_binomial_weight(v.two_k, r, C), r, C - r);
                          add(Rational(-1), n1, n2);
                        },
                        [&](const auto&) -> void {
                          throw std::invalid_argument(
                              "dual_side_combination: supported for SEP, SIP, IRW, dual-KMP");
                        }},
             proc);
  return out;
}

int RateMatrix::index_of(const DiscreteConfig& cfg) const {
  const auto it = index_.find(cfg);
  return it == index_.end() ? -1 : it->second;
}

namespace {

void enumerate_states(int sites, long total, long per_site_max, DiscreteConfig& cur,
                      std::vector<DiscreteConfig >& out, std::size_t cap) {
  if (sites == 1) {
    if (total <= per_site_max) {
      cur.push_back(total);
      out.push_back(cur);
      cur.pop_back();
      if (out.size() > cap) throw std::length_error("build_rate_matrix: state-space cap exceeded");
    }
    return;
  }
  for (long v = 0; v <= std::min(total, per_site_max); ++v) {
    cur.push_back(v);
    enumerate_states(sites - 1, total - v, per_site_max, cur, out, cap);
    cur.pop_back();
  }
}

}  // namespace

RateMatrix build_rate_matrix(const ProcessSpec& proc, const Graph& g, long total,
                             std::size_t state_cap) {
  validate_process(proc);
  if (!process_discrete(proc))
    throw std::invalid_argument("build_rate_matrix: discrete processes only");
  if (total < 0) throw std::invalid_argument("build_rate_matrix: total must be >= 0");
  long per_site = std::numeric_limits<long>::max();
  if (const auto* sep = std::get_if<Sep>(&proc)) {
    per_site = sep->two_j;
    if (total > per_site * g.vertex_count)
      throw std::invalid_argument("build_rate_matrix: total exceeds SEP capacity");
  }

  RateMatrix rm;
  DiscreteConfig cur;
  enumerate_states(g.vertex_count, total, per_site, cur, rm.states_, state_cap);
  std::sort(rm.states_.begin(), rm.states_.end());
  for (std::size_t i = 0; i < rm.states_.size(); ++i) rm.index_[rm.states_[i]] = static_cast<int>(i);
  rm.diagonal_.assign(rm.states_.size(), Rational(0));

  const auto push = [&](int from, DiscreteConfig to, Rational rate) {
    if (rate == 0) return;
    const auto it = rm.index_.find(to);
    if (it == rm.index_.end()) throw std::logic_error("build_rate_matrix: target state missing");
    rm.off_diagonal_.push_back({from, it->second, rate});
    rm.diagonal_[from] -= rate;
  };

  for (std::size_t s = 0; s < rm.states_.size(); ++s) {
    const auto& x = rm.states_[s];
    for (const auto& [i, l] : g.edges) {
      std::visit(overloaded{[&](const Sep& v) {
                              const Rational r_il = Rational(x[i]) * (Rational(v.two_j) - x[l]);
                              const Rational r_li = Rational(x[l]) * (Rational(v.two_j) - x[i]);
                              auto y = x;
                              if (r_il != 0) { --y[i]; ++y[l]; push(s, y, r_il); y = x; }
                              if (r_li != 0) { ++y[i]; --y[l]; push(s, y, r_li); }
                            },
                            [&](const Sip& v) {
                              const Rational r_il = Rational(x[i]) * (v.two_k + x[l]);
                              const Rational r_li = Rational(x[l]) * (v.two_k + x[i]);
                              auto y = x;
                              if (r_il != 0) { --y[i]; ++y[l]; push(s, y, r_il); y = x; }
                              if (r_li != 0) { ++y[i]; --y[l]; push(s, y, r_li); }
                            },
                            [&](const Irw&) {
                              auto y = x;
                              if (x[i] > 0) { --y[i]; ++y[l]; push(s, y, Rational(x[i])); y = x; }
                              if (x[l] > 0) { ++y[i]; --y[l]; push(s, y, Rational(x[l])); }
                            },
                            [&](const DualKmp& v) {
                              const long C = x[i] + x[l];
                              for (long r = 0; r <= C; ++r) {
                                if (r == x[i]) continue;  // same state
                                auto y = x;
                                y[i] = r;
                                y[l] = C - r;
                                push(s, y,
                                     beta_binomial_weight(v.two_k, static_cast<unsigned>(r),
                                                          static_cast<unsigned>(C)));
                              }
                            },
                            [&](const auto&) {}},
                 proc);
    }
  }
  return rm;
}

Rational detailed_balance_residual(const ProcessSpec& proc, const Graph& g, long total,
                                   const Rational& marginal_param, std::size_t state_cap) {
  Measure marginal = std::visit(
      overloaded{[&](const Sep& v) -> Measure { return Binomial{v.two_j, marginal_param}; },
                 [&](const Sip& v) -> Measure { return NegativeBinomial{v.two_k, marginal_param}; },
                 [&](const Irw&) -> Measure { return Poisson{marginal_param}; },
                 [&](const auto&) -> Measure {
                   throw std::invalid_argument("detailed_balance_residual: SEP, SIP or IRW only");
                 }},
      proc);
  const MomentFunctional mf(marginal);
  const auto rm = build_rate_matrix(proc, g, total, state_cap);

  std::vector<Rational> w(rm.size());
  for (std::size_t s = 0; s < rm.size(); ++s) {
    Rational prod = 1;
    for (long occ : rm.states()[s]) prod *= mf.weight(occ);
    w[s] = prod;
  }
  // collect q(x,y) by ordered pair, then compare both directions
  std::map<std::pair<int, int>, Rational> q;
  for (const auto& e : rm.off_diagonal()) q[{e.from, e.to}] += e.rate;
  Rational worst = 0;
  for (const auto& [key, rate] : q) {
    const auto rev = q.find({key.second, key.first});
    const Rational back = rev == q.end() ? Rational(0) : rev->second;
    Rational gap = w[key.first] * rate - w[key.second] * back;
    if (gap < 0) gap = -gap;
    if (gap > worst) worst = gap;
  }
  return worst;
}

}  // namespace dualitylab
