#include "dualitylab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dualitylab/parallel.hpp"

namespace dualitylab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Disjoint per-replica stream: one engine seeded from (master, replica).
std::mt19937_64 replica_rng(std::uint64_t master, std::uint64_t replica) {
  return std::mt19937_64(mix64(master ^ mix64(replica)));
}

struct SparseRows {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> diag;
};

SparseRows to_double_rows(const RateMatrix& Q, double factor) {
  SparseRows s;
  s.rows.resize(Q.size());
  s.diag.resize(Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) s.diag[i] = to_double(Q.diagonal()[i]) * factor;
  for (const auto& e : Q.off_diagonal())
    s.rows[e.from].emplace_back(e.to, to_double(e.rate) * factor);
  return s;
}

}  // namespace

SemigroupEstimate uniformization_expectation(const RateMatrix& Q, const std::vector<double>& f,
                                             const DiscreteConfig& x0, double t, double tol,
                                             double rate_factor) {
  if (t < 0) throw std::invalid_argument("uniformization: t must be >= 0");
  if (tol <= 0) throw std::invalid_argument("uniformization: tol must be > 0");
  if (f.size() != Q.size()) throw std::invalid_argument("uniformization: f size mismatch");
  const int start = Q.index_of(x0);
  if (start < 0) throw std::invalid_argument("uniformization: x0 not in the sector");
  double fmax = 0;
  for (double v : f) {
    if (!std::isfinite(v)) throw std::invalid_argument("uniformization: non-finite f");
    fmax = std::max(fmax, std::abs(v));
  }

  SemigroupEstimate est;
  est.method = "uniformization";
  const auto S = to_double_rows(Q, rate_factor);
  double lambda = 0;
  for (double d : S.diag) lambda = std::max(lambda, -d);
  if (t == 0 || lambda == 0 || fmax == 0) {
    est.value = f[start];
    return est;
  }
  lambda *= 1.0 + 1e-12;
  const double lt = lambda * t;

  // u_m = P^m f with P = I + Q/lambda; value = sum_m pois(m; lt) u_m[start]
  std::vector<double> u = f, next(f.size());
  double cumulative = 0, value = 0;
  const double target = 1.0 - tol / (2.0 * fmax);
  const std::size_t hard_cap =
      static_cast<std::size_t>(lt + 12.0 * std::sqrt(lt + 1.0) + 64.0) + 4;
  std::size_t m = 0;
  while (true) {
    const double logw = -lt + static_cast<double>(m) * std::log(lt) - std::lgamma(m + 1.0);
    const double w = std::exp(logw);
    cumulative += w;
    value += w * u[start];
    if (cumulative >= target || m >= hard_cap) break;
    for (std::size_t i = 0; i < u.size(); ++i) next[i] = u[i] * (1.0 + S.diag[i] / lambda);
    for (std::size_t i = 0; i < S.rows.size(); ++i)
      for (const auto& [j, r] : S.rows[i]) next[i] += (r / lambda) * u[j];
    u.swap(next);
    ++m;
  }
  est.value = value;
  est.truncation_bound = fmax * std::max(0.0, 1.0 - cumulative);
  if (est.truncation_bound > tol)
    throw std::runtime_error("uniformization: truncation bound exceeded tolerance");
  return est;
}

namespace {

double sum_of(const ContinuousConfig& x) {
  double s = 0;
  for (double v : x) s += v;
  return s;
}

double sum_sq(const ContinuousConfig& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

long sum_of(const DiscreteConfig& x) {
  long s = 0;
  for (long v : x) s += v;
  return s;
}

// Samples r from the Beta-binomial mu_2k(. | C) by inverse CDF on the exact
// weights (converted once to double).
long sample_beta_binomial(const std::vector<double>& pmf, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng), acc = 0;
  for (std::size_t r = 0; r < pmf.size(); ++r) {
    acc += pmf[r];
    if (u <= acc) return static_cast<long>(r);
  }
  return static_cast<long>(pmf.size()) - 1;
}

struct JumpCore {
  const ProcessSpec& proc;
  const Graph& g;
  double two_j = 0, two_k = 0;
  double alpha_ = 0;  // gamma shape for Beta sampling (KMP)
  bool kmp = false, dkmp = false, sep = false, sip = false, irw = false;

  explicit JumpCore(const ProcessSpec& p, const Graph& graph) : proc(p), g(graph) {
    std::visit(overloaded{[&](const Sep& v) { sep = true; two_j = v.two_j; },
                          [&](const Sip& v) { sip = true; two_k = to_double(v.two_k); },
                          [&](const Irw&) { irw = true; },
                          [&](const Kmp& v) { kmp = true; alpha_ = to_double(v.two_k); },
                          [&](const DualKmp& v) { dkmp = true; two_k = to_double(v.two_k); },
                          [&](const auto&) {
                            throw std::invalid_argument("gillespie: jump processes only");
                          }},
               p);
  }

  // directed hop rate along (i -> l) for occupation processes
  double hop_rate(const DiscreteConfig& x, int i, int l) const {
    if (sep) return static_cast<double>(x[i]) * (two_j - static_cast<double>(x[l]));
    if (sip) return static_cast<double>(x[i]) * (two_k + static_cast<double>(x[l]));
    return static_cast<double>(x[i]);  // IRW
  }
};

}  // namespace

SimPath gillespie_simulate(const ProcessSpec& proc, const Graph& g, const Config& x0, double t,
                           std::uint64_t seed) {
  validate_process(proc);
  if (t < 0) throw std::invalid_argument("gillespie: t must be >= 0");
  auto rng = replica_rng(seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const JumpCore core(proc, g);

  SimPath path;
  path.process = proc;
  path.rng_stream = seed;

  if (core.kmp) {
    ContinuousConfig x = std::get<ContinuousConfig>(x0);
    if (static_cast<int>(x.size()) != g.vertex_count)
      throw std::invalid_argument("gillespie: configuration size mismatch");
    for (double v : x)
      if (v < 0) throw std::invalid_argument("gillespie: KMP energies must be >= 0");
    const double total0 = sum_of(x);
    std::gamma_distribution<double> gamma(core.alpha_, 1.0);
    double now = 0;
    path.times.push_back(0);
    path.configs.push_back(x);
    const double edge_rate = static_cast<double>(g.edges.size());
    while (true) {
      now += expo(rng) / edge_rate;
      if (now > t) break;
      const auto& [i, l] = g.edges[static_cast<std::size_t>(unif(rng) * g.edges.size()) %
                                   g.edges.size()];
      const double s = x[i] + x[l];
      const double a = gamma(rng), b = gamma(rng);
      const double frac = (a + b > 0) ? a / (a + b) : 0.5;
      x[i] = frac * s;
      x[l] = s - x[i];
      path.times.push_back(now);
      path.configs.push_back(x);
      if (total0 != 0)
        path.conservation_drift =
            std::max(path.conservation_drift, std::abs(sum_of(x) - total0) / std::abs(total0));
    }
    path.times.push_back(t);
    path.configs.push_back(x);
    return path;
  }

  DiscreteConfig x = std::get<DiscreteConfig>(x0);
  if (static_cast<int>(x.size()) != g.vertex_count)
    throw std::invalid_argument("gillespie: configuration size mismatch");
  const long total0 = sum_of(x);
  const auto record = [&](double when) {
    path.times.push_back(when);
    path.configs.push_back(ContinuousConfig(x.begin(), x.end()));
    if (sum_of(x) != total0) path.conservation_drift = 1.0;  // exact invariant broken
  };
  record(0);
  double now = 0;
  if (core.dkmp) {
    const double edge_rate = static_cast<double>(g.edges.size());
    while (true) {
      now += expo(rng) / edge_rate;
      if (now > t) break;
      const auto& [i, l] = g.edges[static_cast<std::size_t>(unif(rng) * g.edges.size()) %
                                   g.edges.size()];
      const long C = x[i] + x[l];
      std::vector<double> pmf(static_cast<std::size_t>(C) + 1);
      for (long r = 0; r <= C; ++r)
        pmf[r] = to_double(beta_binomial_weight(std::get<DualKmp>(proc).two_k,
                                                static_cast<unsigned>(r), static_cast<unsigned>(C)));
      const long r = sample_beta_binomial(pmf, rng);
      if (r == x[i]) continue;  // redistribution hit the same split
      x[i] = r;
      x[l] = C - r;
      record(now);
    }
  } else {
    while (true) {
      double total_rate = 0;
      for (const auto& [i, l] : g.edges)
        total_rate += core.hop_rate(x, i, l) + core.hop_rate(x, l, i);
      if (total_rate <= 0) break;
      now += expo(rng) / total_rate;
      if (now > t) break;
      double pick = unif(rng) * total_rate;
      bool moved = false;
      for (const auto& [i, l] : g.edges) {
        const double r_il = core.hop_rate(x, i, l);
        if (pick < r_il) {
          --x[i]; ++x[l];
          moved = true;
          break;
        }
        pick -= r_il;
        const double r_li = core.hop_rate(x, l, i);
        if (pick < r_li) {
          ++x[i]; --x[l];
          moved = true;
          break;
        }
        pick -= r_li;
      }
      if (!moved) { --x[x.size() - 1]; ++x[x.size() - 1]; }  // numerically impossible branch
      record(now);
    }
  }
  record(t);
  return path;
}

SimPath diffusion_simulate(const ProcessSpec& proc, const Graph& g, const ContinuousConfig& x0,
                           double t, double dt, std::uint64_t seed) {
  validate_process(proc);
  if (dt <= 0) throw std::invalid_argument("diffusion_simulate: dt must be > 0");
  const bool bmp = std::holds_alternative<Bmp>(proc);
  const bool bep = std::holds_alternative<Bep>(proc);
  if (!bmp && !bep) throw std::invalid_argument("diffusion_simulate: BMP or BEP only");
  if (static_cast<int>(x0.size()) != g.vertex_count)
    throw std::invalid_argument("diffusion_simulate: configuration size mismatch");
  if (bep)
    for (double v : x0)
      if (v < 0) throw std::invalid_argument("diffusion_simulate: BEP energies must be >= 0");

  auto rng = replica_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double two_k = bep ? to_double(std::get<Bep>(proc).two_k) : 0.0;

  SimPath path;
  path.process = proc;
  path.rng_stream = seed;
  ContinuousConfig x = x0;
  const double conserved0 = bmp ? sum_sq(x) : sum_of(x);
  path.times.push_back(0);
  path.configs.push_back(x);

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
  const double h = t / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    for (const auto& [i, l] : g.edges) {
      if (bmp) {
        const double theta = std::sqrt(2.0 * h) * normal(rng);
        const double c = std::cos(theta), sn = std::sin(theta);
        const double xi = x[i], xl = x[l];
        x[i] = c * xi + sn * xl;
        x[l] = -sn * xi + c * xl;
      } else {
        const double sum = x[i] + x[l];
        if (sum <= 0) continue;
        double u = x[i] / sum;
        u += two_k * (1.0 - 2.0 * u) * h +
             std::sqrt(std::max(2.0 * u * (1.0 - u), 0.0) * h) * normal(rng);
        u = std::clamp(u, 0.0, 1.0);
        x[i] = u * sum;
        x[l] = sum - x[i];
      }
    }
    path.times.push_back(static_cast<double>(s + 1) * h);
    path.configs.push_back(x);
    const double conserved = bmp ? sum_sq(x) : sum_of(x);
    if (conserved0 != 0)
      path.conservation_drift = std::max(path.conservation_drift,
                                         std::abs(conserved - conserved0) / std::abs(conserved0));
  }
  return path;
}

SemigroupPair semigroup_pair(const DualityPair& pair) {
  return SemigroupPair{pair_name(pair.tag), pair.forward, pair.dual, pair.family,
                       to_double(pair.dual_rate_factor)};
}

SemigroupPair dkmp_selfdual_pair(const Rational& two_k, const Rational& meixner_p) {
  return SemigroupPair{"dkmp-dkmp", DualKmp{two_k}, DualKmp{two_k},
                       DualityFamily::theorem_normalized(Meixner{two_k, meixner_p}), 1.0};
}

double evaluate_duality_observable(const std::vector<Poly1>& D, const ContinuousConfig& x,
                                   const DiscreteConfig& n) {
  double v = 1;
  for (std::size_t i = 0; i < x.size(); ++i) v *= D[static_cast<std::size_t>(n[i])].eval(x[i]);
  return v;
}

Rational evaluate_duality_observable_exact(const std::vector<Poly1>& D, const DiscreteConfig& x,
                                           const DiscreteConfig& n) {
  Rational v = 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    v *= D[static_cast<std::size_t>(n[i])].eval(Rational(x[i]));
  return v;
}

namespace {

// Lean single-replica forward simulation: returns D(X_t, n0) and tracks the
// conserved quantity. Mirrors gillespie/diffusion_simulate without recording.
double simulate_observable(const ProcessSpec& proc, const Graph& g, const Config& x0,
                           const DiscreteConfig& n0, const std::vector<Poly1>& D, double t,
                           double dt, std::mt19937_64& rng, double& conservation) {
  return std::visit(
      overloaded{
          [&](const Bmp&) {
            ContinuousConfig x = std::get<ContinuousConfig>(x0);
            std::normal_distribution<double> normal(0.0, 1.0);
            const double e0 = sum_sq(x);
            const long steps = std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
            const double h = t / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s)
              for (const auto& [i, l] : g.edges) {
                const double theta = std::sqrt(2.0 * h) * normal(rng);
                const double c = std::cos(theta), sn = std::sin(theta);
                const double xi = x[i], xl = x[l];
                x[i] = c * xi + sn * xl;
                x[l] = -sn * xi + c * xl;
              }
            if (e0 != 0) conservation = std::max(conservation, std::abs(sum_sq(x) - e0) / e0);
            return evaluate_duality_observable(D, x, n0);
          },
          [&](const Bep& v) {
            ContinuousConfig x = std::get<ContinuousConfig>(x0);
            std::normal_distribution<double> normal(0.0, 1.0);
            const double two_k = to_double(v.two_k);
            const double e0 = sum_of(x);
            const long steps = std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
            const double h = t / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s)
              for (const auto& [i, l] : g.edges) {
                const double sum = x[i] + x[l];
                if (sum <= 0) continue;
                double u = x[i] / sum;
                u += two_k * (1.0 - 2.0 * u) * h +
                     std::sqrt(std::max(2.0 * u * (1.0 - u), 0.0) * h) * normal(rng);
                u = std::clamp(u, 0.0, 1.0);
                x[i] = u * sum;
                x[l] = sum - x[i];
              }
            if (e0 != 0) conservation = std::max(conservation, std::abs(sum_of(x) - e0) / e0);
            return evaluate_duality_observable(D, x, n0);
          },
          [&](const Kmp& v) {
            ContinuousConfig x = std::get<ContinuousConfig>(x0);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::exponential_distribution<double> expo(1.0);
            std::gamma_distribution<double> gamma(to_double(v.two_k), 1.0);
            const double e0 = sum_of(x);
            const double edge_rate = static_cast<double>(g.edges.size());
            double now = expo(rng) / edge_rate;
            while (now <= t) {
              const auto& [i, l] = g.edges[static_cast<std::size_t>(unif(rng) * g.edges.size()) %
                                           g.edges.size()];
              const double s = x[i] + x[l];
              const double a = gamma(rng), b = gamma(rng);
              const double frac = (a + b > 0) ? a / (a + b) : 0.5;
              x[i] = frac * s;
              x[l] = s - x[i];
              now += expo(rng) / edge_rate;
            }
            if (e0 != 0) conservation = std::max(conservation, std::abs(sum_of(x) - e0) / e0);
            return evaluate_duality_observable(D, x, n0);
          },
          [&](const auto&) {
            // discrete jump processes share the gillespie core
            SimPath p = gillespie_simulate(proc, g, x0, t, rng());
            conservation = std::max(conservation, p.conservation_drift);
            return evaluate_duality_observable(D, p.configs.back(), n0);
          }},
      proc);
}

SemigroupEstimate monte_carlo_side(const ProcessSpec& proc, const Graph& g, const Config& x0,
                                   const DiscreteConfig& n0, const std::vector<Poly1>& D, double t,
                                   double dt, long replicas, std::uint64_t seed,
                                   double& conservation) {
  std::vector<double> values(static_cast<std::size_t>(replicas));
  std::vector<double> drifts(worker_count(), 0.0);
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r, unsigned worker) {
    auto rng = replica_rng(seed, r);
    values[r] = simulate_observable(proc, g, x0, n0, D, t, dt, rng, drifts[worker]);
  });
  for (double d : drifts) conservation = std::max(conservation, d);
  // fixed reduction order: replica 0, 1, 2, ... regardless of worker count
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(replicas);
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= std::max<double>(1.0, static_cast<double>(replicas - 1));
  SemigroupEstimate est;
  est.value = mean;
  est.standard_error = std::sqrt(var / static_cast<double>(replicas));
  est.method = "monte-carlo";
  est.replicas = replicas;
  est.seed = seed;
  return est;
}

}  // namespace

DualityComparison mc_duality_check(const SemigroupPair& pair, const Graph& g, const Config& x0,
                                   const DiscreteConfig& n0, double t, const McOptions& opt) {
  if (t < 0) throw std::invalid_argument("mc_duality_check: t must be >= 0");
  const double dt = opt.dt > 0 ? opt.dt : 1e-3 * std::max(t, 1e-12);
  if (static_cast<int>(n0.size()) != g.vertex_count)
    throw std::invalid_argument("mc_duality_check: n0 size mismatch");
  for (long v : n0)
    if (v < 0) throw std::invalid_argument("mc_duality_check: dual occupations must be >= 0");

  const long n_total = [&] {
    long s = 0;
    for (long v : n0) s += v;
    return s;
  }();
  const unsigned index_need =
      std::min<unsigned>(pair.family.index_cap(), static_cast<unsigned>(n_total));
  const auto D = pair.family.duality_functions(index_need);

  DualityComparison out;

  // forward side: E_x0[ D(X_t, n0) ]
  const bool forward_discrete = process_discrete(pair.forward);
  if (forward_discrete && !opt.force_mc_forward) {
    const auto& x0d = std::get<DiscreteConfig>(x0);
    const long total = [&] {
      long s = 0;
      for (long v : x0d) s += v;
      return s;
    }();
    const auto Q = build_rate_matrix(pair.forward, g, total, opt.state_cap);
    std::vector<double> f(Q.size());
    for (std::size_t s = 0; s < Q.size(); ++s)
      f[s] = to_double(evaluate_duality_observable_exact(D, Q.states()[s], n0));
    out.forward = uniformization_expectation(Q, f, x0d, t, opt.tol / 4, 1.0);
  } else {
    double drift = 0;
    out.forward = monte_carlo_side(pair.forward, g, x0, n0, D, t, dt, opt.replicas, opt.seed, drift);
    out.forward_conservation = drift;
  }

  // dual side: E_n0[ D(x0, N_t) ], generator scaled by the pair's rate factor
  if (!opt.force_mc_dual) {
    const auto Q = build_rate_matrix(pair.dual, g, n_total, opt.state_cap);
    std::vector<double> f(Q.size());
    for (std::size_t s = 0; s < Q.size(); ++s) {
      f[s] = std::visit(overloaded{[&](const DiscreteConfig& xd) {
                                     return to_double(
                                         evaluate_duality_observable_exact(D, xd, Q.states()[s]));
                                   },
                                   [&](const ContinuousConfig& xc) {
                                     return evaluate_duality_observable(D, xc, Q.states()[s]);
                                   }},
                        x0);
    }
    const auto& n0v = n0;
    out.dual = uniformization_expectation(Q, f, n0v, t, opt.tol / 4, pair.dual_rate_factor);
  } else {
    // dual simulated as its own jump process at the scaled rate, evaluating
    // m -> D(x0, m) at the final configuration
    const Config n0c = n0;
    const auto evaluator = [&](const ContinuousConfig& m) {
      DiscreteConfig mi(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) mi[i] = static_cast<long>(std::llround(m[i]));
      return std::visit(
          overloaded{[&](const DiscreteConfig& xd) {
                       return to_double(evaluate_duality_observable_exact(D, xd, mi));
                     },
                     [&](const ContinuousConfig& xc) {
                       return evaluate_duality_observable(D, xc, mi);
                     }},
          x0);
    };
    std::vector<double> values(static_cast<std::size_t>(opt.replicas));
    parallel_for(static_cast<std::size_t>(opt.replicas), [&](std::size_t r, unsigned) {
      auto rng = replica_rng(opt.seed ^ 0x5eedD0a1ull, r);
      SimPath p = gillespie_simulate(pair.dual, g, n0c, t * pair.dual_rate_factor, rng());
      values[r] = evaluator(p.configs.back());
    });
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(opt.replicas);
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= std::max<double>(1.0, static_cast<double>(opt.replicas - 1));
    out.dual.value = mean;
    out.dual.standard_error = std::sqrt(var / static_cast<double>(opt.replicas));
    out.dual.method = "monte-carlo";
    out.dual.replicas = opt.replicas;
    out.dual.seed = opt.seed;
  }

  out.difference = out.forward.value - out.dual.value;
  out.combined_se = std::sqrt(out.forward.standard_error * out.forward.standard_error +
                              out.dual.standard_error * out.dual.standard_error);
  out.deterministic = out.forward.standard_error == 0 && out.dual.standard_error == 0;
  out.pass = out.deterministic ? std::abs(out.difference) <= opt.tol
                               : std::abs(out.difference) <= 3.0 * out.combined_se;
  return out;
}

}  // namespace dualitylab
