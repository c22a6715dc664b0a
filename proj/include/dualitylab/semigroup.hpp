#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dualitylab/duality.hpp"
#include "dualitylab/processes.hpp"

namespace dualitylab {

using Config = std::variant<DiscreteConfig, ContinuousConfig>;

struct SemigroupEstimate {
  double value = 0;
  double standard_error = 0;  // 0 for deterministic methods
  std::string method;         // "uniformization" or "monte-carlo"
  double truncation_bound = 0;
  long replicas = 0;
  std::uint64_t seed = 0;
};

// Poisson-weighted power series for (e^{t Q} f)(x0) with a rigorous tail
// bound <= tol; rate_factor scales the whole generator (time change).
SemigroupEstimate uniformization_expectation(const RateMatrix& Q, const std::vector<double>& f,
                                             const DiscreteConfig& x0, double t, double tol,
                                             double rate_factor = 1.0);

// One simulated trajectory. Jump processes record every event; diffusions
// record the time grid. conservation_drift is the largest relative deviation
// of the conserved quantity (sum for SEP/SIP/IRW/BEP/KMP/dual-KMP, sum of
// squares for BMP) along the recorded path.
struct SimPath {
  ProcessSpec process;
  std::vector<double> times;
  std::vector<ContinuousConfig> configs;
  double conservation_drift = 0;
  std::uint64_t rng_stream = 0;
};

// Exact-in-distribution event-driven path (SEP, SIP, IRW, dual-KMP, KMP).
SimPath gillespie_simulate(const ProcessSpec& proc, const Graph& g, const Config& x0, double t,
                           std::uint64_t seed);

// Lie-Trotter edge splitting for BMP (exact Gaussian rotations) and BEP
// (Euler scheme on the energy fraction, clamped to [0,1]).
SimPath diffusion_simulate(const ProcessSpec& proc, const Graph& g, const ContinuousConfig& x0,
                           double t, double dt, std::uint64_t seed);

// Forward/dual processes with the duality family; the semigroup-level analog
// of DualityPair that also admits the dual-KMP self-dual check.
struct SemigroupPair {
  std::string name;
  ProcessSpec forward;
  ProcessSpec dual;
  DualityFamily family;
  double dual_rate_factor = 1.0;
};

SemigroupPair semigroup_pair(const DualityPair& pair);
// dual-KMP is self-dual with the SIP (Meixner) duality function, inherited
// through the thermalization limit; p is the free Meixner parameter.
SemigroupPair dkmp_selfdual_pair(const Rational& two_k, const Rational& meixner_p);

struct McOptions {
  long replicas = 100000;
  std::uint64_t seed = 1;
  double dt = 0;          // diffusion step; 0 means the 1e-3 * t default
  double tol = 1e-8;      // deterministic two-sided tolerance
  bool force_mc_forward = false;
  bool force_mc_dual = false;
  std::size_t state_cap = 200000;
};

struct DualityComparison {
  SemigroupEstimate forward;
  SemigroupEstimate dual;
  double difference = 0;
  double combined_se = 0;
  bool pass = false;
  bool deterministic = false;  // both sides uniformized
  double forward_conservation = 0;
  double dual_conservation = 0;
};

// Two-sided check of E_x[D(X_t, n0)] = E_n0[D(x0, N_t)]. Each side uses
// uniformization when its process is discrete and the sector fits the cap,
// Monte Carlo otherwise. Pass: |difference| <= 3 * combined SE, or <= tol
// when both sides are deterministic.
DualityComparison mc_duality_check(const SemigroupPair& pair, const Graph& g, const Config& x0,
                                   const DiscreteConfig& n0, double t, const McOptions& opt);

// Product duality observable D(x, n) = prod_i D_{n_i}(x_i).
double evaluate_duality_observable(const std::vector<Poly1>& D, const ContinuousConfig& x,
                                   const DiscreteConfig& n);
Rational evaluate_duality_observable_exact(const std::vector<Poly1>& D, const DiscreteConfig& x,
                                           const DiscreteConfig& n);

}  // namespace dualitylab
