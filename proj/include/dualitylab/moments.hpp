#pragma once

#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "dualitylab/poly.hpp"
#include "dualitylab/rational.hpp"

namespace dualitylab {

// The five stationary marginals plus the Beta redistribution law. Parameter
// domains: lambda > 0, p in (0,1), two_j a positive integer, two_k > 0.
struct Poisson {
  Rational lambda;
};
struct Binomial {
  unsigned two_j;
  Rational p;
};
struct NegativeBinomial {
  Rational two_k;
  Rational p;
};
struct GaussianHalf {};  // density e^{-x^2}/sqrt(pi), variance 1/2
struct GammaShape {
  Rational two_k;  // shape 2k, scale 1
};
struct BetaSym {
  Rational two_k;  // Beta(2k, 2k)
};

using Measure = std::variant<Poisson, Binomial, NegativeBinomial, GaussianHalf, GammaShape, BetaSym>;

std::string measure_name(const Measure& m);

// Raw moments m_r of a normalized measure, exact rationals, cached on demand.
// Thread safe: the cache is guarded, every other member is immutable.
class MomentFunctional {
 public:
  explicit MomentFunctional(Measure m);

  const Measure& measure() const { return measure_; }
  Rational moment(unsigned r) const;
  bool discrete() const;

  // Unnormalized probability mass at integer x (0 outside the support);
  // discrete measures only. Ratios of these are exact pmf ratios.
  Rational weight(long x) const;

 private:
  Measure measure_;
  mutable std::mutex mutex_;
  mutable std::vector<Rational> cache_;
};

// Exact sum_{i,j} f_i g_j m_{i+j}: the scalar product <f, g> in L^2(measure).
Rational inner_product(const Poly1& f, const Poly1& g, const MomentFunctional& m);

}  // namespace dualitylab
