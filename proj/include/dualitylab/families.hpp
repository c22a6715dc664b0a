#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "dualitylab/moments.hpp"
#include "dualitylab/poly.hpp"

namespace dualitylab {

// The five classical families in play. Laguerre order is alpha = 2k - 1.
struct Charlier {
  Rational lambda;
};
struct Krawtchouk {
  unsigned two_j;
  Rational p;
};
struct Meixner {
  Rational two_k;
  Rational p;
};
struct Hermite {};
struct Laguerre {
  Rational two_k;
};

using FamilySpec = std::variant<Charlier, Krawtchouk, Meixner, Hermite, Laguerre>;

std::string family_name(const FamilySpec& f);
void validate_family(const FamilySpec& f);
bool family_discrete(const FamilySpec& f);

// Degree cap: Krawtchouk degenerates past n = 2j, the others are unbounded.
unsigned family_degree_cap(const FamilySpec& f);

// sigma, tau and eigenvalue lambda_n of the (difference-)differential equation
// sigma y'' + tau y' + lambda_n y = 0 / sigma ΔΔy + tau Δy + lambda_n y = 0.
struct HypergeometricData {
  Poly1 sigma;
  Poly1 tau;
  std::function<Rational(unsigned)> lambda_n;
  bool discrete = true;
};

HypergeometricData hypergeometric_data(const FamilySpec& f);

// Coefficients of x p_n = alpha_n p_{n+1} + beta_n p_n + gamma_n p_{n-1}.
struct RecurrenceCoefficients {
  Rational alpha, beta, gamma;
};

RecurrenceCoefficients recurrence_coefficients(const FamilySpec& f, unsigned n);

// The stationary measure the family is orthogonal against.
MomentFunctional stationary_measure(const FamilySpec& f);

// p_0..p_nmax generated from the three-term recurrence with p_0 = 1,
// p_{-1} = 0 (the normalization the NSU recurrence coefficients imply).
class PolySequence {
 public:
  PolySequence(FamilySpec family, std::vector<Poly1> polys)
      : family_(std::move(family)), polys_(std::move(polys)) {}

  const FamilySpec& family() const { return family_; }
  unsigned nmax() const { return static_cast<unsigned>(polys_.size()) - 1; }
  const Poly1& poly(unsigned n) const;
  const std::vector<Poly1>& polys() const { return polys_; }

 private:
  FamilySpec family_;
  std::vector<Poly1> polys_;
};

PolySequence generate(const FamilySpec& f, unsigned nmax);

// sigma ΔΔp_n + tau Δp_n + lambda_n p_n (discrete) or the differential
// analogue; identically zero for a correctly generated sequence.
Poly1 hypergeometric_residual(const PolySequence& seq, unsigned n);

// Left minus right side of the per-family raising identity mapping p_n to a
// multiple of p_{n+1}. Requires 1 <= n <= nmax-1.
Poly1 raising_residual(const PolySequence& seq, unsigned n);

// Closed-form squared norm d_n^2 (Gamma ratios reduced to Pochhammer products).
Rational closed_norm(const FamilySpec& f, unsigned n);

// <p_n, p_m> under the stationary measure; equals delta_{n,m} d_n^2.
Rational orthogonality_check(const PolySequence& seq, const MomentFunctional& m, unsigned n,
                             unsigned m_idx);

// Discrete Rodriguez formula evaluated pointwise at integer x in the support:
// p_n(x) = B_n/rho(x) * nabla^n[rho(x+n) prod_{k=1..n} sigma(x+k)].
Rational rodrigues_value(const FamilySpec& f, unsigned n, long x);

// Closed hypergeometric finite-sum representation of the duality function of
// index n (degree 2n polynomial for Hermite, degree n otherwise). Relates to
// the theorem-normalized functions by the geometric gauge b^n.
Poly1 hypergeometric_closed_form(const FamilySpec& f, unsigned n);

}  // namespace dualitylab
