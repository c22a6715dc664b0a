#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualitylab/families.hpp"
#include "dualitylab/processes.hpp"

namespace dualitylab {

enum class Representation { TheoremNormalized, HypergeometricForm };

// One of the five duality-function families with its normalization. The
// theorem normalizations are 1/C(2j,n) (Krawtchouk), 1/(2k)_n (Meixner), 1
// (Charlier), 1/(2n-1)!! with index map n -> H_{2n} (Hermite), n!/(2k)_n
// (Laguerre). A geometric gauge factor b^n can be stacked on top; the
// hypergeometric closed forms are the gauge b = -1/p representative for
// Krawtchouk and coincide with the theorem normalization for the others.
class DualityFamily {
 public:
  static DualityFamily theorem_normalized(FamilySpec family);
  static DualityFamily hypergeometric_form(FamilySpec family);

  const FamilySpec& family() const { return family_; }
  Representation representation() const { return repr_; }
  const Rational& gauge() const { return gauge_; }

  // Theorem normalization times gauge^n (TheoremNormalized only).
  Rational normalization(unsigned n) const;

  // D_0..D_nmax; for Hermite these are H_{2n}/(2n-1)!!, degree 2n.
  std::vector<Poly1> duality_functions(unsigned nmax) const;
  Poly1 duality_function(unsigned n) const;

  // Same family with normalization multiplied by b^n; b must be nonzero.
  DualityFamily gauge_rescale(const Rational& b) const;

  // Largest admissible index (2j for Krawtchouk).
  unsigned index_cap() const;

 private:
  DualityFamily(FamilySpec family, Representation repr) : family_(std::move(family)), repr_(repr) {}
  FamilySpec family_;
  Representation repr_;
  Rational gauge_ = 1;
};

enum class PairTag { SepSep, SipSip, IrwIrw, BmpSip, BepSip, KmpDualKmp };

std::string pair_name(PairTag tag);
std::optional<PairTag> pair_from_name(const std::string& name);

// A (process, dual process, duality family) triple of Theorem 1.4. The dual
// rate factor is 1 except for BMP, whose dual is SIP(1/4) run at four times
// the paper's SIP rates (the proof's final display makes the factor explicit).
struct DualityPair {
  PairTag tag;
  ProcessSpec forward;
  ProcessSpec dual;
  DualityFamily family;
  Rational dual_rate_factor;
};

struct PairParams {
  std::optional<unsigned> two_j;
  std::optional<Rational> two_k;
  std::optional<Rational> p;
  std::optional<Rational> lambda;
};

DualityPair make_duality_pair(PairTag tag, const PairParams& params);

// Exact two-site residual of [L D(., n)](x) - factor * [L_dual D(x, .)](n).
// For SEP the residual is reduced modulo V(x) = prod_{m=0..2j}(x - m) in each
// variable: at boundary indices n = 2j the raw polynomial picks up a multiple
// of K_{2j+1}, which vanishes identically on the state space, and the
// reduction is the canonical representative of the residual as a function on
// {0..2j}^2. Below the cap the raw residual is already zero.
struct Residual {
  Poly2 value;
  PairTag tag;
  unsigned n1 = 0;
  unsigned n2 = 0;
  std::string params;
  bool zero() const { return value.is_zero(); }
};

Residual verify_generator_duality(const DualityPair& pair, unsigned n1, unsigned n2);

// max over the integer grid [0..xmax] x [0..nmax] of |D(x,n) - D(n,x)|.
// Defined for Charlier and for hypergeometric-form Krawtchouk/Meixner; the
// theorem-normalized Krawtchouk/Meixner are rejected (not symmetric).
Rational selfduality_symmetry(const DualityFamily& fam, unsigned xmax, unsigned nmax);

// Coefficients d(., n) of D_n in a triangular basis (deg old_basis[k] = k).
std::vector<Rational> change_of_basis(const DualityFamily& fam,
                                      const std::vector<Poly1>& old_basis, unsigned n);

// b_n = <D_old(., n), p_n> / d_n^2 of the Gram-Schmidt ansatz.
Rational gram_schmidt_normalization(const std::function<Poly1(unsigned)>& old_duality,
                                    const FamilySpec& family, const MomentFunctional& measure,
                                    unsigned n);

// x(x-1)...(x-k+1) for k = 0..nmax: the IRW duality functions of the
// algebraic construction, and the canonical triangular old basis.
std::vector<Poly1> falling_factorial_basis(unsigned nmax);

}  // namespace dualitylab
