#include "dualitylab/duality.hpp"

#include <sstream>
#include <stdexcept>

namespace dualitylab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Rational theorem_normalization(const FamilySpec& f, unsigned n) {
  return std::visit(
      overloaded{[n](const Charlier&) { return Rational(1); },
                 [n](const Krawtchouk& v) { return 1 / Rational(binomial(v.two_j, n)); },
                 [n](const Meixner& v) { return 1 / pochhammer(v.two_k, n); },
                 [n](const Hermite&) { return 1 / Rational(double_factorial_odd(n)); },
                 [n](const Laguerre& v) {
                   return Rational(factorial(n)) / pochhammer(v.two_k, n);
                 }},
      f);
}

}  // namespace

DualityFamily DualityFamily::theorem_normalized(FamilySpec family) {
  validate_family(family);
  return DualityFamily(std::move(family), Representation::TheoremNormalized);
}

DualityFamily DualityFamily::hypergeometric_form(FamilySpec family) {
  validate_family(family);
  return DualityFamily(std::move(family), Representation::HypergeometricForm);
}

Rational DualityFamily::normalization(unsigned n) const {
  if (repr_ != Representation::TheoremNormalized)
    throw std::logic_error("normalization: hypergeometric-form families are built from closed sums");
  return theorem_normalization(family_, n) * rat_pow(gauge_, n);
}

unsigned DualityFamily::index_cap() const { return family_degree_cap(family_); }

std::vector<Poly1> DualityFamily::duality_functions(unsigned nmax) const {
  if (nmax > index_cap()) throw std::out_of_range("duality_functions: index beyond family cap");
  std::vector<Poly1> out;
  out.reserve(nmax + 1);
  if (repr_ == Representation::HypergeometricForm) {
    for (unsigned n = 0; n <= nmax; ++n)
      out.push_back(hypergeometric_closed_form(family_, n) * rat_pow(gauge_, n));
    return out;
  }
  const bool hermite = std::holds_alternative<Hermite>(family_);
  const auto seq = generate(family_, hermite ? 2 * nmax : nmax);
  for (unsigned n = 0; n <= nmax; ++n)
    out.push_back(seq.poly(hermite ? 2 * n : n) * normalization(n));
  return out;
}

Poly1 DualityFamily::duality_function(unsigned n) const { return duality_functions(n).back(); }

DualityFamily DualityFamily::gauge_rescale(const Rational& b) const {
  if (b == 0) throw std::invalid_argument("gauge_rescale: b must be nonzero");
  DualityFamily out = *this;
  out.gauge_ *= b;
  return out;
}

std::string pair_name(PairTag tag) {
  switch (tag) {
    case PairTag::SepSep: return "sep-sep";
    case PairTag::SipSip: return "sip-sip";
    case PairTag::IrwIrw: return "irw-irw";
    case PairTag::BmpSip: return "bmp-sip";
    case PairTag::BepSip: return "bep-sip";
    case PairTag::KmpDualKmp: return "kmp-dkmp";
  }
  throw std::logic_error("pair_name: bad tag");
}

std::optional<PairTag> pair_from_name(const std::string& name) {
  for (PairTag t : {PairTag::SepSep, PairTag::SipSip, PairTag::IrwIrw, PairTag::BmpSip,
                    PairTag::BepSip, PairTag::KmpDualKmp})
    if (pair_name(t) == name) return t;
  return std::nullopt;
}

DualityPair make_duality_pair(PairTag tag, const PairParams& params) {
  const auto need = [](const auto& opt, const char* what) -> decltype(*opt) {
    if (!opt) throw std::invalid_argument(std::string("duality pair: missing parameter ") + what);
    return *opt;
  };
  switch (tag) {
    case PairTag::SepSep: {
      const unsigned two_j = need(params.two_j, "two_j");
      const Rational p = need(params.p, "p");
      return DualityPair{tag, Sep{two_j}, Sep{two_j},
                         DualityFamily::theorem_normalized(Krawtchouk{two_j, p}), 1};
    }
    case PairTag::SipSip: {
      const Rational two_k = need(params.two_k, "two_k");
      const Rational p = need(params.p, "p");
      return DualityPair{tag, Sip{two_k}, Sip{two_k},
                         DualityFamily::theorem_normalized(Meixner{two_k, p}), 1};
    }
    case PairTag::IrwIrw: {
      const Rational lambda = need(params.lambda, "lambda");
      return DualityPair{tag, Irw{}, Irw{},
                         DualityFamily::theorem_normalized(Charlier{lambda}), 1};
    }
    case PairTag::BmpSip: {
      if (params.two_k && *params.two_k != Rational(1, 2))
        throw std::invalid_argument("duality pair: BMP pairs with SIP(1/4) only (2k = 1/2)");
      return DualityPair{tag, Bmp{}, Sip{Rational(1, 2)},
                         DualityFamily::theorem_normalized(Hermite{}), 4};
    }
    case PairTag::BepSip: {
      const Rational two_k = need(params.two_k, "two_k");
      return DualityPair{tag, Bep{two_k}, Sip{two_k},
                         DualityFamily::theorem_normalized(Laguerre{two_k}), 1};
    }
    case PairTag::KmpDualKmp: {
      const Rational two_k = need(params.two_k, "two_k");
      return DualityPair{tag, Kmp{two_k}, DualKmp{two_k},
                         DualityFamily::theorem_normalized(Laguerre{two_k}), 1};
    }
  }
  throw std::logic_error("make_duality_pair: bad tag");
}

Residual verify_generator_duality(const DualityPair& pair, unsigned n1, unsigned n2) {
  const unsigned cap = pair.family.index_cap();
  if (n1 > cap || n2 > cap)
    throw std::out_of_range("verify_generator_duality: index beyond family cap");
  const unsigned need = std::min<unsigned>(std::max(n1, n2) + 1, cap);
  const auto D = pair.family.duality_functions(need);

  Poly2 forward = edge_generator_exact(pair.forward, Poly2::outer(D[n1], D[n2]));
  Poly2 dual = dual_side_combination(pair.dual, n1, n2, D);
  Poly2 residual = forward - pair.dual_rate_factor * dual;

  if (const auto* sep = std::get_if<Sep>(&pair.forward); sep && !residual.is_zero()) {
    Poly1 support = Poly1::constant(1);
    for (unsigned m = 0; m <= sep->two_j; ++m)
      support = support * Poly1::linear(-Rational(m), 1);
    residual = residual.remainder_each_var(support);
  }

  std::ostringstream ps;
  ps << family_name(pair.family.family());
  return Residual{std::move(residual), pair.tag, n1, n2, ps.str()};
}

Rational selfduality_symmetry(const DualityFamily& fam, unsigned xmax, unsigned nmax) {
  const bool charlier = std::holds_alternative<Charlier>(fam.family());
  const bool kra_or_meix = std::holds_alternative<Krawtchouk>(fam.family()) ||
                           std::holds_alternative<Meixner>(fam.family());
  if (!charlier && !(kra_or_meix && fam.representation() == Representation::HypergeometricForm))
    throw std::invalid_argument(
        "selfduality_symmetry: Charlier, or hypergeometric-form Krawtchouk/Meixner");
  const unsigned cap = fam.index_cap();
  if (xmax > cap || nmax > cap)
    throw std::out_of_range("selfduality_symmetry: grid beyond family support");
  const auto D = fam.duality_functions(std::max(xmax, nmax));
  Rational worst = 0;
  for (unsigned x = 0; x <= xmax; ++x)
    for (unsigned n = 0; n <= nmax; ++n) {
      Rational gap = D[n].eval(Rational(x)) - D[x].eval(Rational(n));
      if (gap < 0) gap = -gap;
      if (gap > worst) worst = gap;
    }
  return worst;
}

std::vector<Rational> change_of_basis(const DualityFamily& fam,
                                      const std::vector<Poly1>& old_basis, unsigned n) {
  if (old_basis.size() <= n) throw std::invalid_argument("change_of_basis: basis too short");
  for (unsigned k = 0; k <= n; ++k)
    if (old_basis[k].degree() != static_cast<int>(k))
      throw std::invalid_argument("change_of_basis: basis is not triangular");
  Poly1 rem = fam.duality_function(n);
  std::vector<Rational> d(n + 1, Rational(0));
  for (unsigned k = n + 1; k-- > 0;) {
    const Rational c = rem.coeff(k);
    if (c == 0) continue;
    d[k] = c / old_basis[k].leading_coeff();
    rem -= d[k] * old_basis[k];
  }
  if (!rem.is_zero()) throw std::logic_error("change_of_basis: back-substitution left a remainder");
  return d;
}

Rational gram_schmidt_normalization(const std::function<Poly1(unsigned)>& old_duality,
                                    const FamilySpec& family, const MomentFunctional& measure,
                                    unsigned n) {
  const Poly1 old_n = old_duality(n);
  if (old_n.degree() != static_cast<int>(n))
    throw std::invalid_argument("gram_schmidt_normalization: old duality function must have degree n");
  const auto seq = generate(family, n);
  return inner_product(old_n, seq.poly(n), measure) / closed_norm(family, n);
}

std::vector<Poly1> falling_factorial_basis(unsigned nmax) {
  std::vector<Poly1> out;
  out.reserve(nmax + 1);
  out.push_back(Poly1::constant(1));
  for (unsigned k = 1; k <= nmax; ++k)
    out.push_back(out.back() * Poly1::linear(-Rational(k - 1), 1));
  return out;
}

}  // namespace dualitylab
