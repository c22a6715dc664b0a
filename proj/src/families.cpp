#include "dualitylab/families.hpp"

#include <stdexcept>

namespace dualitylab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// (-x)_m as a polynomial in x: (-1)^m x(x-1)...(x-m+1).
Poly1 neg_pochhammer_poly(unsigned m) {
  Poly1 r = Poly1::constant(1);
  for (unsigned i = 0; i < m; ++i) r = r * Poly1::linear(Rational(i), Rational(-1));
  return r;
}

}  // namespace

std::string family_name(const FamilySpec& f) {
  return std::visit(overloaded{[](const Charlier&) -> std::string { return "Charlier"; },
                               [](const Krawtchouk&) -> std::string { return "Krawtchouk"; },
                               [](const Meixner&) -> std::string { return "Meixner"; },
                               [](const Hermite&) -> std::string { return "Hermite"; },
                               [](const Laguerre&) -> std::string { return "Laguerre"; }},
                    f);
}

void validate_family(const FamilySpec& f) {
  std::visit(overloaded{[](const Charlier& v) {
                          if (!(v.lambda > 0)) throw std::invalid_argument("Charlier: lambda must be > 0");
                        },
                        [](const Krawtchouk& v) {
                          if (v.two_j < 1) throw std::invalid_argument("Krawtchouk: 2j must be a positive integer");
                          if (!(v.p > 0 && v.p < 1)) throw std::invalid_argument("Krawtchouk: p must lie in (0,1)");
                        },
                        [](const Meixner& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("Meixner: 2k must be > 0");
                          if (!(v.p > 0 && v.p < 1)) throw std::invalid_argument("Meixner: p must lie in (0,1)");
                        },
                        [](const Hermite&) {},
                        [](const Laguerre& v) {
                          if (!(v.two_k > 0)) throw std::invalid_argument("Laguerre: 2k must be > 0");
                        }},
             f);
}

bool family_discrete(const FamilySpec& f) {
  return !std::holds_alternative<Hermite>(f) && !std::holds_alternative<Laguerre>(f);
}

unsigned family_degree_cap(const FamilySpec& f) {
  if (const auto* k = std::get_if<Krawtchouk>(&f)) return k->two_j;
  return std::numeric_limits<unsigned>::max();
}

HypergeometricData hypergeometric_data(const FamilySpec& f) {
  validate_family(f);
  return std::visit(
      overloaded{
          [](const Charlier& v) {
            // sigma = x, tau = lambda - x, lambda_n = n
            return HypergeometricData{Poly1::x(), Poly1::linear(v.lambda, -1),
                                      [](unsigned n) { return Rational(n); }, true};
          },
          [](const Krawtchouk& v) {
            // sigma = x, tau = (2jp - x)/(1-p), lambda_n = n/(1-p)
            const Rational q = 1 - v.p;
            return HypergeometricData{Poly1::x(),
                                      Poly1::linear(Rational(v.two_j) * v.p / q, -1 / q),
                                      [q](unsigned n) { return Rational(n) / q; }, true};
          },
          [](const Meixner& v) {
            // sigma = x, tau = 2kp - x(1-p), lambda_n = n(1-p)
            const Rational q = 1 - v.p;
            return HypergeometricData{Poly1::x(), Poly1::linear(v.two_k * v.p, -q),
                                      [q](unsigned n) { return Rational(n) * q; }, true};
          },
          [](const Hermite&) {
            // sigma = 1, tau = -2x, lambda_n = 2n
            return HypergeometricData{Poly1::constant(1), Poly1::linear(0, -2),
                                      [](unsigned n) { return Rational(2 * n); }, false};
          },
          [](const Laguerre& v) {
            // sigma = x, tau = 2k - x, lambda_n = n
            return HypergeometricData{Poly1::x(), Poly1::linear(v.two_k, -1),
                                      [](unsigned n) { return Rational(n); }, false};
          }},
      f);
}

RecurrenceCoefficients recurrence_coefficients(const FamilySpec& f, unsigned n) {
  return std::visit(
      overloaded{
          [n](const Charlier& v) {
            return RecurrenceCoefficients{-v.lambda, Rational(n) + v.lambda, Rational(-(long)n)};
          },
          [n](const Krawtchouk& v) {
            return RecurrenceCoefficients{Rational(n + 1),
                                          Rational(n) + Rational(v.two_j) * v.p - 2 * n * v.p,
                                          v.p * (1 - v.p) * (Rational(v.two_j) - n + 1)};
          },
          [n](const Meixner& v) {
            return RecurrenceCoefficients{v.p / (v.p - 1),
                                          (Rational(n) + v.p * n + v.two_k * v.p) / (1 - v.p),
                                          Rational(n) * (Rational(n) - 1 + v.two_k) / (v.p - 1)};
          },
          [n](const Hermite&) {
            return RecurrenceCoefficients{Rational(1, 2), Rational(0), Rational(n)};
          },
          [n](const Laguerre& v) {
            return RecurrenceCoefficients{Rational(-(long)(n + 1)), Rational(2 * n) + v.two_k,
                                          -(Rational(n) + v.two_k - 1)};
          }},
      f);
}

MomentFunctional stationary_measure(const FamilySpec& f) {
  return std::visit(
      overloaded{[](const Charlier& v) { return MomentFunctional(Poisson{v.lambda}); },
                 [](const Krawtchouk& v) { return MomentFunctional(Binomial{v.two_j, v.p}); },
                 [](const Meixner& v) { return MomentFunctional(NegativeBinomial{v.two_k, v.p}); },
                 [](const Hermite&) { return MomentFunctional(GaussianHalf{}); },
                 [](const Laguerre& v) { return MomentFunctional(GammaShape{v.two_k}); }},
      f);
}

const Poly1& PolySequence::poly(unsigned n) const {
  if (n >= polys_.size()) throw std::out_of_range("PolySequence: index beyond nmax");
  return polys_[n];
}

PolySequence generate(const FamilySpec& f, unsigned nmax) {
  validate_family(f);
  if (nmax > family_degree_cap(f))
    throw std::invalid_argument(family_name(f) + ": generation capped at n <= " +
                                std::to_string(family_degree_cap(f)));
  std::vector<Poly1> polys;
  polys.reserve(nmax + 1);
  polys.push_back(Poly1::constant(1));
  const Poly1 x = Poly1::x();
  for (unsigned n = 0; n < nmax; ++n) {
    const auto rc = recurrence_coefficients(f, n);
    if (rc.alpha == 0) throw std::domain_error(family_name(f) + ": alpha_n vanished");
    Poly1 next = x * polys[n] - rc.beta * polys[n];
    if (n > 0) next -= rc.gamma * polys[n - 1];
    polys.push_back(next * (1 / rc.alpha));
  }
  return PolySequence(f, std::move(polys));
}

Poly1 hypergeometric_residual(const PolySequence& seq, unsigned n) {
  const auto hd = hypergeometric_data(seq.family());
  const Poly1& p = seq.poly(n);
  if (hd.discrete) {
    const Poly1 dn = delta(nabla(p));
    return hd.sigma * dn + hd.tau * delta(p) + hd.lambda_n(n) * p;
  }
  return hd.sigma * p.derivative(2) + hd.tau * p.derivative(1) + hd.lambda_n(n) * p;
}

Poly1 raising_residual(const PolySequence& seq, unsigned n) {
  if (n < 1 || n + 1 > seq.nmax())
    throw std::out_of_range("raising_residual: requires 1 <= n <= nmax-1");
  const Poly1& pn = seq.poly(n);
  const Poly1& pnext = seq.poly(n + 1);
  const Poly1 x = Poly1::x();
  return std::visit(
      overloaded{
          [&](const Charlier& v) {
            // lambda C_n(x) - x C_n(x-1) = lambda C_{n+1}(x)
            return v.lambda * pn - x * pn.shift(-1) - v.lambda * pnext;
          },
          [&](const Krawtchouk& v) {
            // x K_n(x-1) + p/(1-p) (n+x-2j) K_n(x) = (n+1)/(1-p) K_{n+1}(x)
            const Rational q = 1 - v.p;
            return x * pn.shift(-1) +
                   (v.p / q) * (Poly1::linear(Rational(n) - Rational(v.two_j), 1) * pn) -
                   (Rational(n + 1) / q) * pnext;
          },
          [&](const Meixner& v) {
            // p(n+2k+x) M_n(x) - x M_n(x-1) = p M_{n+1}(x)
            return v.p * (Poly1::linear(Rational(n) + v.two_k, 1) * pn) - x * pn.shift(-1) -
                   v.p * pnext;
          },
          [&](const Hermite&) {
            // 2x H_n(x) - H_n'(x) = H_{n+1}(x)
            return Rational(2) * (x * pn) - pn.derivative() - pnext;
          },
          [&](const Laguerre& v) {
            // (2k-x+n) L_n(x) + x L_n'(x) = (n+1) L_{n+1}(x)
            return Poly1::linear(v.two_k + n, -1) * pn + x * pn.derivative() -
                   Rational(n + 1) * pnext;
          }},
      seq.family());
}

Rational closed_norm(const FamilySpec& f, unsigned n) {
  validate_family(f);
  if (n > family_degree_cap(f))
    throw std::invalid_argument("closed_norm: n beyond family degree cap");
  return std::visit(
      overloaded{
          [n](const Charlier& v) { return Rational(factorial(n)) / rat_pow(v.lambda, n); },
          [n](const Krawtchouk& v) {
            return Rational(binomial(v.two_j, n)) * rat_pow(v.p, n) * rat_pow(1 - v.p, n);
          },
          [n](const Meixner& v) {
            return Rational(factorial(n)) * pochhammer(v.two_k, n) / rat_pow(v.p, n);
          },
          [n](const Hermite&) { return rat_pow(Rational(2), n) * Rational(factorial(n)); },
          [n](const Laguerre& v) { return pochhammer(v.two_k, n) / Rational(factorial(n)); }},
      f);
}

Rational orthogonality_check(const PolySequence& seq, const MomentFunctional& m, unsigned n,
                             unsigned m_idx) {
  return inner_product(seq.poly(n), seq.poly(m_idx), m);
}

Rational rodrigues_value(const FamilySpec& f, unsigned n, long x) {
  if (!family_discrete(f)) throw std::invalid_argument("rodrigues_value: discrete families only");
  const auto measure = stationary_measure(f);
  if (measure.weight(x) == 0) throw std::invalid_argument("rodrigues_value: x outside the support");
  if (n > family_degree_cap(f)) throw std::out_of_range("rodrigues_value: n beyond degree cap");
  // B_n = a_n / (tau')^n since sigma'' = 0 for every discrete family here;
  // a_n read off the generated sequence keeps the normalization consistent.
  const auto seq = generate(f, n);
  const Rational a_n = seq.poly(n).leading_coeff();
  const Rational tau_prime = hypergeometric_data(f).tau.coeff(1);
  const Rational B_n = a_n / rat_pow(tau_prime, n);
  // nabla^n g(x) = sum_i (-1)^i C(n,i) g(x-i), g(y) = rho(y+n) prod_{k=1..n}(y+k)
  Rational s = 0;
  for (unsigned i = 0; i <= n; ++i) {
    const long y = x - static_cast<long>(i);
    Rational g = measure.weight(y + static_cast<long>(n));
    if (g == 0) continue;
    for (unsigned k = 1; k <= n; ++k) g *= Rational(y + static_cast<long>(k));
    s += Rational((i % 2 == 0) ? 1 : -1) * Rational(binomial(n, i)) * g;
  }
  return B_n * s / measure.weight(x);
}

Poly1 hypergeometric_closed_form(const FamilySpec& f, unsigned n) {
  validate_family(f);
  return std::visit(
      overloaded{
          [n](const Charlier& v) {
            // 2F0(-n, -x; ; -1/lambda)
            Poly1 s;
            for (unsigned m = 0; m <= n; ++m)
              s += (pochhammer(Rational(-(long)n), m) / Rational(factorial(m)) *
                    rat_pow(-1 / v.lambda, m)) *
                   neg_pochhammer_poly(m);
            return s;
          },
          [n](const Krawtchouk& v) {
            // 2F1(-n, -x; -2j; 1/p)
            if (n > v.two_j) throw std::out_of_range("Krawtchouk closed form: n > 2j");
            Poly1 s;
            for (unsigned m = 0; m <= n; ++m)
              s += (pochhammer(Rational(-(long)n), m) /
                    (pochhammer(Rational(-(long)v.two_j), m) * Rational(factorial(m))) *
                    rat_pow(1 / v.p, m)) *
                   neg_pochhammer_poly(m);
            return s;
          },
          [n](const Meixner& v) {
            // 2F1(-n, -x; 2k; 1 - 1/p)
            Poly1 s;
            for (unsigned m = 0; m <= n; ++m)
              s += (pochhammer(Rational(-(long)n), m) /
                    (pochhammer(v.two_k, m) * Rational(factorial(m))) *
                    rat_pow(1 - 1 / v.p, m)) *
                   neg_pochhammer_poly(m);
            return s;
          },
          [n](const Hermite&) {
            // (2x)^{2n} 2F0(-n, (1-2n)/2; ; -1/x^2) / (2n-1)!!
            std::vector<Rational> c(2 * n + 1, Rational(0));
            const Rational df(double_factorial_odd(n));
            for (unsigned m = 0; m <= n; ++m) {
              c[2 * (n - m)] += pochhammer(Rational(-(long)n), m) *
                                pochhammer(Rational(1 - 2 * (long)n, 2), m) /
                                Rational(factorial(m)) * Rational((m % 2 == 0) ? 1 : -1) *
                                rat_pow(Rational(2), 2 * n) / df;
            }
            return Poly1(std::move(c));
          },
          [n](const Laguerre& v) {
            // 1F1(-n; 2k; x)
            Poly1 s;
            for (unsigned m = 0; m <= n; ++m)
              s += (pochhammer(Rational(-(long)n), m) /
                    (pochhammer(v.two_k, m) * Rational(factorial(m)))) *
                   Poly1::x_pow(m);
            return s;
          }},
      f);
}

}  // namespace dualitylab
