#include "dualitylab/moments.hpp"

#include <functional>
#include <stdexcept>

namespace dualitylab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Stirling numbers of the second kind S(r, i), row r.
std::vector<Int> stirling2_row(unsigned r) {
  std::vector<Int> prev(1, Int(1));  // S(0,0) = 1
  for (unsigned n = 1; n <= r; ++n) {
    std::vector<Int> cur(n + 1, Int(0));
    for (unsigned k = 1; k <= n; ++k)
      cur[k] = Int(k) * (k < prev.size() ? prev[k] : Int(0)) + prev[k - 1];
    prev = std::move(cur);
  }
  return prev;
}

// Raw moment from factorial moments: m_r = sum_i S(r,i) * E[(X)_i].
Rational moment_via_factorial(unsigned r, const std::function<Rational(unsigned)>& fm) {
  const auto S = stirling2_row(r);
  Rational m = 0;
  for (unsigned i = 0; i < S.size(); ++i)
    if (S[i] != 0) m += Rational(S[i]) * fm(i);
  return m;
}

}  // namespace

std::string measure_name(const Measure& m) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Poisson>) return "Poisson";
        else if constexpr (std::is_same_v<T, Binomial>) return "Binomial";
        else if constexpr (std::is_same_v<T, NegativeBinomial>) return "NegativeBinomial";
        else if constexpr (std::is_same_v<T, GaussianHalf>) return "GaussianHalf";
        else if constexpr (std::is_same_v<T, GammaShape>) return "Gamma";
        else return "BetaSym";
      },
      m);
}

MomentFunctional::MomentFunctional(Measure m) : measure_(std::move(m)) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          require(v.lambda > 0, "Poisson: lambda must be > 0");
        } else if constexpr (std::is_same_v<T, Binomial>) {
          require(v.two_j >= 1, "Binomial: 2j must be a positive integer");
          require(v.p > 0 && v.p < 1, "Binomial: p must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
          require(v.two_k > 0, "NegativeBinomial: 2k must be > 0");
          require(v.p > 0 && v.p < 1, "NegativeBinomial: p must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, GammaShape>) {
          require(v.two_k > 0, "Gamma: 2k must be > 0");
        } else if constexpr (std::is_same_v<T, BetaSym>) {
          require(v.two_k > 0, "BetaSym: 2k must be > 0");
        }
      },
      measure_);
}

bool MomentFunctional::discrete() const {
  return std::holds_alternative<Poisson>(measure_) || std::holds_alternative<Binomial>(measure_) ||
         std::holds_alternative<NegativeBinomial>(measure_);
}

Rational MomentFunctional::moment(unsigned r) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (r < cache_.size()) return cache_[r];
  }
  Rational value = std::visit(
      [r](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          // Touchard: m_r = sum_i S(r,i) lambda^i
          return moment_via_factorial(r, [&](unsigned i) { return rat_pow(v.lambda, i); });
        } else if constexpr (std::is_same_v<T, Binomial>) {
          // E[(X)_i] = (2j)(2j-1)...(2j-i+1) p^i
          return moment_via_factorial(r, [&](unsigned i) {
            return falling_factorial(Rational(v.two_j), i) * rat_pow(v.p, i);
          });
        } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
          // E[(X)_i] = (2k)_i (p/(1-p))^i
          return moment_via_factorial(r, [&](unsigned i) {
            return pochhammer(v.two_k, i) * rat_pow(v.p / (1 - v.p), i);
          });
        } else if constexpr (std::is_same_v<T, GaussianHalf>) {
          if (r % 2 == 1) return Rational(0);
          return Rational(double_factorial_odd(r / 2)) / rat_pow(Rational(2), r / 2);
        } else if constexpr (std::is_same_v<T, GammaShape>) {
          return pochhammer(v.two_k, r);
        } else {  // BetaSym
          return pochhammer(v.two_k, r) / pochhammer(2 * v.two_k, r);
        }
      },
      measure_);
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_.size() <= r) cache_.resize(r + 1);
  cache_[r] = value;
  return value;
}

Rational MomentFunctional::weight(long x) const {
  return std::visit(
      [x](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          if (x < 0) return 0;
          return rat_pow(v.lambda, x) / Rational(factorial(static_cast<unsigned>(x)));
        } else if constexpr (std::is_same_v<T, Binomial>) {
          if (x < 0 || x > static_cast<long>(v.two_j)) return 0;
          const unsigned ux = static_cast<unsigned>(x);
          return Rational(binomial(v.two_j, ux)) * rat_pow(v.p, ux) *
                 rat_pow(1 - v.p, v.two_j - ux);
        } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
          if (x < 0) return 0;
          const unsigned ux = static_cast<unsigned>(x);
          return pochhammer(v.two_k, ux) / Rational(factorial(ux)) * rat_pow(v.p, ux);
        } else {
          throw std::domain_error("MomentFunctional::weight: continuous measure");
        }
      },
      measure_);
}

Rational inner_product(const Poly1& f, const Poly1& g, const MomentFunctional& m) {
  Rational s = 0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (f.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
      if (g.coeffs()[j] == 0) continue;
      s += f.coeffs()[i] * g.coeffs()[j] * m.moment(static_cast<unsigned>(i + j));
    }
  }
  return s;
}

}  // namespace dualitylab
