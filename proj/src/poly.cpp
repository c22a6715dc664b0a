#include "dualitylab/poly.hpp"

#include <sstream>

namespace dualitylab {

void Poly1::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly1 Poly1::constant(Rational v) {
  Poly1 p;
  if (v != 0) p.c_ = {std::move(v)};
  return p;
}

Poly1 Poly1::x() { return Poly1({Rational(0), Rational(1)}); }

Poly1 Poly1::x_pow(unsigned k) {
  std::vector<Rational> c(k + 1, Rational(0));
  c[k] = 1;
  return Poly1(std::move(c));
}

Poly1 Poly1::linear(Rational a0, Rational a1) {
  return Poly1({std::move(a0), std::move(a1)});
}

Poly1& Poly1::operator+=(const Poly1& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly1& Poly1::operator-=(const Poly1& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly1 operator*(const Poly1& a, const Poly1& b) {
  if (a.is_zero() || b.is_zero()) return Poly1();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Poly1(std::move(r));
}

Poly1 operator*(const Poly1& a, const Rational& s) {
  if (s == 0) return Poly1();
  std::vector<Rational> r = a.c_;
  for (auto& c : r) c *= s;
  return Poly1(std::move(r));
}

Poly1 Poly1::shift(const Rational& c) const {
  if (c == 0 || is_zero()) return *this;
  std::vector<Rational> r(c_.size(), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    // x^i -> sum_j C(i,j) c^(i-j) x^j
    Rational cp = 1;
    for (std::size_t j = i + 1; j-- > 0;) {
      r[j] += c_[i] * Rational(binomial(static_cast<unsigned>(i), static_cast<unsigned>(j))) * cp;
      cp *= c;
    }
  }
  return Poly1(std::move(r));
}

Poly1 Poly1::derivative(unsigned order) const {
  Poly1 p = *this;
  for (unsigned k = 0; k < order && !p.is_zero(); ++k) {
    std::vector<Rational> r;
    r.reserve(p.c_.size() > 0 ? p.c_.size() - 1 : 0);
    for (std::size_t i = 1; i < p.c_.size(); ++i) r.push_back(p.c_[i] * Rational(i));
    p = Poly1(std::move(r));
  }
  return p;
}

Rational Poly1::eval(const Rational& x) const {
  Rational v = 0;
  for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
  return v;
}

double Poly1::eval(double x) const {
  double v = 0;
  for (std::size_t i = c_.size(); i-- > 0;) v = v * x + to_double(c_[i]);
  return v;
}

Poly1 Poly1::remainder(const Poly1& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("Poly1::remainder: zero divisor");
  std::vector<Rational> r = c_;
  const int dd = divisor.degree();
  while (static_cast<int>(r.size()) - 1 >= dd) {
    while (!r.empty() && r.back() == 0) r.pop_back();
    if (static_cast<int>(r.size()) - 1 < dd) break;
    const Rational q = r.back() / divisor.leading_coeff();
    const std::size_t off = r.size() - 1 - static_cast<std::size_t>(dd);
    for (int i = 0; i <= dd; ++i) r[off + i] -= q * divisor.coeff(i);
  }
  return Poly1(std::move(r));
}

std::string Poly1::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << to_fraction_string(c_[i]);
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

Poly1 delta(const Poly1& f) { return f.shift(1) - f; }
Poly1 nabla(const Poly1& f) { return f - f.shift(-1); }

// ---------------------------------------------------------------------------

void Poly2::trim() {
  // drop all-zero trailing columns, then rows; keep the matrix rectangular
  std::size_t cols = 0, rows = 0;
  for (std::size_t i = 0; i < m_.size(); ++i)
    for (std::size_t j = 0; j < m_[i].size(); ++j)
      if (m_[i][j] != 0) {
        rows = std::max(rows, i + 1);
        cols = std::max(cols, j + 1);
      }
  m_.resize(rows);
  for (auto& row : m_) row.resize(cols, Rational(0));
}

Poly2 Poly2::constant(Rational v) {
  Poly2 p;
  if (v != 0) p.m_ = {{std::move(v)}};
  return p;
}

Poly2 Poly2::x1() { return Poly2({{Rational(0)}, {Rational(1)}}); }
Poly2 Poly2::x2() { return Poly2({{Rational(0), Rational(1)}}); }

Poly2 Poly2::outer(const Poly1& f, const Poly1& g) {
  if (f.is_zero() || g.is_zero()) return Poly2();
  std::vector<std::vector<Rational>> m(f.coeffs().size(),
                                       std::vector<Rational>(g.coeffs().size(), Rational(0)));
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) m[i][j] = f.coeffs()[i] * g.coeffs()[j];
  return Poly2(std::move(m));
}

Rational Poly2::coeff(unsigned i, unsigned j) const {
  if (i >= m_.size() || j >= m_[i].size()) return 0;
  return m_[i][j];
}

Poly2& Poly2::operator+=(const Poly2& o) {
  const std::size_t rows = std::max(m_.size(), o.m_.size());
  const std::size_t cols = std::max(m_.empty() ? 0 : m_[0].size(), o.m_.empty() ? 0 : o.m_[0].size());
  m_.resize(rows);
  for (auto& row : m_) row.resize(cols, Rational(0));
  for (std::size_t i = 0; i < o.m_.size(); ++i)
    for (std::size_t j = 0; j < o.m_[i].size(); ++j) m_[i][j] += o.m_[i][j];
  trim();
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
  const std::size_t rows = std::max(m_.size(), o.m_.size());
  const std::size_t cols = std::max(m_.empty() ? 0 : m_[0].size(), o.m_.empty() ? 0 : o.m_[0].size());
  m_.resize(rows);
  for (auto& row : m_) row.resize(cols, Rational(0));
  for (std::size_t i = 0; i < o.m_.size(); ++i)
    for (std::size_t j = 0; j < o.m_[i].size(); ++j) m_[i][j] -= o.m_[i][j];
  trim();
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  if (a.is_zero() || b.is_zero()) return Poly2();
  std::vector<std::vector<Rational>> m(
      a.m_.size() + b.m_.size() - 1,
      std::vector<Rational>(a.m_[0].size() + b.m_[0].size() - 1, Rational(0)));
  for (std::size_t i1 = 0; i1 < a.m_.size(); ++i1)
    for (std::size_t j1 = 0; j1 < a.m_[i1].size(); ++j1) {
      if (a.m_[i1][j1] == 0) continue;
      for (std::size_t i2 = 0; i2 < b.m_.size(); ++i2)
        for (std::size_t j2 = 0; j2 < b.m_[i2].size(); ++j2) {
          if (b.m_[i2][j2] == 0) continue;
          m[i1 + i2][j1 + j2] += a.m_[i1][j1] * b.m_[i2][j2];
        }
    }
  return Poly2(std::move(m));
}

Poly2 operator*(const Poly2& a, const Rational& s) {
  if (s == 0) return Poly2();
  auto m = a.m_;
  for (auto& row : m)
    for (auto& c : row) c *= s;
  return Poly2(std::move(m));
}

Poly2 Poly2::shift(const Rational& c1, const Rational& c2) const {
  if (is_zero()) return *this;
  auto m = m_;
  if (c2 != 0) {
    for (auto& row : m) {
      Poly1 shifted = Poly1(row).shift(c2);
      row.assign(m_[0].size(), Rational(0));
      for (std::size_t j = 0; j < shifted.coeffs().size(); ++j) row[j] = shifted.coeffs()[j];
    }
  }
  if (c1 != 0) {
    for (std::size_t j = 0; j < m[0].size(); ++j) {
      std::vector<Rational> col(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) col[i] = m[i][j];
      Poly1 shifted = Poly1(std::move(col)).shift(c1);
      for (std::size_t i = 0; i < m.size(); ++i) m[i][j] = shifted.coeff(i);
    }
  }
  return Poly2(std::move(m));
}

Poly2 Poly2::d1() const {
  if (m_.size() <= 1) return Poly2();
  std::vector<std::vector<Rational>> m(m_.size() - 1);
  for (std::size_t i = 1; i < m_.size(); ++i) {
    m[i - 1] = m_[i];
    for (auto& c : m[i - 1]) c *= Rational(i);
  }
  return Poly2(std::move(m));
}

Poly2 Poly2::d2() const {
  if (is_zero() || m_[0].size() <= 1) return Poly2();
  std::vector<std::vector<Rational>> m(m_.size(), std::vector<Rational>(m_[0].size() - 1));
  for (std::size_t i = 0; i < m_.size(); ++i)
    for (std::size_t j = 1; j < m_[i].size(); ++j) m[i][j - 1] = m_[i][j] * Rational(j);
  return Poly2(std::move(m));
}

Rational Poly2::eval(const Rational& x1, const Rational& x2) const {
  Rational v = 0;
  for (std::size_t i = m_.size(); i-- > 0;) v = v * x1 + Poly1(m_[i]).eval(x2);
  return v;
}

double Poly2::eval(double x1, double x2) const {
  double v = 0;
  for (std::size_t i = m_.size(); i-- > 0;) v = v * x1 + Poly1(m_[i]).eval(x2);
  return v;
}

Poly2 Poly2::remainder_each_var(const Poly1& divisor) const {
  if (is_zero()) return *this;
  // reduce along x2 (rows), then along x1 (columns)
  std::vector<std::vector<Rational>> m = m_;
  std::size_t cols = 0;
  std::vector<Poly1> rows(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    rows[i] = Poly1(m[i]).remainder(divisor);
    cols = std::max(cols, rows[i].coeffs().size());
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i].assign(cols, Rational(0));
    for (std::size_t j = 0; j < rows[i].coeffs().size(); ++j) m[i][j] = rows[i].coeffs()[j];
  }
  std::size_t out_rows = 0;
  std::vector<Poly1> red_cols(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<Rational> col(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) col[i] = m[i][j];
    red_cols[j] = Poly1(std::move(col)).remainder(divisor);
    out_rows = std::max(out_rows, red_cols[j].coeffs().size());
  }
  std::vector<std::vector<Rational>> out(out_rows, std::vector<Rational>(cols, Rational(0)));
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < red_cols[j].coeffs().size(); ++i) out[i][j] = red_cols[j].coeffs()[i];
  return Poly2(std::move(out));
}

std::string Poly2::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < m_.size(); ++i)
    for (std::size_t j = 0; j < m_[i].size(); ++j) {
      if (m_[i][j] == 0) continue;
      if (!first) os << " + ";
      os << to_fraction_string(m_[i][j]);
      if (i) os << "*x1" << (i > 1 ? "^" + std::to_string(i) : "");
      if (j) os << "*x2" << (j > 1 ? "^" + std::to_string(j) : "");
      first = false;
    }
  return os.str();
}

}  // namespace dualitylab
