#include "rftrap/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace rftrap {

Poly2::Poly2(TermMap terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

Poly2 Poly2::constant(double c) { return monomial(0, 0, c); }

Poly2 Poly2::monomial(int i, int j, double c) {
  Poly2 p;
  p.accumulate({i, j}, c);
  return p;
}

int Poly2::degree() const noexcept {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total());
  return d;
}

double Poly2::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

double Poly2::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Poly2::accumulate(const Exponent& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Poly2& Poly2::operator+=(const Poly2& rhs) {
  for (const auto& [e, c] : rhs.terms_) accumulate(e, c);
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& rhs) {
  for (const auto& [e, c] : rhs.terms_) accumulate(e, -c);
  return *this;
}

Poly2& Poly2::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  // s * c can underflow to zero for subnormal inputs.
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.accumulate({ea.i + eb.i, ea.j + eb.j}, ca * cb);
  return out;
}

Poly2 add(const Poly2& a, const Poly2& b) { return a + b; }
Poly2 mul(const Poly2& a, const Poly2& b) { return a * b; }

Poly2 pow(const Poly2& base, unsigned exponent) {
  Poly2 result = Poly2::constant(1.0);
  Poly2 sq = base;
  while (exponent > 0) {
    if (exponent & 1u) result = result * sq;
    exponent >>= 1u;
    if (exponent > 0) sq = sq * sq;
  }
  return result;
}

Poly2 diff(const Poly2& p, Axis axis) {
  Poly2::TermMap out;
  if (axis == Axis::z) return Poly2{};
  for (const auto& [e, c] : p.terms()) {
    if (axis == Axis::x && e.i > 0) out[{e.i - 1, e.j}] += c * e.i;
    if (axis == Axis::y && e.j > 0) out[{e.i, e.j - 1}] += c * e.j;
  }
  return Poly2(std::move(out));
}

Poly2 laplacian_xy(const Poly2& p) {
  Poly2 out;
  for (const auto& [e, c] : p.terms()) {
    if (e.i >= 2) out += Poly2::monomial(e.i - 2, e.j, c * e.i * (e.i - 1));
    if (e.j >= 2) out += Poly2::monomial(e.i, e.j - 2, c * e.j * (e.j - 1));
  }
  return out;
}

namespace {

std::vector<double> powers(double v, int max_exp) {
  std::vector<double> out(static_cast<std::size_t>(std::max(max_exp, 0)) + 1, 1.0);
  for (std::size_t k = 1; k < out.size(); ++k) out[k] = out[k - 1] * v;
  return out;
}

std::vector<double> binomial_row(int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k < n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

}  // namespace

double eval(const Poly2& p, double x, double y) {
  if (p.is_zero()) return 0.0;
  int max_i = 0;
  int max_j = 0;
  for (const auto& [e, c] : p.terms()) {
    max_i = std::max(max_i, e.i);
    max_j = std::max(max_j, e.j);
  }
  const auto xp = powers(x, max_i);
  const auto yp = powers(y, max_j);
  double sum = 0.0;
  for (const auto& [e, c] : p.terms()) sum += c * xp[e.i] * yp[e.j];
  return sum;
}

Poly2 taylor_shift(const Poly2& p, double x0, double y0) {
  if (x0 == 0.0 && y0 == 0.0) return p;
  const int d = std::max(p.degree(), 0);
  const auto xp = powers(x0, d);
  const auto yp = powers(y0, d);
  Poly2::TermMap out;
  for (const auto& [e, c] : p.terms()) {
    const auto bi = binomial_row(e.i);
    const auto bj = binomial_row(e.j);
    for (int a = 0; a <= e.i; ++a) {
      const double ca = c * bi[a] * xp[e.i - a];
      if (ca == 0.0) continue;
      for (int b = 0; b <= e.j; ++b) out[{a, b}] += ca * bj[b] * yp[e.j - b];
    }
  }
  return Poly2(std::move(out));
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_monomial(const Exponent& e) {
  std::string s;
  auto factor = [&s](char var, int k) {
    if (k == 0) return;
    if (!s.empty()) s += '*';
    s += var;
    if (k > 1) s += '^' + std::to_string(k);
  };
  factor('x', e.i);
  factor('y', e.j);
  return s;
}

}  // namespace

std::string to_string(const Poly2& p) {
  if (p.is_zero()) return "0";
  // Highest total degree first, then descending powers of x.
  std::vector<std::pair<Exponent, double>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.total() != b.first.total()) return a.first.total() > b.first.total();
    return a.first.i > b.first.i;
  });
  std::string out;
  for (const auto& [e, c] : terms) {
    const bool negative = std::signbit(c);
    const double mag = std::abs(c);
    if (out.empty()) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    const std::string mono = format_monomial(e);
    if (mono.empty()) {
      out += format_number(mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += format_number(mag) + '*' + mono;
    }
  }
  return out;
}

// --- ZSeries ---------------------------------------------------------------

ZSeries::ZSeries(LayerMap layers) : layers_(std::move(layers)) {
  std::erase_if(layers_, [](const auto& kv) { return kv.second.is_zero(); });
}

const Poly2& ZSeries::layer(int n) const {
  static const Poly2 zero;
  auto it = layers_.find(n);
  return it == layers_.end() ? zero : it->second;
}

int ZSeries::total_degree() const noexcept {
  int d = -1;
  for (const auto& [n, phi] : layers_) d = std::max(d, n + phi.degree());
  return d;
}

ZSeries& ZSeries::operator+=(const ZSeries& rhs) {
  for (const auto& [n, phi] : rhs.layers_) {
    auto& dst = layers_[n];
    dst += phi;
    if (dst.is_zero()) layers_.erase(n);
  }
  return *this;
}

ZSeries& ZSeries::operator*=(double s) {
  for (auto& [n, phi] : layers_) phi *= s;
  std::erase_if(layers_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

double zseries_eval(const ZSeries& s, double x, double y, double z) {
  double sum = 0.0;
  double zn = 1.0;  // z^n / n!
  int n = 0;
  for (const auto& [order, phi] : s.layers()) {
    while (n < order) {
      ++n;
      zn *= z / n;
    }
    sum += zn * eval(phi, x, y);
  }
  return sum;
}

ZSeries zseries_diff(const ZSeries& s, Axis axis) {
  ZSeries::LayerMap out;
  for (const auto& [n, phi] : s.layers()) {
    if (axis == Axis::z) {
      if (n > 0) out.emplace(n - 1, phi);
    } else {
      out.emplace(n, diff(phi, axis));
    }
  }
  return ZSeries(std::move(out));
}

ZSeries laplacian_3d(const ZSeries& s) {
  ZSeries::LayerMap out;
  for (const auto& [n, phi] : s.layers()) {
    out[n] += laplacian_xy(phi);
    if (n >= 2) out[n - 2] += phi;
  }
  return ZSeries(std::move(out));
}

}  // namespace rftrap
