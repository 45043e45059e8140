#include "rftrap/extension.hpp"

#include <cmath>

#include "rftrap/errors.hpp"

namespace rftrap {

TrapParams TrapParams::physical(double charge, double mass, double omega) {
  if (!(mass > 0.0)) throw SpecError("trap mass must be positive");
  if (!(omega > 0.0)) throw SpecError("RF angular frequency must be positive");
  const double kappa = charge * charge / (4.0 * mass * omega * omega);
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw SpecError("trap parameters give a non-positive pseudopotential prefactor");
  return TrapParams(kappa);
}

TrapParams TrapParams::with_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw SpecError("kappa must be positive");
  return TrapParams(kappa);
}

namespace {

// Layers start, start+2, ... with phi_{start+2(m+1)} = -Delta phi_{start+2m}.
ZSeries alternating_extension(const Poly2& datum, int start) {
  ZSeries::LayerMap layers;
  Poly2 current = datum;
  for (int n = start; !current.is_zero(); n += 2) {
    layers.emplace(n, current);
    current = -laplacian_xy(current);
  }
  return ZSeries(std::move(layers));
}

}  // namespace

ZSeries odd_extend(const Poly2& p) { return alternating_extension(p, 1); }
ZSeries even_extend(const Poly2& phi0) { return alternating_extension(phi0, 0); }
ZSeries ck_extend(const Poly2& phi0, const Poly2& phi1) { return even_extend(phi0) + odd_extend(phi1); }

// --- FourierField ----------------------------------------------------------

FourierField::FourierField(const FourierGen& g) : lx_(g.lx()), ly_(g.ly()), p00_(g.p00()) {
  // Keep one representative per Hermitian pair; evaluation doubles the real part.
  for (const auto& [idx, amp] : g.modes()) {
    if (idx.m < 0 || (idx.m == 0 && idx.n <= 0)) continue;
    const double kx = g.kx(idx.m);
    const double ky = g.ky(idx.n);
    modes_.push_back({idx.m, idx.n, amp, kx, ky, std::hypot(kx, ky)});
  }
}

namespace {

// d^c/dz^c of sinh(k z)/k.
double sinh_kernel(double k, double z, int c) {
  const double kz = k * z;
  if (c == 0) {
    if (std::abs(kz) < 1e-4) return z + k * k * z * z * z / 6.0;
    return std::sinh(kz) / k;
  }
  const double scale = std::pow(k, c - 1);
  return (c % 2 == 1) ? scale * std::cosh(kz) : scale * std::sinh(kz);
}

}  // namespace

double FourierField::derivative(int a, int b, int c, double x, double y, double z) const {
  double sum = 0.0;
  if (a == 0 && b == 0) {
    if (c == 0) sum += p00_ * z;
    if (c == 1) sum += p00_;
  }
  for (const Mode& mode : modes_) {
    const double phase = mode.kx * x + mode.ky * y;
    std::complex<double> factor = mode.amp * std::polar(1.0, phase);
    for (int i = 0; i < a; ++i) factor *= std::complex<double>(0.0, mode.kx);
    for (int i = 0; i < b; ++i) factor *= std::complex<double>(0.0, mode.ky);
    sum += 2.0 * factor.real() * sinh_kernel(mode.k, z, c);
  }
  return sum;
}

FourierField odd_extend_fourier(const FourierGen& g) { return FourierField(g); }

// --- Field -----------------------------------------------------------------

namespace {

constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

// Index pairs / triples in the storage order of SymMat3 and SymTensor3.
constexpr int kPairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
constexpr int kTriples[10][3] = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2},
                                 {0, 2, 2}, {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}};

ZSeries diff_n(ZSeries s, int a, int b, int c) {
  for (int i = 0; i < a; ++i) s = zseries_diff(s, Axis::x);
  for (int i = 0; i < b; ++i) s = zseries_diff(s, Axis::y);
  for (int i = 0; i < c; ++i) s = zseries_diff(s, Axis::z);
  return s;
}

}  // namespace

Field::Series Field::prepare(ZSeries s) {
  Series out;
  out.phi = std::move(s);
  for (int i = 0; i < 3; ++i) out.grad[i] = zseries_diff(out.phi, kAxes[i]);
  for (int p = 0; p < 6; ++p) out.hess[p] = zseries_diff(out.grad[kPairs[p][0]], kAxes[kPairs[p][1]]);
  for (int t = 0; t < 10; ++t) {
    // hess index of (i, j) for the leading pair of the triple
    const int i = kTriples[t][0], j = kTriples[t][1];
    int p = 0;
    while (!(kPairs[p][0] == i && kPairs[p][1] == j)) ++p;
    out.third[t] = zseries_diff(out.hess[p], kAxes[kTriples[t][2]]);
  }
  return out;
}

Field::Field(ZSeries series, TrapParams params) : repr_(prepare(std::move(series))), params_(params) {}

Field::Field(FourierField field, TrapParams params) : repr_(std::move(field)), params_(params) {}

double Field::value(const Vec3& r) const {
  if (is_series()) return zseries_eval(series(), r[0], r[1], r[2]);
  return fourier().derivative(0, 0, 0, r[0], r[1], r[2]);
}

Vec3 Field::gradient(const Vec3& r) const {
  Vec3 g{};
  if (const auto* s = std::get_if<Series>(&repr_)) {
    for (int i = 0; i < 3; ++i) g[i] = zseries_eval(s->grad[i], r[0], r[1], r[2]);
  } else {
    const auto& f = fourier();
    g = {f.derivative(1, 0, 0, r[0], r[1], r[2]), f.derivative(0, 1, 0, r[0], r[1], r[2]),
         f.derivative(0, 0, 1, r[0], r[1], r[2])};
  }
  return g;
}

SymMat3 Field::hessian(const Vec3& r) const {
  SymMat3 h;
  const auto* s = std::get_if<Series>(&repr_);
  for (int p = 0; p < 6; ++p) {
    const int i = kPairs[p][0], j = kPairs[p][1];
    if (s) {
      h.at(i, j) = zseries_eval(s->hess[p], r[0], r[1], r[2]);
    } else {
      int order[3] = {0, 0, 0};
      ++order[i];
      ++order[j];
      h.at(i, j) = fourier().derivative(order[0], order[1], order[2], r[0], r[1], r[2]);
    }
  }
  return h;
}

SymTensor3 Field::third(const Vec3& r) const {
  SymTensor3 t;
  const auto* s = std::get_if<Series>(&repr_);
  for (int q = 0; q < 10; ++q) {
    const int i = kTriples[q][0], j = kTriples[q][1], k = kTriples[q][2];
    if (s) {
      t.at(i, j, k) = zseries_eval(s->third[q], r[0], r[1], r[2]);
    } else {
      int order[3] = {0, 0, 0};
      ++order[i];
      ++order[j];
      ++order[k];
      t.at(i, j, k) = fourier().derivative(order[0], order[1], order[2], r[0], r[1], r[2]);
    }
  }
  return t;
}

double Field::derivative(int a, int b, int c, const Vec3& r) const {
  if (const auto* s = std::get_if<Series>(&repr_))
    return zseries_eval(diff_n(s->phi, a, b, c), r[0], r[1], r[2]);
  return fourier().derivative(a, b, c, r[0], r[1], r[2]);
}

Field extend(const Generator& g, TrapParams params) {
  if (g.is_polynomial()) return Field(odd_extend(g.polynomial()), params);
  return Field(odd_extend_fourier(g.fourier()), params);
}

// --- pseudopotential -------------------------------------------------------

double pseudopotential(const Field& f, const Vec3& r) {
  const Vec3 g = f.gradient(r);
  return f.params().kappa() * dot(g, g);
}

Vec3 pseudopotential_gradient(const Field& f, const Vec3& r) {
  const Vec3 hg = f.hessian(r) * f.gradient(r);
  const double s = 2.0 * f.params().kappa();
  return {s * hg[0], s * hg[1], s * hg[2]};
}

SymMat3 pseudopotential_hessian(const Field& f, const Vec3& r) {
  const Vec3 g = f.gradient(r);
  const SymMat3 hh = f.hessian(r).squared();
  const SymMat3 tg = f.third(r).contract(g);
  const double s = 2.0 * f.params().kappa();
  SymMat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) out.at(i, j) = s * (hh(i, j) + tg(i, j));
  return out;
}

}  // namespace rftrap
