#pragma once

// Harmonic extension of planar Cauchy data (phi0 = Phi(x,y,0),
// phi1 = dPhi/dz(x,y,0)) into the surrounding source-free region, and the
// ponderomotive pseudopotential U = kappa |grad Phi|^2 of the result.

#include <variant>
#include <vector>

#include "rftrap/algebra.hpp"
#include "rftrap/generator.hpp"
#include "rftrap/linalg.hpp"

namespace rftrap {

/// Prefactor of the pseudopotential, kappa = Q^2 / (4 M Omega^2).
class TrapParams {
 public:
  /// kappa = 1.
  TrapParams() = default;

  static TrapParams normalized() { return {}; }
  /// SI inputs: charge [C], mass [kg], RF angular frequency [rad/s].
  static TrapParams physical(double charge, double mass, double omega);
  static TrapParams with_kappa(double kappa);

  double kappa() const noexcept { return kappa_; }

 private:
  explicit TrapParams(double kappa) : kappa_(kappa) {}
  double kappa_ = 1.0;
};

/// phi_{2m+1} = (-1)^m Delta^m P. Terminates after at most deg(P)/2 + 1 layers.
ZSeries odd_extend(const Poly2& p);
/// phi_{2m} = (-1)^m Delta^m phi0.
ZSeries even_extend(const Poly2& phi0);
/// Full Cauchy-Kovalevskaya extension, even_extend(phi0) + odd_extend(phi1).
ZSeries ck_extend(const Poly2& phi0, const Poly2& phi1);

/// Periodic odd extension
///   Phi = p00 z + sum_{k != 0} p_k sinh(k z)/k exp[i(k_x x + k_y y)].
class FourierField {
 public:
  explicit FourierField(const FourierGen& g);

  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double p00() const noexcept { return p00_; }
  std::size_t mode_count() const noexcept { return modes_.size(); }

  /// d^(a+b+c) Phi / dx^a dy^b dz^c at (x, y, z).
  double derivative(int a, int b, int c, double x, double y, double z) const;

 private:
  struct Mode {
    int m;
    int n;
    std::complex<double> amp;
    double kx;
    double ky;
    double k;
  };

  double lx_;
  double ly_;
  double p00_;
  std::vector<Mode> modes_;
};

FourierField odd_extend_fourier(const FourierGen& g);

/// A harmonic potential with analytic derivatives up to third order, plus trap
/// parameters for the pseudopotential.
class Field {
 public:
  Field(ZSeries series, TrapParams params = {});
  Field(FourierField field, TrapParams params = {});

  bool is_series() const noexcept { return std::holds_alternative<Series>(repr_); }
  const ZSeries& series() const { return std::get<Series>(repr_).phi; }
  const FourierField& fourier() const { return std::get<FourierField>(repr_); }
  const TrapParams& params() const noexcept { return params_; }

  double value(const Vec3& r) const;
  Vec3 gradient(const Vec3& r) const;
  SymMat3 hessian(const Vec3& r) const;
  SymTensor3 third(const Vec3& r) const;

  /// Arbitrary mixed partial d^(a+b+c) Phi / dx^a dy^b dz^c.
  double derivative(int a, int b, int c, const Vec3& r) const;

 private:
  struct Series {
    ZSeries phi;
    std::array<ZSeries, 3> grad;
    std::array<ZSeries, 6> hess;    // xx xy xz yy yz zz
    std::array<ZSeries, 10> third;  // sorted index triples, see SymTensor3
  };

  static Series prepare(ZSeries s);

  std::variant<Series, FourierField> repr_;
  TrapParams params_;
};

/// Odd extension of a compiled generator: polynomial data gives a ZSeries,
/// periodic data a FourierField.
Field extend(const Generator& g, TrapParams params = {});

/// U = kappa |grad Phi|^2.
double pseudopotential(const Field& f, const Vec3& r);
/// grad U = 2 kappa H grad Phi.
Vec3 pseudopotential_gradient(const Field& f, const Vec3& r);
/// Hess U = 2 kappa (H H + sum_k (grad Phi)_k T_k), with T the third-derivative tensor.
SymMat3 pseudopotential_hessian(const Field& f, const Vec3& r);

}  // namespace rftrap
