#pragma once

// Exact sparse calculus on bivariate polynomials P(x,y) and on finite
// z-power series  Phi(x,y,z) = sum_n z^n/n! phi_n(x,y).

#include <compare>
#include <map>
#include <string>

namespace rftrap {

enum class Axis { x, y, z };

/// Exponent pair (i, j) of the monomial x^i y^j.
struct Exponent {
  int i = 0;
  int j = 0;

  auto operator<=>(const Exponent&) const = default;
  int total() const noexcept { return i + j; }
};

/// Sparse bivariate polynomial with double coefficients.
///
/// Stored coefficients are never exactly zero; arithmetic prunes exact
/// cancellations only (no epsilon pruning). The zero polynomial has an empty
/// term map and degree -1.
class Poly2 {
 public:
  using TermMap = std::map<Exponent, double>;

  Poly2() = default;
  explicit Poly2(TermMap terms);

  static Poly2 constant(double c);
  static Poly2 monomial(int i, int j, double c = 1.0);
  static Poly2 x() { return monomial(1, 0); }
  static Poly2 y() { return monomial(0, 1); }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  int degree() const noexcept;
  double coeff(int i, int j) const;
  double max_abs_coeff() const noexcept;

  Poly2& operator+=(const Poly2& rhs);
  Poly2& operator-=(const Poly2& rhs);
  Poly2& operator*=(double s);

  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(Poly2 a, double s) { return a *= s; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }
  friend Poly2 operator-(Poly2 a) { return a *= -1.0; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);

  bool operator==(const Poly2&) const = default;

 private:
  void accumulate(const Exponent& e, double c);

  TermMap terms_;
};

Poly2 add(const Poly2& a, const Poly2& b);
Poly2 mul(const Poly2& a, const Poly2& b);
Poly2 pow(const Poly2& base, unsigned exponent);

/// Partial derivative along x or y. Axis::z yields the zero polynomial,
/// since a Poly2 does not depend on z.
Poly2 diff(const Poly2& p, Axis axis);

/// In-plane Laplacian  d^2/dx^2 + d^2/dy^2.
Poly2 laplacian_xy(const Poly2& p);

double eval(const Poly2& p, double x, double y);

/// Returns q with q(u, v) = p(x0 + u, y0 + v), expanded by the binomial theorem.
Poly2 taylor_shift(const Poly2& p, double x0, double y0);

/// Human-readable form that reparses to an identical term map, e.g.
/// "y^2 - x^3" or "0.5*x*y + 1". Coefficients use the shortest round-trip
/// decimal representation.
std::string to_string(const Poly2& p);

/// Finite z-power series  Phi(x,y,z) = sum_n z^n/n! * phi_n(x,y).
///
/// Layers hold phi_n = d^n Phi/dz^n at z = 0, so the 1/n! is applied only at
/// evaluation time. Zero layers are never stored.
class ZSeries {
 public:
  using LayerMap = std::map<int, Poly2>;

  ZSeries() = default;
  explicit ZSeries(LayerMap layers);

  const LayerMap& layers() const noexcept { return layers_; }
  /// The stored phi_n, or the zero polynomial when the layer is absent.
  const Poly2& layer(int n) const;
  bool has_layer(int n) const { return layers_.contains(n); }
  bool is_zero() const noexcept { return layers_.empty(); }
  std::size_t size() const noexcept { return layers_.size(); }

  /// Largest total degree n + deg(phi_n) of any term; -1 for the zero series.
  int total_degree() const noexcept;

  ZSeries& operator+=(const ZSeries& rhs);
  ZSeries& operator*=(double s);
  friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
  friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a += b * -1.0; }
  friend ZSeries operator*(ZSeries a, double s) { return a *= s; }
  friend ZSeries operator*(double s, ZSeries a) { return a *= s; }

  bool operator==(const ZSeries&) const = default;

 private:
  LayerMap layers_;
};

double zseries_eval(const ZSeries& s, double x, double y, double z);

/// Exact derivative. Along z the layers shift down: layer n of dPhi/dz is phi_{n+1}.
ZSeries zseries_diff(const ZSeries& s, Axis axis);

/// Symbolic 3-D Laplacian: layer n of the result is  Delta_xy phi_n + phi_{n+2}.
ZSeries laplacian_3d(const ZSeries& s);

}  // namespace rftrap
