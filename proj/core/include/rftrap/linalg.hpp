#pragma once

// Small fixed-size symmetric matrices used for Hessians.

#include <array>

namespace rftrap {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double operator()(int r, int c) const noexcept;
  double trace() const noexcept { return xx + yy; }
  double det() const noexcept { return xx * yy - xy * xy; }

  /// Ascending.
  Vec2 eigenvalues() const noexcept;
  /// Unit eigenvector for the given eigenvalue.
  Vec2 eigenvector(double lambda) const noexcept;

  bool operator==(const SymMat2&) const = default;
};

struct SymMat3 {
  double xx = 0.0;
  double xy = 0.0;
  double xz = 0.0;
  double yy = 0.0;
  double yz = 0.0;
  double zz = 0.0;

  double operator()(int r, int c) const noexcept;
  double& at(int r, int c) noexcept;
  double trace() const noexcept { return xx + yy + zz; }
  double max_abs() const noexcept;

  Vec3 operator*(const Vec3& v) const noexcept;
  /// M * M, symmetric for symmetric M.
  SymMat3 squared() const noexcept;

  /// Ascending.
  Vec3 eigenvalues() const;
};

/// Fully symmetric rank-3 tensor T_ijk (third derivatives of a scalar field).
/// Ten independent entries.
class SymTensor3 {
 public:
  double operator()(int i, int j, int k) const noexcept { return data_[index(i, j, k)]; }
  double& at(int i, int j, int k) noexcept { return data_[index(i, j, k)]; }

  /// Contraction  sum_k v_k T_ijk.
  SymMat3 contract(const Vec3& v) const noexcept;

 private:
  static int index(int i, int j, int k) noexcept;

  std::array<double, 10> data_{};
};

double dot(const Vec3& a, const Vec3& b) noexcept;
double norm(const Vec3& v) noexcept;
double norm(const Vec2& v) noexcept;

}  // namespace rftrap
