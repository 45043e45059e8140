#include "rftrap/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rftrap {

double SymMat2::operator()(int r, int c) const noexcept {
  if (r == 0 && c == 0) return xx;
  if (r == 1 && c == 1) return yy;
  return xy;
}

Vec2 SymMat2::eigenvalues() const noexcept {
  const double mean = 0.5 * (xx + yy);
  const double radius = std::hypot(0.5 * (xx - yy), xy);
  return {mean - radius, mean + radius};
}

Vec2 SymMat2::eigenvector(double lambda) const noexcept {
  // Rows of (M - lambda I) are orthogonal to the eigenvector; use the larger one.
  const double a0 = xx - lambda, b0 = xy;
  const double a1 = xy, b1 = yy - lambda;
  Vec2 v = (std::hypot(a0, b0) >= std::hypot(a1, b1)) ? Vec2{-b0, a0} : Vec2{-b1, a1};
  const double n = std::hypot(v[0], v[1]);
  if (n == 0.0) return {1.0, 0.0};
  return {v[0] / n, v[1] / n};
}

double SymMat3::operator()(int r, int c) const noexcept {
  if (r > c) std::swap(r, c);
  switch (r * 3 + c) {
    case 0: return xx;
    case 1: return xy;
    case 2: return xz;
    case 4: return yy;
    case 5: return yz;
    default: return zz;
  }
}

double& SymMat3::at(int r, int c) noexcept {
  if (r > c) std::swap(r, c);
  switch (r * 3 + c) {
    case 0: return xx;
    case 1: return xy;
    case 2: return xz;
    case 4: return yy;
    case 5: return yz;
    default: return zz;
  }
}

double SymMat3::max_abs() const noexcept {
  return std::max({std::abs(xx), std::abs(xy), std::abs(xz), std::abs(yy), std::abs(yz),
                   std::abs(zz)});
}

Vec3 SymMat3::operator*(const Vec3& v) const noexcept {
  Vec3 out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

SymMat3 SymMat3::squared() const noexcept {
  SymMat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(r, k) * (*this)(k, c);
      out.at(r, c) = s;
    }
  return out;
}

Vec3 SymMat3::eigenvalues() const {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = (*this)(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev[0], ev[1], ev[2]};
}

int SymTensor3::index(int i, int j, int k) noexcept {
  // Sort indices, then map the multiset to 0..9.
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  static constexpr int table[3][3][3] = {
      {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}},
      {{1, 3, 4}, {3, 6, 7}, {4, 7, 8}},
      {{2, 4, 5}, {4, 7, 8}, {5, 8, 9}},
  };
  return table[i][j][k];
}

SymMat3 SymTensor3::contract(const Vec3& v) const noexcept {
  SymMat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += v[k] * (*this)(r, c, k);
      out.at(r, c) = s;
    }
  return out;
}

double dot(const Vec3& a, const Vec3& b) noexcept { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& v) noexcept { return std::sqrt(dot(v, v)); }
double norm(const Vec2& v) noexcept { return std::hypot(v[0], v[1]); }

}  // namespace rftrap
