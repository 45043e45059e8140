#pragma once

// Finite-difference oracle for harmonic fields. Every FD path here reads the
// field through Field::value only, so it stays independent of the analytic
// derivative code it checks.

#include <cstdint>
#include <optional>
#include <vector>

#include "rftrap/extension.hpp"
#include "rftrap/generator.hpp"

namespace rftrap {

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kEpsFloor = 1e-12;
/// check_laplace skips points whose largest second difference is below
/// kRoundoffFactor * eps * max|Phi| / h^2, i.e. indistinguishable from rounding.
inline constexpr double kRoundoffFactor = 32.0;
inline constexpr std::uint64_t kDefaultSeed = 20260501;

struct Box {
  double x0 = -1.0, x1 = 1.0;
  double y0 = -1.0, y1 = 1.0;
  double z0 = -1.0, z1 = 1.0;
};

/// Uniform points in the box from a seeded mt19937_64; same seed, same points.
std::vector<Vec3> sample_points(const Box& box, std::size_t count, std::uint64_t seed);
/// As sample_points, with z = 0.
std::vector<Vec3> sample_plane_points(const Box& box, std::size_t count, std::uint64_t seed);

/// Max over points and axes of |FD_i - g_i| / (|g| + eps_floor), with g the
/// analytic gradient and FD the second-order central difference of
/// Field::value. The error on each axis is measured against the gradient
/// magnitude at that point.
double check_gradient(const Field& f, const std::vector<Vec3>& points, double h = kDefaultStep);

/// Max over points of |FD Laplacian| / max(|FD second derivatives|, eps_floor),
/// with the normalization taken over all six second derivatives at the point.
double check_laplace(const Field& f, const std::vector<Vec3>& points, double h = kDefaultStep);

struct BoundaryErrors {
  double max_plane_value = 0.0;           // max |Phi(x,y,0) - phi0|
  double max_normal_error = 0.0;          // max |dPhi/dz - P|, analytic gradient
  double max_normal_error_fd = 0.0;       // same, five-point central difference in z
};

/// Points must lie in z = 0. `in_plane` is the expected phi0 (zero when absent).
BoundaryErrors check_boundary(const Field& f, const Generator& normal,
                              const std::vector<Vec3>& points, double h = kDefaultStep,
                              const Generator* in_plane = nullptr);

struct VerifyTolerances {
  double gradient = 1e-6;
  double laplace = 1e-6;
  double plane_value = 1e-12;
  double normal_analytic = 1e-12;
  double normal_fd = 1e-7;
};

struct VerifyReport {
  double max_gradient_error = 0.0;
  double max_laplace_residual = 0.0;
  double max_plane_value = 0.0;
  double max_normal_error = 0.0;
  double max_normal_error_fd = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

struct VerifyOptions {
  Box box;
  std::size_t samples = 200;
  std::uint64_t seed = kDefaultSeed;
  double h = kDefaultStep;
  VerifyTolerances tolerances;
};

/// All checks on the odd extension of g, which must vanish in-plane.
VerifyReport verify_field(const Field& f, const Generator& g, const VerifyOptions& options = {});

}  // namespace rftrap
