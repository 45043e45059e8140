#include "rftrap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rftrap {

std::vector<Vec3> sample_points(const Box& box, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x0, box.x1);
  std::uniform_real_distribution<double> uy(box.y0, box.y1);
  std::uniform_real_distribution<double> uz(box.z0, box.z1);
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double z = uz(rng);
    out.push_back({x, y, z});
  }
  return out;
}

std::vector<Vec3> sample_plane_points(const Box& box, std::size_t count, std::uint64_t seed) {
  auto pts = sample_points(box, count, seed);
  for (auto& p : pts) p[2] = 0.0;
  return pts;
}

namespace {

Vec3 shifted(Vec3 r, int axis, double d) {
  r[axis] += d;
  return r;
}

void require_step(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

}  // namespace

double check_gradient(const Field& f, const std::vector<Vec3>& points, double h) {
  require_step(h);
  double worst = 0.0;
  for (const Vec3& r : points) {
    const Vec3 g = f.gradient(r);
    const double scale = norm(g) + kEpsFloor;
    for (int axis = 0; axis < 3; ++axis) {
      const double fd =
          (f.value(shifted(r, axis, h)) - f.value(shifted(r, axis, -h))) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[axis]) / scale);
    }
  }
  return worst;
}

double check_laplace(const Field& f, const std::vector<Vec3>& points, double h) {
  require_step(h);
  double worst = 0.0;
  for (const Vec3& r : points) {
    const double centre = f.value(r);
    double magnitude = std::abs(centre);
    auto sample = [&](const Vec3& p) {
      const double v = f.value(p);
      magnitude = std::max(magnitude, std::abs(v));
      return v;
    };
    double pure[3];
    for (int axis = 0; axis < 3; ++axis)
      pure[axis] = (sample(shifted(r, axis, h)) - 2.0 * centre + sample(shifted(r, axis, -h))) / (h * h);
    double scale = std::max({std::abs(pure[0]), std::abs(pure[1]), std::abs(pure[2])});
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const Vec3 pp = shifted(shifted(r, a, h), b, h);
        const Vec3 pm = shifted(shifted(r, a, h), b, -h);
        const Vec3 mp = shifted(shifted(r, a, -h), b, h);
        const Vec3 mm = shifted(shifted(r, a, -h), b, -h);
        const double mixed = (sample(pp) - sample(pm) - sample(mp) + sample(mm)) / (4.0 * h * h);
        scale = std::max(scale, std::abs(mixed));
      }
    }
    // Locally linear field: every second difference is rounding noise, so
    // there is no curvature to normalize against and nothing to check.
    const double noise = kRoundoffFactor * std::numeric_limits<double>::epsilon() * magnitude / (h * h);
    if (scale <= noise) continue;
    const double lap = pure[0] + pure[1] + pure[2];
    worst = std::max(worst, std::abs(lap) / std::max(scale, kEpsFloor));
  }
  return worst;
}

BoundaryErrors check_boundary(const Field& f, const Generator& normal,
                              const std::vector<Vec3>& points, double h,
                              const Generator* in_plane) {
  require_step(h);
  BoundaryErrors out;
  for (const Vec3& r : points) {
    if (r[2] != 0.0) throw std::invalid_argument("check_boundary: points must lie in z = 0");
    const double expected_value = in_plane ? in_plane->value(r[0], r[1]) : 0.0;
    const double expected_dz = normal.value(r[0], r[1]);
    out.max_plane_value = std::max(out.max_plane_value, std::abs(f.value(r) - expected_value));
    out.max_normal_error = std::max(out.max_normal_error, std::abs(f.gradient(r)[2] - expected_dz));
    // Fourth-order stencil: the z^3 term of high-degree data swamps the
    // second-order one at the default step.
    const double fd = (8.0 * (f.value(shifted(r, 2, h)) - f.value(shifted(r, 2, -h))) -
                       (f.value(shifted(r, 2, 2.0 * h)) - f.value(shifted(r, 2, -2.0 * h)))) /
                      (12.0 * h);
    out.max_normal_error_fd = std::max(out.max_normal_error_fd, std::abs(fd - expected_dz));
  }
  return out;
}

VerifyReport verify_field(const Field& f, const Generator& g, const VerifyOptions& options) {
  const auto bulk = sample_points(options.box, options.samples, options.seed);
  const auto plane = sample_plane_points(options.box, options.samples, options.seed + 1);

  VerifyReport report;
  report.samples = options.samples;
  report.max_gradient_error = check_gradient(f, bulk, options.h);
  report.max_laplace_residual = check_laplace(f, bulk, options.h);
  const BoundaryErrors b = check_boundary(f, g, plane, options.h);
  report.max_plane_value = b.max_plane_value;
  report.max_normal_error = b.max_normal_error;
  report.max_normal_error_fd = b.max_normal_error_fd;

  const VerifyTolerances& tol = options.tolerances;
  report.pass = report.max_gradient_error < tol.gradient &&
                report.max_laplace_residual < tol.laplace &&
                report.max_plane_value < tol.plane_value &&
                report.max_normal_error < tol.normal_analytic &&
                report.max_normal_error_fd < tol.normal_fd;
  return report;
}

}  // namespace rftrap
