#pragma once

// Field-free network analysis: null lines of P, critical points, node
// classification, multipole order, and transverse confinement on guides.

#include <optional>
#include <string>
#include <vector>

#include "rftrap/extension.hpp"
#include "rftrap/generator.hpp"
#include "rftrap/linalg.hpp"

namespace rftrap {

/// Null-set tolerances: a point is on the null set when |P| < kNullTol; it is
/// a node when additionally |grad P| < kNodeGradTol; it is a regular guide
/// point when |grad P| > kRegularGradTol.
inline constexpr double kNullTol = 1e-8;
inline constexpr double kNodeGradTol = 1e-8;
inline constexpr double kRegularGradTol = 1e-6;
/// An eigenvalue of the node quadratic form counts as zero when its magnitude
/// is below this fraction of the larger one.
inline constexpr double kDegenerateRelTol = 1e-8;
/// multipole_order reports this value for "order 5 or higher".
inline constexpr int kMultipoleCap = 5;

struct Window {
  double x0 = -1.0;
  double x1 = 1.0;
  double y0 = -1.0;
  double y1 = 1.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;
};

/// Marching squares over P on a resolution x resolution cell grid (resolution
/// >= 2). Crossings are linearly interpolated along cell edges; ambiguous
/// saddle cells are resolved by the sign of P at the cell centre. Vertices
/// where P == 0 exactly count as positive.
std::vector<Polyline> null_lines(const Generator& g, const Window& window, int resolution);

struct CriticalPoint {
  Point2 location;
  double value = 0.0;
  double grad_norm = 0.0;
  bool is_node = false;  // |P| < kNullTol as well
};

/// Critical points of P inside the window. Seeds are the vertices of a
/// resolution x resolution grid, each polished by damped Newton on grad P = 0;
/// seeds that do not reach |grad P| < 1e-10 are dropped. Results are
/// deduplicated within 1e-6 and ordered by (x, y).
std::vector<CriticalPoint> critical_points(const Generator& g, const Window& window,
                                           int resolution);

/// Second-order Taylor data of P about a point: P ~ value + gradient.(u,v) + (u,v) Q2 (u,v)^T.
struct QuadraticPart {
  double value = 0.0;
  Vec2 gradient{};
  SymMat2 q2;
};

QuadraticPart quadratic_part(const Generator& g, const Point2& p);

enum class NodeKind { crossing, isolated, degenerate };

std::string to_string(NodeKind kind);

struct NodeReport {
  Point2 location;
  double value = 0.0;
  Vec2 gradient{};
  SymMat2 q2;
  Vec2 eigenvalues{};                   // of q2, ascending
  NodeKind kind = NodeKind::degenerate;
  std::optional<double> crossing_angle;  // radians in [0, pi/2], crossings only
  int multipole_order = 0;               // kMultipoleCap means ">= 5"
};

/// Throws PreconditionError unless |P| < kNullTol and |grad P| < kNodeGradTol.
NodeReport classify_node(const Generator& g, const Point2& p);

/// Lowest total degree >= 1 with a nonzero coefficient in the Taylor expansion
/// of Phi about r (2 = quadrupole, 3 = hexapole). Coefficients below 1e-9 of
/// the largest coefficient of orders 1..4 count as zero. Returns
/// kMultipoleCap when orders 1..4 all vanish.
int multipole_order(const Field& f, const Vec3& r);

struct TransverseConfinement {
  double lambda_n = 0.0;  // along the in-plane normal grad P / |grad P|
  double lambda_z = 0.0;  // along z
};

/// Curvature of U_PP across a regular guide-line point: eigenvalues of the
/// U_PP Hessian restricted to span{(n, 0), e_z}. Throws PreconditionError at
/// nodes and off the null set.
TransverseConfinement transverse_confinement(const Field& f, const Generator& g, const Point2& p);

/// Moves (x, y) onto P = 0 by Newton steps along grad P. Returns nullopt when
/// the iteration stalls.
std::optional<Point2> project_to_null(const Generator& g, Point2 start);

/// Bisection on the sign of det Q2 at a fixed point while one parameter of the
/// spec sweeps [lo, hi]. Returns the transition value to 1e-9; throws
/// PreconditionError when det Q2 has the same sign at both ends.
double threshold_scan(const GeneratorSpec& family, const std::string& param, const Point2& p,
                      double lo, double hi);

}  // namespace rftrap
