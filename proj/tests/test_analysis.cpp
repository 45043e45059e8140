#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rftrap/analysis.hpp"
#include "rftrap/errors.hpp"
#include "support/oracles.hpp"
#include "support/property.hpp"

using namespace rftrap;
using rftrap::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Generator round_gen(double c) { return compile(catalog("round", {{"c", c}})); }

std::size_t vertex_count(const std::vector<Polyline>& lines) {
  std::size_t n = 0;
  for (const auto& l : lines) n += l.points.size();
  return n;
}

// Worst distance from a null-line vertex to the exact cusp curve.
double cusp_vertex_error(int resolution) {
  const auto lines = null_lines(compile(catalog("cusp")), {-0.5, 2.5, -3.0, 3.0}, resolution);
  double worst = 0.0;
  for (const auto& l : lines)
    for (const Point2& p : l.points) worst = std::max(worst, testing::distance_to_cusp(p.x, p.y));
  return worst;
}

// P(R r) for a rotation R by angle t, as a polynomial.
Poly2 rotated(const Poly2& p, double t) {
  const Poly2 u = std::cos(t) * Poly2::x() - std::sin(t) * Poly2::y();
  const Poly2 v = std::sin(t) * Poly2::x() + std::cos(t) * Poly2::y();
  Poly2 out;
  for (const auto& [e, c] : p.terms()) out += c * mul(pow(u, e.i), pow(v, e.j));
  return out;
}

}  // namespace

TEST_CASE("null lines of the linear guide") {
  const auto lines = null_lines(compile(catalog("linear")), {-1.0, 1.0, -1.0, 1.0}, 10);
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].closed);
  CHECK(lines[0].points.size() == 11);
  for (const Point2& p : lines[0].points) CHECK(p.x == 0.0);
  CHECK(null_lines(compile(catalog("linear")), {0.5, 1.0, -1.0, 1.0}, 10).empty());
  CHECK_THROWS_AS(null_lines(compile(catalog("linear")), {}, 1), std::invalid_argument);
}

TEST_CASE("null lines of the cusp") {
  const auto lines = null_lines(compile(catalog("cusp")), {-0.5, 2.5, -3.0, 3.0}, 400);
  REQUIRE(lines.size() == 1);
  const double diag = std::hypot(3.0 / 400, 6.0 / 400);
  CHECK(cusp_vertex_error(400) < 2 * diag);
  for (std::size_t i = 1; i < lines[0].points.size(); ++i)
    CHECK_FALSE(lines[0].points[i] == lines[0].points[i - 1]);
}

TEST_CASE("null lines of the round lattice at c = 0 are diagonals") {
  const Generator g = round_gen(0.0);
  const auto lines = null_lines(g, {-2.0, 2.0, -2.0, 2.0}, 101);
  CHECK(!lines.empty());
  for (const auto& l : lines) {
    for (const Point2& p : l.points) {
      const double s = p.x + p.y, d = p.x - p.y;
      auto off_odd = [](double v) { return std::abs(std::abs(std::fmod(v, 2.0)) - 1.0); };
      CHECK(std::min(off_odd(s), off_odd(d)) < 0.05);
    }
  }
}

TEST_CASE("null-line vertices obey the first-order bound") {
  for (const char* name : {"cusp", "round", "cross"}) {
    const Generator g = compile(catalog(name));
    const Window w{-1.7, 1.9, -1.6, 1.8};
    const int res = 150;
    const double diag = std::hypot((w.x1 - w.x0) / res, (w.y1 - w.y0) / res);
    for (const auto& l : null_lines(g, w, res)) {
      for (const Point2& p : l.points) {
        const Vec2 grad = g.gradient(p.x, p.y);
        if (norm(grad) < 0.1) continue;  // near a node
        CHECK(std::abs(g.value(p.x, p.y)) <= norm(grad) * diag);
      }
    }
  }
}

TEST_CASE("critical points") {
  const auto cusp = critical_points(compile(catalog("cusp")), {-1.0, 1.0, -1.0, 1.0}, 20);
  REQUIRE(cusp.size() == 1);
  CHECK(cusp[0].is_node);
  CHECK(std::abs(cusp[0].location.x) < 1e-6);
  CHECK(std::abs(cusp[0].location.y) < 1e-6);

  CHECK(critical_points(compile(catalog("linear")), {}, 20).empty());

  const auto round = critical_points(round_gen(0.2), {-2.0, 2.0, -2.0, 2.0}, 40);
  auto has_node = [&](double x, double y) {
    return std::any_of(round.begin(), round.end(), [&](const CriticalPoint& c) {
      return c.is_node && std::hypot(c.location.x - x, c.location.y - y) < 1e-8;
    });
  };
  CHECK(has_node(1.0, 0.0));
  CHECK(has_node(-1.0, 0.0));
  CHECK(has_node(0.0, 1.0));
  CHECK(has_node(0.0, -1.0));
  CHECK(std::is_sorted(round.begin(), round.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return std::tie(a.location.x, a.location.y) < std::tie(b.location.x, b.location.y);
  }));
}

TEST_CASE("quadratic part") {
  for (double c : {0.0, 0.1, 0.25, 0.4}) {
    const QuadraticPart q = quadratic_part(round_gen(c), {1.0, 0.0});
    CHECK(q.q2.xx == doctest::Approx(kPi * kPi * (0.5 - 2 * c)).epsilon(1e-12));
    CHECK(q.q2.yy == doctest::Approx(-kPi * kPi * (0.5 + 2 * c)).epsilon(1e-12));
    CHECK(std::abs(q.q2.xy) < 1e-12);
    CHECK(std::abs(q.value) < 1e-14);
  }
  const QuadraticPart cusp = quadratic_part(compile(catalog("cusp")), {0.0, 0.0});
  CHECK(cusp.gradient[0] == 0.0);
  CHECK(cusp.gradient[1] == 0.0);
  CHECK(cusp.q2.xx == 0.0);
  CHECK(cusp.q2.xy == 0.0);
  CHECK(cusp.q2.yy == 1.0);
  const QuadraticPart shifted = quadratic_part(compile(catalog("cusp")), {1.0, 1.0});
  CHECK(shifted.q2.xx == -3.0);
  CHECK(shifted.gradient[0] == -3.0);
}

TEST_CASE("node classification on the round lattice") {
  const NodeReport a = classify_node(round_gen(0.2), {1.0, 0.0});
  CHECK(a.kind == NodeKind::crossing);
  REQUIRE(a.crossing_angle.has_value());
  CHECK(*a.crossing_angle == doctest::Approx(2 * std::atan(1.0 / 3.0)).epsilon(1e-12));
  CHECK(a.multipole_order == 3);
  CHECK(a.eigenvalues[0] < 0.0);
  CHECK(a.eigenvalues[1] > 0.0);

  const NodeReport b = classify_node(round_gen(0.3), {1.0, 0.0});
  CHECK(b.kind == NodeKind::isolated);
  CHECK_FALSE(b.crossing_angle.has_value());

  CHECK(classify_node(round_gen(0.25), {1.0, 0.0}).kind == NodeKind::degenerate);
  CHECK(classify_node(compile(catalog("cusp")), {0.0, 0.0}).kind == NodeKind::degenerate);

  // Orthogonal crossing of x*y.
  const NodeReport x = classify_node(compile(catalog("cross")), {0.0, 0.0});
  CHECK(x.kind == NodeKind::crossing);
  CHECK(*x.crossing_angle == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(classify_node(round_gen(0.2), {0.5, 0.5}), PreconditionError);
  CHECK_THROWS_AS(classify_node(compile(catalog("linear")), {0.0, 0.0}), PreconditionError);
  CHECK(to_string(NodeKind::crossing) == "crossing");
}

TEST_CASE("multipole order") {
  CHECK(multipole_order(extend(round_gen(0.25)), {1.0, 0.0, 0.0}) == 3);
  CHECK(multipole_order(extend(round_gen(0.1)), {0.0, -1.0, 0.0}) == 3);
  const Field lin = extend(compile(catalog("linear")));
  CHECK(multipole_order(lin, {0.0, 0.4, 0.0}) == 2);
  CHECK(multipole_order(lin, {0.3, 0.0, 0.0}) == 1);
  CHECK(multipole_order(extend(compile(catalog("cross"))), {0.0, 0.0, 0.0}) == 3);
  CHECK(multipole_order(Field{ZSeries{}}, {0.0, 0.0, 0.0}) == kMultipoleCap);
  // z * x^5 has no terms below degree 6 at the origin.
  CHECK(multipole_order(Field{odd_extend(parse_polynomial("x^5 - 10*x^3*y^2 + 5*x*y^4"))},
                        {0.0, 0.0, 0.0}) == kMultipoleCap);
}

TEST_CASE("transverse confinement spot values") {
  const Generator lin = compile(catalog("linear"));
  const TransverseConfinement t = transverse_confinement(extend(lin), lin, {0.0, 0.7});
  CHECK(t.lambda_n == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(t.lambda_z == doctest::Approx(2.0).epsilon(1e-14));

  const Generator cusp = compile(catalog("cusp"));
  const TransverseConfinement c = transverse_confinement(extend(cusp), cusp, {1.0, 1.0});
  CHECK(c.lambda_n == doctest::Approx(26.0).epsilon(1e-6));
  CHECK(c.lambda_z == doctest::Approx(26.0).epsilon(1e-6));

  const Generator r0 = round_gen(0.0);
  const TransverseConfinement r = transverse_confinement(extend(r0), r0, {0.5, 0.5});
  CHECK(r.lambda_n == doctest::Approx(4 * kPi * kPi).epsilon(1e-6));
  CHECK(r.lambda_z == doctest::Approx(4 * kPi * kPi).epsilon(1e-6));

  const Field scaled = extend(lin, TrapParams::with_kappa(0.5));
  CHECK(transverse_confinement(scaled, lin, {0.0, 0.0}).lambda_z == doctest::Approx(1.0));

  CHECK_THROWS_AS(transverse_confinement(extend(cusp), cusp, {0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(transverse_confinement(extend(cusp), cusp, {1.0, 0.5}), PreconditionError);
}

TEST_CASE("projection onto the null set") {
  const Generator cusp = compile(catalog("cusp"));
  const auto p = project_to_null(cusp, {1.1, 0.9});
  REQUIRE(p.has_value());
  CHECK(std::abs(cusp.value(p->x, p->y)) < 1e-12);
  CHECK_FALSE(project_to_null(Generator(Poly2::constant(1.0)), {0.0, 0.0}).has_value());
}

TEST_CASE("threshold scan") {
  const GeneratorSpec family = catalog("round");
  CHECK(threshold_scan(family, "c", {1.0, 0.0}, 0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(threshold_scan(family, "c", {1.0, 0.0}, -0.5, 0.0) == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK_THROWS_AS(threshold_scan(family, "c", {1.0, 0.0}, 0.0, 0.2), PreconditionError);
  CHECK_THROWS_AS(threshold_scan(family, "q", {1.0, 0.0}, 0.0, 0.5), SpecError);
}

// --- properties ------------------------------------------------------------

TEST_CASE("property: node classification is rotation equivariant") {
  auto r = testing::for_all(100, 71, [](Gen& g) -> std::string {
    // Random harmonic-plus-quadratic node at the origin: a u^2 + b uv + c v^2 + cubic.
    const Poly2 p = g.uniform(-1, 1) * pow(Poly2::x(), 2) + g.uniform(-1, 1) * Poly2::x() * Poly2::y() +
                    g.uniform(-1, 1) * pow(Poly2::y(), 2) + g.uniform(-1, 1) * pow(Poly2::x(), 3) +
                    g.uniform(-1, 1) * Poly2::x() * pow(Poly2::y(), 2);
    const double t = g.uniform(0.0, 2 * kPi);
    const NodeReport a = classify_node(Generator(p), {0.0, 0.0});
    const NodeReport b = classify_node(Generator(rotated(p, t)), {0.0, 0.0});
    if (a.kind != b.kind) return "kind changed under rotation";
    if (a.crossing_angle && std::abs(*a.crossing_angle - *b.crossing_angle) > 1e-8)
      return "angle changed under rotation";
    if (a.multipole_order != b.multipole_order) return "multipole order changed";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("property: node classification is invariant under positive scaling") {
  auto r = testing::for_all(100, 72, [](Gen& g) -> std::string {
    const double c = g.uniform(-0.6, 0.6);
    const double lambda = std::exp(g.uniform(-3.0, 3.0));
    const GeneratorSpec base = catalog("round", {{"c", c}});
    GeneratorSpec scaled = base;
    scaled.expr = std::to_string(lambda) + "*(" + base.expr + ")";
    const NodeReport a = classify_node(compile(base), {1.0, 0.0});
    const NodeReport b = classify_node(compile(scaled), {1.0, 0.0});
    if (a.kind != b.kind) return "kind changed at c=" + std::to_string(c);
    if (a.crossing_angle && std::abs(*a.crossing_angle - *b.crossing_angle) > 1e-8)
      return "angle changed";
    if (a.multipole_order != b.multipole_order) return "multipole order changed";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("property: transverse confinement on random guide points") {
  auto r = testing::for_all(100, 73, [](Gen& g) -> std::string {
    const char* names[] = {"linear", "cusp", "round"};
    const Generator gen = compile(catalog(names[g.integer(0, 2)]));
    const double kappa = std::exp(g.uniform(-2.0, 2.0));
    const auto p = project_to_null(gen, {g.uniform(-1.8, 1.8), g.uniform(-1.8, 1.8)});
    if (!p) return {};
    const Vec2 grad = gen.gradient(p->x, p->y);
    if (norm(grad) < 1e-3 || std::abs(gen.value(p->x, p->y)) >= kNullTol) return {};
    const TransverseConfinement t =
        transverse_confinement(extend(gen, TrapParams::with_kappa(kappa)), gen, *p);
    const double want = 2 * kappa * (grad[0] * grad[0] + grad[1] * grad[1]);
    if (testing::rel_err(t.lambda_n, want) > 1e-6) return "lambda_n off";
    if (testing::rel_err(t.lambda_z, want) > 1e-6) return "lambda_z off";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("round node set is symmetric") {
  const auto pts = critical_points(round_gen(0.2), {-2.0, 2.0, -2.0, 2.0}, 40);
  std::vector<Point2> nodes;
  for (const auto& c : pts)
    if (c.is_node) nodes.push_back(c.location);
  REQUIRE(!nodes.empty());
  auto contains = [&](double x, double y) {
    return std::any_of(nodes.begin(), nodes.end(),
                       [&](const Point2& q) { return std::hypot(q.x - x, q.y - y) < 1e-8; });
  };
  for (const Point2& n : nodes) {
    CHECK(contains(n.y, n.x));
    CHECK(contains(-n.x, n.y));
  }
}

TEST_CASE("null-line error shrinks with resolution") {
  const double e400 = cusp_vertex_error(400);
  const double e800 = cusp_vertex_error(800);
  CHECK(e800 < 0.6 * e400);
  CHECK(vertex_count(null_lines(compile(catalog("cusp")), {-0.5, 2.5, -3.0, 3.0}, 800)) >
        vertex_count(null_lines(compile(catalog("cusp")), {-0.5, 2.5, -3.0, 3.0}, 400)));
}
