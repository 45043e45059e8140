#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rftrap/extension.hpp"
#include "rftrap/generator.hpp"
#include "support/property.hpp"

using namespace rftrap;
using rftrap::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
const Poly2 X = Poly2::x();
const Poly2 Y = Poly2::y();
const Poly2 ONE = Poly2::constant(1.0);

double max_layer_diff(const ZSeries& a, const ZSeries& b) {
  double worst = 0.0;
  const int top = std::max(a.total_degree(), b.total_degree()) + 2;
  for (int n = 0; n <= top + 2; ++n)
    worst = std::max(worst, (a.layer(n) - b.layer(n)).max_abs_coeff());
  return worst;
}

double trace(const SymMat3& h) { return h.xx + h.yy + h.zz; }

}  // namespace

TEST_CASE("odd_extend closed forms") {
  const ZSeries cusp = odd_extend(pow(Y, 2) - pow(X, 3));
  CHECK(cusp.size() == 2);
  CHECK(cusp.layer(1) == pow(Y, 2) - pow(X, 3));
  CHECK(cusp.layer(3) == 6.0 * X - 2.0 * ONE);

  const ZSeries lin = odd_extend(X);
  CHECK(lin.size() == 1);
  CHECK(lin.layer(1) == X);

  const ZSeries quartic = odd_extend(pow(X, 4));
  CHECK(quartic.size() == 3);
  CHECK(quartic.layer(1) == pow(X, 4));
  CHECK(quartic.layer(3) == -12.0 * pow(X, 2));
  CHECK(quartic.layer(5) == Poly2::constant(24.0));

  CHECK(odd_extend(Poly2{}).is_zero());
  CHECK(odd_extend(X * Y).size() == 1);
}

TEST_CASE("even_extend and ck_extend") {
  const ZSeries harmonic = even_extend(pow(X, 2) - pow(Y, 2));
  CHECK(harmonic.size() == 1);
  CHECK(harmonic.layer(0) == pow(X, 2) - pow(Y, 2));

  const ZSeries sq = even_extend(pow(X, 2));
  CHECK(sq.size() == 2);
  CHECK(sq.layer(0) == pow(X, 2));
  CHECK(sq.layer(2) == Poly2::constant(-2.0));
  // x^2 - z^2
  CHECK(zseries_eval(sq, 0.5, 9.0, 2.0) == doctest::Approx(0.25 - 4.0));

  CHECK(even_extend(ONE).size() == 1);
  CHECK(even_extend(ONE).layer(0) == ONE);

  const ZSeries both = ck_extend(pow(X, 2), X);
  CHECK(both.size() == 3);
  CHECK(both.layer(0) == pow(X, 2));
  CHECK(both.layer(1) == X);
  CHECK(both.layer(2) == Poly2::constant(-2.0));

  const Poly2 p = pow(Y, 2) - pow(X, 3);
  CHECK(max_layer_diff(ck_extend(Poly2{}, p), odd_extend(p)) == 0.0);
  CHECK(ck_extend(Poly2{}, Poly2{}).is_zero());
}

TEST_CASE("trap parameters") {
  CHECK(TrapParams{}.kappa() == 1.0);
  CHECK(TrapParams::normalized().kappa() == 1.0);
  const double q = 1.602176634e-19, m = 40 * 1.66053906660e-27, w = 2 * kPi * 20e6;
  CHECK(TrapParams::physical(q, m, w).kappa() ==
        doctest::Approx(q * q / (4 * m * w * w)).epsilon(1e-14));
  CHECK_THROWS(TrapParams::physical(q, 0.0, w));
  CHECK_THROWS(TrapParams::physical(q, m, -1.0));
  CHECK_THROWS(TrapParams::with_kappa(0.0));
}

TEST_CASE("Fourier odd extension spot values") {
  const FourierField one = odd_extend_fourier(parse_fourier("1", {2.0, 2.0}));
  CHECK(one.derivative(0, 0, 0, 0.3, -0.2, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(one.mode_count() == 0);

  const FourierField single = odd_extend_fourier(parse_fourier("cos(pi*x)", {2.0, 2.0}));
  for (double z : {0.0, 1e-6, 1e-3, 0.4, -1.3}) {
    const double want = std::sinh(kPi * z) / kPi * std::cos(kPi * 0.3);
    CHECK(single.derivative(0, 0, 0, 0.3, 0.9, z) == doctest::Approx(want).epsilon(1e-13));
    const double dz = std::cosh(kPi * z) * std::cos(kPi * 0.3);
    CHECK(single.derivative(0, 0, 1, 0.3, 0.9, z) == doctest::Approx(dz).epsilon(1e-13));
  }

  const Generator round = compile(catalog("round", {{"c", 0.25}}));
  const Field f = extend(round);
  CHECK_FALSE(f.is_series());
  CHECK(f.fourier().mode_count() == 6);
  CHECK(std::abs(f.gradient({1.0, 0.0, 0.0})[2]) < 1e-14);
  for (double x : {-0.7, 0.1, 0.55})
    for (double y : {-1.2, 0.3})
      CHECK(f.gradient({x, y, 0.0})[2] == doctest::Approx(round.value(x, y)).epsilon(1e-13));
}

TEST_CASE("field derivatives on closed forms") {
  const Field lin = extend(compile(catalog("linear")));
  for (double y : {-3.0, 0.0, 2.5}) {
    const Vec3 g = lin.gradient({0.0, y, 0.0});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
  }

  const Field cusp = extend(compile(catalog("cusp")));
  const double t = 1.3;
  const Vec3 g = cusp.gradient({t * t, t * t * t, 0.0});
  CHECK(norm(g) < 1e-12);

  const Field round = extend(compile(catalog("round")));
  const SymMat3 h = round.hessian({0.3, 0.7, 0.2});
  CHECK(std::abs(trace(h)) < 1e-10 * h.max_abs());

  // Mixed third derivative of z*x*y is exactly 1.
  const Field cross = extend(compile(catalog("cross")));
  CHECK(cross.third({0.4, -0.1, 0.8})(0, 1, 2) == 1.0);
  CHECK(cross.derivative(1, 1, 1, {5.0, 5.0, 5.0}) == 1.0);
}

TEST_CASE("pseudopotential of the linear guide") {
  const Field lin = extend(compile(catalog("linear")));
  const Vec3 r{0.3, -2.0, 0.4};
  CHECK(pseudopotential(lin, r) == doctest::Approx(0.09 + 0.16).epsilon(1e-15));
  const Vec3 gu = pseudopotential_gradient(lin, r);
  CHECK(gu[0] == doctest::Approx(0.6));
  CHECK(gu[1] == 0.0);
  CHECK(gu[2] == doctest::Approx(0.8));
  const auto ev = pseudopotential_hessian(lin, r).eigenvalues();
  CHECK(std::abs(ev[0]) < 1e-14);
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(2.0));

  const Field scaled = extend(compile(catalog("linear")), TrapParams::with_kappa(3.0));
  CHECK(pseudopotential(scaled, r) == doctest::Approx(3.0 * 0.25));
}

TEST_CASE("pseudopotential vanishes on the null set") {
  const Field cusp = extend(compile(catalog("cusp")));
  for (double t : {-1.1, 0.4, 1.7}) {
    const Vec3 r{t * t, t * t * t, 0.0};
    CHECK(pseudopotential(cusp, r) < 1e-24);
    CHECK(norm(pseudopotential_gradient(cusp, r)) < 1e-12);
  }
  const Field round = extend(compile(catalog("round", {{"c", 0.25}})));
  const Vec3 node{1.0, 0.0, 0.0};
  CHECK(pseudopotential(round, node) < 1e-28);
  CHECK(norm(pseudopotential_gradient(round, node)) < 1e-14);
  CHECK(pseudopotential_hessian(round, node).max_abs() < 1e-9);
}

TEST_CASE("pseudopotential derivatives match finite differences of U") {
  const Field round = extend(compile(catalog("round", {{"c", 0.1}})));
  const Vec3 r{0.31, -0.42, 0.23};
  const double h = 1e-5;
  const Vec3 gu = pseudopotential_gradient(round, r);
  const SymMat3 hu = pseudopotential_hessian(round, r);
  for (int a = 0; a < 3; ++a) {
    Vec3 p = r, m = r;
    p[a] += h;
    m[a] -= h;
    const double fd = (pseudopotential(round, p) - pseudopotential(round, m)) / (2 * h);
    CHECK(fd == doctest::Approx(gu[a]).epsilon(1e-7));
    const Vec3 gp = pseudopotential_gradient(round, p), gm = pseudopotential_gradient(round, m);
    for (int b = 0; b < 3; ++b)
      CHECK((gp[b] - gm[b]) / (2 * h) == doctest::Approx(hu(a, b)).epsilon(1e-6));
  }
}

// --- properties ------------------------------------------------------------

TEST_CASE("property: recursion identity and truncation bound") {
  auto r = testing::for_all(200, 41, [](Gen& g) -> std::string {
    const Poly2 p = g.polynomial(g.integer(0, 10));
    const Poly2 q = g.polynomial(g.integer(0, 10));
    for (const ZSeries& s : {odd_extend(p), even_extend(q), ck_extend(q, p)}) {
      for (const auto& [n, layer] : s.layers()) {
        const Poly2 residual = s.layer(n + 2) + laplacian_xy(layer);
        if (residual.max_abs_coeff() > 1e-12) return "recursion broken at layer " + std::to_string(n);
      }
      if (!laplacian_3d(s).is_zero()) return "symbolic Laplacian nonzero";
    }
    const ZSeries odd = odd_extend(p);
    if (static_cast<int>(odd.size()) > p.degree() / 2 + 1) return "too many layers";
    if (odd.has_layer(0) || !(odd.layer(1) == p)) return "boundary layers wrong";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("property: odd extensions are antisymmetric in z and satisfy the boundary data") {
  auto r = testing::for_all(200, 42, [](Gen& g) -> std::string {
    const Poly2 p = g.polynomial(g.integer(0, 10));
    const Field f{odd_extend(p)};
    const double x = g.uniform(-1, 1), y = g.uniform(-1, 1), z = g.uniform(-1, 1);
    const double scale = std::max(1.0, std::abs(f.value({x, y, z})));
    if (std::abs(f.value({x, y, -z}) + f.value({x, y, z})) > 1e-12 * scale) return "not odd in z";
    if (f.value({x, y, 0.0}) != 0.0) return "nonzero in plane";
    if (std::abs(f.gradient({x, y, 0.0})[2] - eval(p, x, y)) > 1e-12 * std::max(1.0, p.max_abs_coeff()))
      return "normal derivative differs from P";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("property: Fourier extensions are antisymmetric and harmonic") {
  auto r = testing::for_all(100, 43, [](Gen& g) -> std::string {
    FourierGen::ModeMap modes;
    for (int t = 0; t < 4; ++t)
      modes[{g.integer(-3, 3), g.integer(-3, 3)}] = {g.uniform(-1, 1), g.uniform(-1, 1)};
    const FourierGen gen(g.uniform(0.5, 3.0), g.uniform(0.5, 3.0), modes);
    const Field f{odd_extend_fourier(gen)};
    const Vec3 r{g.uniform(-2, 2), g.uniform(-2, 2), g.uniform(-1, 1)};
    const double scale = std::max(1.0, std::abs(f.value(r)));
    if (std::abs(f.value({r[0], r[1], -r[2]}) + f.value(r)) > 1e-12 * scale) return "not odd in z";
    const SymMat3 h = f.hessian(r);
    if (std::abs(trace(h)) > 1e-10 * std::max(h.max_abs(), 1e-300)) return "Laplacian nonzero";
    if (std::abs(f.gradient({r[0], r[1], 0.0})[2] - eval_fourier(gen, r[0], r[1])) > 1e-12 * scale)
      return "normal derivative differs from P";
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}

TEST_CASE("property: odd extension is linear") {
  auto r = testing::for_all(200, 44, [](Gen& g) -> std::string {
    const Poly2 p = g.polynomial(g.integer(0, 10));
    const Poly2 q = g.polynomial(g.integer(0, 10));
    const double a = g.uniform(-2, 2), b = g.uniform(-2, 2);
    ZSeries combo = odd_extend(p);
    combo *= a;
    ZSeries rhs = odd_extend(q);
    rhs *= b;
    combo += rhs;
    // Deep layers carry factorial-sized coefficients; compare relative to them.
    double scale = 1.0;
    for (const auto& [n, layer] : combo.layers()) scale = std::max(scale, layer.max_abs_coeff());
    const double err = max_layer_diff(odd_extend(a * p + b * q), combo);
    if (err > 1e-13 * scale) return "layers differ by " + std::to_string(err / scale);
    return {};
  });
  CHECK_MESSAGE(r.ok(), r.first_failure);
}
