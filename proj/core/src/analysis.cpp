#include "rftrap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rftrap/errors.hpp"

namespace rftrap {

// --- null lines ------------------------------------------------------------

namespace {

class ContourBuilder {
 public:
  ContourBuilder(const Generator& g, const Window& w, int res)
      : res_(res),
        stride_(res + 1),
        dx_((w.x1 - w.x0) / res),
        dy_((w.y1 - w.y0) / res),
        x0_(w.x0),
        y0_(w.y0),
        values_(static_cast<std::size_t>(stride_) * stride_) {
    for (int j = 0; j <= res_; ++j)
      for (int i = 0; i <= res_; ++i) values_[index(i, j)] = g.value(xi(i), yj(j));
    for (int j = 0; j < res_; ++j)
      for (int i = 0; i < res_; ++i) process_cell(g, i, j);
  }

  std::vector<Polyline> assemble() {
    std::vector<Polyline> out;
    // Open chains start at edge crossings with a single neighbour.
    for (const auto& [id, nbrs] : adjacency_)
      if (nbrs.size() == 1 && !visited(id)) out.push_back(walk(id, false));
    for (const auto& [id, nbrs] : adjacency_)
      if (!visited(id)) out.push_back(walk(id, true));
    std::erase_if(out, [](const Polyline& p) { return p.points.size() < 2; });
    return out;
  }

 private:
  using EdgeId = long long;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * stride_ + i; }
  double xi(int i) const { return x0_ + i * dx_; }
  double yj(int j) const { return y0_ + j * dy_; }
  bool positive(int i, int j) const { return values_[index(i, j)] >= 0.0; }

  EdgeId horizontal(int i, int j) const { return 2 * static_cast<EdgeId>(index(i, j)); }
  EdgeId vertical(int i, int j) const { return 2 * static_cast<EdgeId>(index(i, j)) + 1; }

  Point2 crossing(int ia, int ja, int ib, int jb) const {
    const double va = values_[index(ia, ja)];
    const double vb = values_[index(ib, jb)];
    const double t = va / (va - vb);
    return {xi(ia) + t * (xi(ib) - xi(ia)), yj(ja) + t * (yj(jb) - yj(ja))};
  }

  void link(EdgeId a, EdgeId b) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }

  void process_cell(const Generator& g, int i, int j) {
    // Corners counter-clockwise from bottom-left; edge k joins corner k and k+1.
    const int ci[4] = {i, i + 1, i + 1, i};
    const int cj[4] = {j, j, j + 1, j + 1};
    const EdgeId edge[4] = {horizontal(i, j), vertical(i + 1, j), horizontal(i, j + 1),
                            vertical(i, j)};
    bool sign[4];
    for (int k = 0; k < 4; ++k) sign[k] = positive(ci[k], cj[k]);

    int crossed[4];
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      const int l = (k + 1) % 4;
      if (sign[k] == sign[l]) continue;
      crossed[count++] = k;
      if (!points_.contains(edge[k])) points_[edge[k]] = crossing(ci[k], cj[k], ci[l], cj[l]);
    }
    if (count == 2) {
      link(edge[crossed[0]], edge[crossed[1]]);
    } else if (count == 4) {
      const bool centre = g.value(xi(i) + 0.5 * dx_, yj(j) + 0.5 * dy_) >= 0.0;
      if (centre == sign[0]) {
        // Corners 0 and 2 are joined through the centre; cut off corners 1 and 3.
        link(edge[0], edge[1]);
        link(edge[2], edge[3]);
      } else {
        link(edge[3], edge[0]);
        link(edge[1], edge[2]);
      }
    }
  }

  bool visited(EdgeId id) const { return visited_.contains(id); }

  Polyline walk(EdgeId start, bool closed) {
    Polyline line;
    line.closed = closed;
    EdgeId cur = start;
    while (true) {
      visited_.insert(cur);
      const Point2 p = points_.at(cur);
      if (line.points.empty() || !(line.points.back() == p)) line.points.push_back(p);
      // Each crossing has at most two neighbours, so the unvisited one is the way forward.
      EdgeId next = -1;
      for (EdgeId n : adjacency_.at(cur)) {
        if (!visited(n)) {
          next = n;
          break;
        }
      }
      if (next < 0) break;
      cur = next;
    }
    if (closed && line.points.size() > 1 && line.points.front() == line.points.back())
      line.points.pop_back();
    return line;
  }

  int res_;
  int stride_;
  double dx_;
  double dy_;
  double x0_;
  double y0_;
  std::vector<double> values_;
  std::unordered_map<EdgeId, Point2> points_;
  std::map<EdgeId, std::vector<EdgeId>> adjacency_;  // ordered: deterministic output
  std::unordered_set<EdgeId> visited_;
};

void check_window(const Window& w) {
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw std::invalid_argument("degenerate window");
}

}  // namespace

std::vector<Polyline> null_lines(const Generator& g, const Window& window, int resolution) {
  if (resolution < 2) throw std::invalid_argument("null_lines: resolution must be >= 2");
  check_window(window);
  return ContourBuilder(g, window, resolution).assemble();
}

// --- critical points -------------------------------------------------------

namespace {

constexpr double kCriticalGradTol = 1e-10;
constexpr double kDedupTol = 1e-6;

std::optional<Point2> newton_critical(const Generator& g, Point2 p, const Window& w) {
  const double span = std::max(w.x1 - w.x0, w.y1 - w.y0);
  for (int iter = 0; iter < 200; ++iter) {
    const Vec2 grad = g.gradient(p.x, p.y);
    const double gnorm = norm(grad);
    if (gnorm == 0.0) return p;
    const SymMat2 h = g.hessian(p.x, p.y);
    const double mu = 1e-8 * (std::abs(h.xx) + std::abs(h.yy));
    const SymMat2 damped{h.xx + mu, h.xy, h.yy + mu};
    const double det = damped.det();
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const Vec2 step{-(damped.yy * grad[0] - damped.xy * grad[1]) / det,
                    -(-damped.xy * grad[0] + damped.xx * grad[1]) / det};

    // Backtrack on |grad P|.
    double t = 1.0;
    Point2 trial{p.x + step[0], p.y + step[1]};
    while (t > 1e-4 && norm(g.gradient(trial.x, trial.y)) > gnorm) {
      t *= 0.5;
      trial = {p.x + t * step[0], p.y + t * step[1]};
    }
    const double moved = t * norm(step);
    p = trial;
    if (p.x < w.x0 - span || p.x > w.x1 + span || p.y < w.y0 - span || p.y > w.y1 + span)
      return std::nullopt;
    if (moved < 1e-13 * (1.0 + std::hypot(p.x, p.y))) break;
  }
  if (norm(g.gradient(p.x, p.y)) < kCriticalGradTol) return p;
  return std::nullopt;
}

bool inside(const Window& w, const Point2& p) {
  const double tol = 1e-9 * std::max({1.0, w.x1 - w.x0, w.y1 - w.y0});
  return p.x >= w.x0 - tol && p.x <= w.x1 + tol && p.y >= w.y0 - tol && p.y <= w.y1 + tol;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const Generator& g, const Window& window,
                                           int resolution) {
  if (resolution < 1) throw std::invalid_argument("critical_points: resolution must be >= 1");
  check_window(window);
  std::vector<Point2> found;
  for (int j = 0; j <= resolution; ++j) {
    for (int i = 0; i <= resolution; ++i) {
      const Point2 seed{window.x0 + (window.x1 - window.x0) * i / resolution,
                        window.y0 + (window.y1 - window.y0) * j / resolution};
      const auto p = newton_critical(g, seed, window);
      if (!p || !inside(window, *p)) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](const Point2& q) {
        return std::hypot(q.x - p->x, q.y - p->y) < kDedupTol;
      });
      if (!dup) found.push_back(*p);
    }
  }
  std::sort(found.begin(), found.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::vector<CriticalPoint> out;
  out.reserve(found.size());
  for (const Point2& p : found) {
    const double v = g.value(p.x, p.y);
    out.push_back({p, v, norm(g.gradient(p.x, p.y)), std::abs(v) < kNullTol});
  }
  return out;
}

// --- quadratic part and node classification --------------------------------

QuadraticPart quadratic_part(const Generator& g, const Point2& p) {
  if (g.is_polynomial()) {
    const Poly2 shifted = taylor_shift(g.polynomial(), p.x, p.y);
    return {shifted.coeff(0, 0),
            {shifted.coeff(1, 0), shifted.coeff(0, 1)},
            {shifted.coeff(2, 0), 0.5 * shifted.coeff(1, 1), shifted.coeff(0, 2)}};
  }
  const SymMat2 h = g.hessian(p.x, p.y);
  return {g.value(p.x, p.y), g.gradient(p.x, p.y), {0.5 * h.xx, 0.5 * h.xy, 0.5 * h.yy}};
}

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::crossing: return "crossing";
    case NodeKind::isolated: return "isolated";
    case NodeKind::degenerate: return "degenerate";
  }
  return "unknown";
}

NodeReport classify_node(const Generator& g, const Point2& p) {
  const QuadraticPart qp = quadratic_part(g, p);
  if (!(std::abs(qp.value) < kNullTol) || !(norm(qp.gradient) < kNodeGradTol)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "(%g, %g) is not a node: |P| = %.3g, |grad P| = %.3g", p.x,
                  p.y, std::abs(qp.value), norm(qp.gradient));
    throw PreconditionError(buf);
  }
  NodeReport r;
  r.location = p;
  r.value = qp.value;
  r.gradient = qp.gradient;
  r.q2 = qp.q2;
  r.eigenvalues = qp.q2.eigenvalues();
  const double lo = r.eigenvalues[0];
  const double hi = r.eigenvalues[1];
  const double scale = std::max(std::abs(lo), std::abs(hi));
  if (scale == 0.0 || std::min(std::abs(lo), std::abs(hi)) <= kDegenerateRelTol * scale) {
    r.kind = NodeKind::degenerate;
  } else if (lo < 0.0 && hi > 0.0) {
    r.kind = NodeKind::crossing;
    // Asymptotes make angles +-phi with the positive eigen-axis.
    const double phi = std::atan(std::sqrt(hi / -lo));
    const double between = 2.0 * phi;
    r.crossing_angle = between <= 0.5 * std::numbers::pi ? between : std::numbers::pi - between;
  } else {
    r.kind = NodeKind::isolated;
  }
  r.multipole_order = multipole_order(extend(g), {p.x, p.y, 0.0});
  return r;
}

int multipole_order(const Field& f, const Vec3& r) {
  std::array<double, 5> magnitude{};  // index = order
  double factorial[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
  for (int order = 1; order <= 4; ++order) {
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        const int c = order - a - b;
        const double coeff =
            f.derivative(a, b, c, r) / (factorial[a] * factorial[b] * factorial[c]);
        magnitude[order] = std::max(magnitude[order], std::abs(coeff));
      }
    }
  }
  const double scale = *std::max_element(magnitude.begin(), magnitude.end());
  if (scale == 0.0) return kMultipoleCap;
  for (int order = 1; order <= 4; ++order)
    if (magnitude[order] > 1e-9 * scale) return order;
  return kMultipoleCap;
}

// --- guide lines -----------------------------------------------------------

TransverseConfinement transverse_confinement(const Field& f, const Generator& g,
                                             const Point2& p) {
  const double v = g.value(p.x, p.y);
  const Vec2 grad = g.gradient(p.x, p.y);
  const double gn = norm(grad);
  if (!(std::abs(v) < kNullTol))
    throw PreconditionError("point is not on the null set (|P| = " + std::to_string(std::abs(v)) +
                            ")");
  if (!(gn > kRegularGradTol))
    throw PreconditionError("point is a node; guide-line confinement is undefined there");

  const Vec3 n{grad[0] / gn, grad[1] / gn, 0.0};
  const Vec3 ez{0.0, 0.0, 1.0};
  const SymMat3 hu = pseudopotential_hessian(f, {p.x, p.y, 0.0});
  const SymMat2 plane{dot(n, hu * n), dot(n, hu * ez), dot(ez, hu * ez)};
  const Vec2 ev = plane.eigenvalues();
  const Vec2 v0 = plane.eigenvector(ev[0]);
  // The eigenvector with the larger normal component belongs to lambda_n.
  if (std::abs(v0[0]) >= std::abs(v0[1])) return {ev[0], ev[1]};
  return {ev[1], ev[0]};
}

std::optional<Point2> project_to_null(const Generator& g, Point2 p) {
  for (int iter = 0; iter < 100; ++iter) {
    const double v = g.value(p.x, p.y);
    if (std::abs(v) < 1e-13) return p;
    const Vec2 grad = g.gradient(p.x, p.y);
    const double g2 = grad[0] * grad[0] + grad[1] * grad[1];
    if (g2 == 0.0) return std::nullopt;
    p = {p.x - v * grad[0] / g2, p.y - v * grad[1] / g2};
  }
  if (std::abs(g.value(p.x, p.y)) < 1e-10) return p;
  return std::nullopt;
}

double threshold_scan(const GeneratorSpec& family, const std::string& param, const Point2& p,
                      double lo, double hi) {
  if (!family.params.contains(param))
    throw SpecError("threshold_scan: spec has no parameter '" + param + "'");
  if (!(lo < hi)) throw SpecError("threshold_scan: empty parameter range");
  auto det_at = [&](double value) {
    GeneratorSpec spec = family;
    spec.params[param] = value;
    return quadratic_part(compile(spec), p).q2.det();
  };
  double dlo = det_at(lo);
  double dhi = det_at(hi);
  if ((dlo == 0.0) != (dhi == 0.0)) return dlo == 0.0 ? lo : hi;
  if (dlo == 0.0 || std::signbit(dlo) == std::signbit(dhi))
    throw PreconditionError("no classification change for '" + param + "' in range");
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double dmid = det_at(mid);
    if (dmid == 0.0) return mid;
    if (std::signbit(dmid) == std::signbit(dlo)) {
      lo = mid;
      dlo = dmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rftrap
