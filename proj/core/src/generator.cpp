#include "rftrap/generator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "rftrap/errors.hpp"

namespace rftrap {

using cplx = std::complex<double>;

// --- FourierGen ------------------------------------------------------------

FourierGen::FourierGen(double lx, double ly, ModeMap modes) : lx_(lx), ly_(ly) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw SpecError("Fourier periods must be positive and finite");
  for (const auto& [k, a] : modes) {
    const ModeIndex neg{-k.m, -k.n};
    if (modes_.contains(k) || modes_.contains(neg)) continue;
    auto it = modes.find(neg);
    const cplx partner = it == modes.end() ? cplx{} : std::conj(it->second);
    cplx amp = 0.5 * (a + partner);
    if (k == neg) amp = cplx(amp.real(), 0.0);
    if (amp == cplx{}) continue;
    modes_.emplace(k, amp);
    if (!(k == neg)) modes_.emplace(neg, std::conj(amp));
  }
}

double FourierGen::kx(int m) const noexcept { return 2.0 * std::numbers::pi * m / lx_; }
double FourierGen::ky(int n) const noexcept { return 2.0 * std::numbers::pi * n / ly_; }

std::vector<FourierMode> FourierGen::mode_list() const {
  std::vector<FourierMode> out;
  out.reserve(modes_.size());
  for (const auto& [k, a] : modes_) out.push_back({k.m, k.n, a});
  return out;
}

cplx FourierGen::amplitude(int m, int n) const {
  auto it = modes_.find({m, n});
  return it == modes_.end() ? cplx{} : it->second;
}

std::vector<RealMode> FourierGen::real_modes() const {
  std::vector<RealMode> out;
  for (const auto& [k, a] : modes_) {
    if (k.m < 0 || (k.m == 0 && k.n < 0)) continue;
    if (k.m == 0 && k.n == 0) {
      out.push_back({0, 0, a.real(), 0.0});
    } else {
      // a e^{i t} + conj(a) e^{-i t} = 2 Re(a) cos t - 2 Im(a) sin t
      out.push_back({k.m, k.n, 2.0 * a.real(), -2.0 * a.imag()});
    }
  }
  return out;
}

cplx eval_fourier_complex(const FourierGen& g, double x, double y) {
  cplx sum{};
  for (const auto& [k, a] : g.modes()) {
    const double phase = g.kx(k.m) * x + g.ky(k.n) * y;
    sum += a * cplx(std::cos(phase), std::sin(phase));
  }
  return sum;
}

double eval_fourier(const FourierGen& g, double x, double y) {
  // Sum Hermitian pairs as real cosines/sines.
  double sum = 0.0;
  for (const RealMode& r : g.real_modes()) {
    const double phase = g.kx(r.m) * x + g.ky(r.n) * y;
    sum += r.cos_amp * std::cos(phase);
    if (r.sin_amp != 0.0) sum += r.sin_amp * std::sin(phase);
  }
  return sum;
}

// --- interpreters ----------------------------------------------------------

namespace {

double lookup(const Expr& e, const ParamMap& params) {
  auto it = params.find(e.name);
  if (it == params.end()) throw ParseError("unbound parameter '" + e.name + "'", e.position);
  return it->second;
}

Poly2 to_poly(const Expr& e, const ParamMap& params) {
  auto sub = [&](const ExprPtr& p) { return to_poly(*p, params); };
  switch (e.kind) {
    case Expr::Kind::number: return Poly2::constant(e.number);
    case Expr::Kind::param: return Poly2::constant(lookup(e, params));
    case Expr::Kind::var_x: return Poly2::x();
    case Expr::Kind::var_y: return Poly2::y();
    case Expr::Kind::pi: return Poly2::constant(std::numbers::pi);
    case Expr::Kind::add: return sub(e.lhs) + sub(e.rhs);
    case Expr::Kind::sub: return sub(e.lhs) - sub(e.rhs);
    case Expr::Kind::mul: return sub(e.lhs) * sub(e.rhs);
    case Expr::Kind::div: {
      const Poly2 divisor = sub(e.rhs);
      if (divisor.degree() > 0) throw ParseError("division by a non-constant", e.position);
      const double d = divisor.coeff(0, 0);
      if (d == 0.0) throw ParseError("division by zero", e.position);
      return sub(e.lhs) * (1.0 / d);
    }
    case Expr::Kind::pow: return pow(sub(e.lhs), e.exponent);
    case Expr::Kind::neg: return -sub(e.lhs);
    case Expr::Kind::cos:
    case Expr::Kind::sin:
      throw ParseError("trigonometric function in polynomial expression", e.position);
  }
  return {};
}

using TrigPoly = FourierGen::ModeMap;

void add_mode(TrigPoly& t, ModeIndex k, cplx a) {
  if (a == cplx{}) return;
  auto [it, inserted] = t.try_emplace(k, a);
  if (!inserted) {
    it->second += a;
    if (it->second == cplx{}) t.erase(it);
  }
}

TrigPoly trig_constant(double c) {
  TrigPoly t;
  add_mode(t, {0, 0}, c);
  return t;
}

TrigPoly trig_add(TrigPoly a, const TrigPoly& b, double sign) {
  for (const auto& [k, v] : b) add_mode(a, k, sign * v);
  return a;
}

TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) add_mode(out, {ka.m + kb.m, ka.n + kb.n}, va * vb);
  return out;
}

TrigPoly trig_scale(TrigPoly a, cplx s) {
  if (s == cplx{}) return {};
  for (auto& [k, v] : a) v *= s;
  std::erase_if(a, [](const auto& kv) { return kv.second == cplx{}; });
  return a;
}

class FourierInterpreter {
 public:
  FourierInterpreter(const ParamMap& params, double lx, double ly)
      : params_(params), lx_(lx), ly_(ly) {}

  TrigPoly operator()(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::number: return trig_constant(e.number);
      case Expr::Kind::param: return trig_constant(lookup(e, params_));
      case Expr::Kind::pi: return trig_constant(std::numbers::pi);
      case Expr::Kind::var_x:
      case Expr::Kind::var_y:
        throw ParseError("polynomial term outside a trigonometric argument", e.position);
      case Expr::Kind::add: return trig_add((*this)(*e.lhs), (*this)(*e.rhs), 1.0);
      case Expr::Kind::sub: return trig_add((*this)(*e.lhs), (*this)(*e.rhs), -1.0);
      case Expr::Kind::mul: return trig_mul((*this)(*e.lhs), (*this)(*e.rhs));
      case Expr::Kind::div: {
        const TrigPoly divisor = (*this)(*e.rhs);
        if (divisor.size() > 1 || (divisor.size() == 1 && !divisor.contains({0, 0})))
          throw ParseError("division by a non-constant", e.position);
        if (divisor.empty()) throw ParseError("division by zero", e.position);
        return trig_scale((*this)(*e.lhs), 1.0 / divisor.begin()->second);
      }
      case Expr::Kind::pow: {
        TrigPoly result = trig_constant(1.0);
        const TrigPoly b = (*this)(*e.lhs);
        for (unsigned k = 0; k < e.exponent; ++k) result = trig_mul(result, b);
        return result;
      }
      case Expr::Kind::neg: return trig_scale((*this)(*e.lhs), -1.0);
      case Expr::Kind::cos:
      case Expr::Kind::sin: return trig(e);
    }
    return {};
  }

 private:
  int snap(double k, double period, char axis, std::size_t pos) const {
    const double unit = 2.0 * std::numbers::pi / period;
    const double idx = std::round(k / unit);
    if (std::abs(k - idx * unit) > kCommensurabilityTol * std::max(std::abs(k), unit)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "mode k_%c=%.17g incommensurate with 2*pi/L_%c=%.17g", axis,
                    k, axis, unit);
      throw ParseError(buf, pos);
    }
    if (std::abs(idx) > 1e6) throw ParseError("mode index too large", pos);
    return static_cast<int>(idx);
  }

  TrigPoly trig(const Expr& e) const {
    const Poly2 arg = to_poly(*e.lhs, params_);
    if (arg.degree() > 1)
      throw ParseError("trigonometric argument must be linear in x and y", e.lhs->position);
    const int m = snap(arg.coeff(1, 0), lx_, 'x', e.position);
    const int n = snap(arg.coeff(0, 1), ly_, 'y', e.position);
    const cplx phase = std::polar(1.0, arg.coeff(0, 0));
    TrigPoly t;
    if (e.kind == Expr::Kind::cos) {
      add_mode(t, {m, n}, 0.5 * phase);
      add_mode(t, {-m, -n}, 0.5 * std::conj(phase));
    } else {
      const cplx two_i{0.0, 2.0};
      add_mode(t, {m, n}, phase / two_i);
      add_mode(t, {-m, -n}, -std::conj(phase) / two_i);
    }
    return t;
  }

  const ParamMap& params_;
  double lx_;
  double ly_;
};

}  // namespace

Poly2 parse_polynomial(std::string_view expr, const ParamMap& params) {
  return to_poly(*parse_expression(expr), params);
}

FourierGen parse_fourier(std::string_view expr, std::array<double, 2> periods,
                         const ParamMap& params) {
  if (!(periods[0] > 0.0) || !(periods[1] > 0.0))
    throw SpecError("Fourier periods must be positive");
  const ExprPtr tree = parse_expression(expr);
  FourierInterpreter interp(params, periods[0], periods[1]);
  return FourierGen(periods[0], periods[1], interp(*tree));
}

// --- spec files ------------------------------------------------------------

GeneratorSpec parse_spec_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed generator JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("generator spec must be a JSON object");

  GeneratorSpec spec;
  auto require_string = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string())
      throw SpecError(std::string("generator spec needs string field '") + key + "'");
    return j[key].get<std::string>();
  };
  const std::string kind = require_string("kind");
  if (kind == "polynomial") {
    spec.kind = GeneratorKind::polynomial;
  } else if (kind == "fourier") {
    spec.kind = GeneratorKind::fourier;
  } else {
    throw SpecError("unknown generator kind '" + kind + "'");
  }
  spec.expr = require_string("expr");

  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SpecError("'params' must be an object");
    for (const auto& [name, value] : j["params"].items()) {
      if (!value.is_number()) throw SpecError("parameter '" + name + "' must be a number");
      spec.params[name] = value.get<double>();
    }
  }
  if (j.contains("periods")) {
    const auto& p = j["periods"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw SpecError("'periods' must be [Lx, Ly]");
    spec.periods = std::array<double, 2>{p[0].get<double>(), p[1].get<double>()};
  }
  if (spec.kind == GeneratorKind::fourier && !spec.periods)
    throw SpecError("fourier generator needs 'periods'");
  if (spec.kind == GeneratorKind::polynomial && spec.periods)
    throw SpecError("'periods' only applies to fourier generators");
  return spec;
}

std::string spec_to_json(const GeneratorSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = spec.kind == GeneratorKind::polynomial ? "polynomial" : "fourier";
  j["expr"] = spec.expr;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : spec.params) j["params"][k] = v;
  if (spec.periods) j["periods"] = {(*spec.periods)[0], (*spec.periods)[1]};
  return j.dump(2);
}

// --- catalog ---------------------------------------------------------------

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"linear", "four-wire linear guide, null line x = 0",
       {GeneratorKind::polynomial, "x", {}, std::nullopt}},
      {"cusp", "cusp guide y^2 = alpha^2 x^3",
       {GeneratorKind::polynomial, "y^2 - alpha^2*x^3", {{"alpha", 1.0}}, std::nullopt}},
      {"round", "rounded-square lattice with crossings at edge midpoints",
       {GeneratorKind::fourier, "cos(pi*x) + cos(pi*y) + c*((cos(pi*x) - cos(pi*y))^2 - 4)",
        {{"c", 0.25}}, std::array<double, 2>{2.0, 2.0}}},
      {"cross", "harmonic two-line crossing P = xy",
       {GeneratorKind::polynomial, "x*y", {}, std::nullopt}},
  };
  return entries;
}

GeneratorSpec catalog(std::string_view name, const ParamMap& overrides) {
  for (const auto& entry : catalog_entries()) {
    if (entry.name != name) continue;
    GeneratorSpec spec = entry.spec;
    for (const auto& [k, v] : overrides) {
      if (!spec.params.contains(k))
        throw SpecError("catalog entry '" + entry.name + "' has no parameter '" + k + "'");
      spec.params[k] = v;
    }
    return spec;
  }
  throw SpecError("unknown catalog entry '" + std::string(name) + "'");
}

// --- compiled generator ----------------------------------------------------

Generator::Generator(Poly2 p) : repr_(std::move(p)) {
  const Poly2& poly = std::get<Poly2>(repr_);
  px_ = diff(poly, Axis::x);
  py_ = diff(poly, Axis::y);
  pxx_ = diff(px_, Axis::x);
  pxy_ = diff(px_, Axis::y);
  pyy_ = diff(py_, Axis::y);
}

Generator::Generator(FourierGen g) : repr_(std::move(g)) {}

namespace {

// Real part of  sum_k amp (i kx)^a (i ky)^b exp(i k.r).
double fourier_derivative(const FourierGen& g, int a, int b, double x, double y) {
  double sum = 0.0;
  for (const auto& [k, amp] : g.modes()) {
    const double kx = g.kx(k.m);
    const double ky = g.ky(k.n);
    const double phase = kx * x + ky * y;
    cplx factor = amp;
    for (int i = 0; i < a; ++i) factor *= cplx(0.0, kx);
    for (int i = 0; i < b; ++i) factor *= cplx(0.0, ky);
    sum += (factor * cplx(std::cos(phase), std::sin(phase))).real();
  }
  return sum;
}

}  // namespace

double Generator::value(double x, double y) const {
  if (is_polynomial()) return eval(polynomial(), x, y);
  return eval_fourier(fourier(), x, y);
}

Vec2 Generator::gradient(double x, double y) const {
  if (is_polynomial()) return {eval(px_, x, y), eval(py_, x, y)};
  return {fourier_derivative(fourier(), 1, 0, x, y), fourier_derivative(fourier(), 0, 1, x, y)};
}

SymMat2 Generator::hessian(double x, double y) const {
  if (is_polynomial()) return {eval(pxx_, x, y), eval(pxy_, x, y), eval(pyy_, x, y)};
  const FourierGen& g = fourier();
  return {fourier_derivative(g, 2, 0, x, y), fourier_derivative(g, 1, 1, x, y),
          fourier_derivative(g, 0, 2, x, y)};
}

Generator compile(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::polynomial) return Generator(parse_polynomial(spec.expr, spec.params));
  if (!spec.periods) throw SpecError("fourier generator needs periods");
  return Generator(parse_fourier(spec.expr, *spec.periods, spec.params));
}

}  // namespace rftrap
