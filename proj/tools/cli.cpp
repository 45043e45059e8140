#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "rftrap/analysis.hpp"
#include "rftrap/errors.hpp"
#include "rftrap/extension.hpp"
#include "rftrap/generator.hpp"
#include "rftrap/verify.hpp"

namespace rftrap::cli {

namespace {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string spec;
  std::vector<std::string> params;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  std::string window;
  std::string res;
  std::string format;  // empty: csv for sample, json elsewhere

  std::optional<double> charge;
  std::optional<double> mass;
  std::optional<double> omega;
  bool normalized = false;

  // sample
  std::string quantity = "upp";
  double z = 0.0;
  int threads = 0;

  // analyze
  std::string point;
  std::string scan;

  // verify
  std::size_t samples = 200;
  double h = kDefaultStep;

  // catalog
  std::string name;
};

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError(std::string("malformed number in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError(std::string(what) + " expects name=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    auto [name, value] = split_assignment(item, "--param");
    const auto v = parse_list(value, "--param");
    if (v.size() != 1) throw UsageError("--param " + name + " expects a single number");
    out[name] = v[0];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

/// A spec argument is a path to a generator file, or "builtin:NAME".
GeneratorSpec load_spec(const Options& o) {
  if (o.spec.empty()) throw UsageError("missing generator spec argument");
  const ParamMap overrides = parse_params(o.params);
  constexpr std::string_view prefix = "builtin:";
  if (o.spec.starts_with(prefix)) return catalog(o.spec.substr(prefix.size()), overrides);
  GeneratorSpec spec = parse_spec_json(read_file(o.spec));
  for (const auto& [k, v] : overrides) spec.params[k] = v;
  return spec;
}

TrapParams trap_params(const Options& o) {
  const bool any = o.charge || o.mass || o.omega;
  if (o.normalized || !any) return TrapParams::normalized();
  if (!(o.charge && o.mass && o.omega))
    throw UsageError("--charge, --mass and --omega must be given together");
  return TrapParams::physical(*o.charge, *o.mass, *o.omega);
}

Window window2(const Options& o, Window fallback) {
  if (o.window.empty()) return fallback;
  const auto v = parse_list(o.window, "--window");
  if (v.size() != 4 && v.size() != 6) throw UsageError("--window expects 4 or 6 numbers");
  Window w{v[0], v[1], v[2], v[3]};
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw UsageError("--window ranges must be increasing");
  return w;
}

int single_res(const Options& o, int fallback) {
  if (o.res.empty()) return fallback;
  const auto v = parse_list(o.res, "--res");
  if (v.size() != 1 || v[0] < 2 || v[0] != std::floor(v[0]) || v[0] > 1e5)
    throw UsageError("--res expects one integer >= 2");
  return static_cast<int>(v[0]);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + o.out + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("error writing '" + o.out + "'");
}

json vec_json(const Vec2& v) { return json::array({v[0], v[1]}); }

json multipole_json(int order) {
  if (order >= kMultipoleCap) return ">=5";
  return order;
}

json node_json(const NodeReport& r) {
  json j;
  j["point"] = json::array({r.location.x, r.location.y});
  j["kind"] = to_string(r.kind);
  j["crossing_angle"] = r.crossing_angle ? json(*r.crossing_angle) : json(nullptr);
  j["value"] = r.value;
  j["gradient"] = vec_json(r.gradient);
  j["q2"] = {{"xx", r.q2.xx}, {"xy", r.q2.xy}, {"yy", r.q2.yy}};
  j["eigenvalues"] = vec_json(r.eigenvalues);
  j["multipole_order"] = multipole_json(r.multipole_order);
  return j;
}

// --- subcommands -----------------------------------------------------------

enum class Quantity { phi, upp, grad_norm, p };

Quantity parse_quantity(const std::string& q) {
  if (q == "phi") return Quantity::phi;
  if (q == "upp") return Quantity::upp;
  if (q == "grad_norm") return Quantity::grad_norm;
  if (q == "p") return Quantity::p;
  throw UsageError("unknown quantity '" + q + "' (phi|upp|grad_norm|p)");
}

int cmd_sample(const Options& o, std::ostream& out) {
  const GeneratorSpec spec = load_spec(o);
  const Generator g = compile(spec);
  const Field field = extend(g, trap_params(o));
  const Quantity quantity = parse_quantity(o.quantity);
  const std::string format = o.format.empty() ? "csv" : o.format;

  std::vector<double> w = {-2.0, 2.0, -2.0, 2.0};
  if (!o.window.empty()) w = parse_list(o.window, "--window");
  if (w.size() != 4 && w.size() != 6) throw UsageError("--window expects 4 or 6 numbers");
  const bool volume = w.size() == 6;
  if (volume && quantity == Quantity::p) throw UsageError("quantity p is planar; use a 4-number window");
  for (std::size_t a = 0; a < w.size(); a += 2)
    if (!(w[a + 1] > w[a])) throw UsageError("--window ranges must be increasing");

  const std::size_t dims = volume ? 3 : 2;
  std::vector<double> counts = {101.0};
  if (!o.res.empty()) counts = parse_list(o.res, "--res");
  if (counts.size() == 1) counts.assign(dims, counts[0]);
  if (counts.size() != dims) throw UsageError("--res expects 1 or " + std::to_string(dims) + " counts");
  std::vector<std::size_t> n(dims);
  for (std::size_t a = 0; a < dims; ++a) {
    if (counts[a] < 2 || counts[a] != std::floor(counts[a]) || counts[a] > 1e5)
      throw UsageError("--res counts must be integers >= 2");
    n[a] = static_cast<std::size_t>(counts[a]);
  }

  auto coord = [&](std::size_t axis, std::size_t i) {
    return w[2 * axis] + (w[2 * axis + 1] - w[2 * axis]) * static_cast<double>(i) /
                             static_cast<double>(n[axis] - 1);
  };
  const std::size_t nz = volume ? n[2] : 1;
  const std::size_t total = n[0] * n[1] * nz;

  // Row-major: x slowest, last axis fastest.
  auto point_of = [&](std::size_t idx) -> Vec3 {
    const std::size_t k = idx % nz;
    const std::size_t j = (idx / nz) % n[1];
    const std::size_t i = idx / (nz * n[1]);
    return {coord(0, i), coord(1, j), volume ? coord(2, k) : o.z};
  };
  auto value_at = [&](const Vec3& r) {
    switch (quantity) {
      case Quantity::phi: return field.value(r);
      case Quantity::upp: return pseudopotential(field, r);
      case Quantity::grad_norm: return norm(field.gradient(r));
      case Quantity::p: return g.value(r[0], r[1]);
    }
    return 0.0;
  };

  std::vector<double> values(total);
  unsigned workers = o.threads > 0 ? static_cast<unsigned>(o.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, total / 1024)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t idx = t; idx < total; idx += workers) values[idx] = value_at(point_of(idx));
      });
    }
  }

  std::string text;
  if (format == "csv") {
    text = volume ? "x,y,z,value\n" : "x,y,value\n";
    text.reserve(total * 64);
    for (std::size_t idx = 0; idx < total; ++idx) {
      const Vec3 r = point_of(idx);
      text += fmt(r[0]) + ',' + fmt(r[1]) + ',';
      if (volume) text += fmt(r[2]) + ',';
      text += fmt(values[idx]) + '\n';
    }
  } else if (format == "json") {
    json j;
    j["quantity"] = o.quantity;
    j["window"] = w;
    j["shape"] = n;
    if (!volume) j["z"] = o.z;
    j["order"] = "row-major, x slowest";
    j["kappa"] = field.params().kappa();
    j["values"] = values;
    text = j.dump() + "\n";
  } else {
    throw UsageError("unknown format '" + format + "' (csv|json)");
  }
  emit(o, text, out);
  return kOk;
}

int cmd_nulllines(const Options& o, std::ostream& out) {
  const Generator g = compile(load_spec(o));
  const Window w = window2(o, {-2.0, 2.0, -2.0, 2.0});
  const int res = single_res(o, 200);
  const std::string format = o.format.empty() ? "json" : o.format;
  const auto lines = null_lines(g, w, res);

  std::string text;
  if (format == "csv") {
    text = "line,x,y\n";
    for (std::size_t l = 0; l < lines.size(); ++l)
      for (const Point2& p : lines[l].points)
        text += std::to_string(l) + ',' + fmt(p.x) + ',' + fmt(p.y) + '\n';
  } else if (format == "json") {
    json j;
    j["window"] = json::array({w.x0, w.x1, w.y0, w.y1});
    j["resolution"] = res;
    j["polylines"] = json::array();
    for (const Polyline& line : lines) {
      json pts = json::array();
      for (const Point2& p : line.points) pts.push_back(json::array({p.x, p.y}));
      j["polylines"].push_back({{"closed", line.closed}, {"points", std::move(pts)}});
    }
    text = j.dump() + "\n";
  } else {
    throw UsageError("unknown format '" + format + "' (csv|json)");
  }
  emit(o, text, out);
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const GeneratorSpec spec = load_spec(o);
  const Generator g = compile(spec);
  json j;

  if (!o.point.empty()) {
    const auto pv = parse_list(o.point, "--point");
    if (pv.size() != 2) throw UsageError("--point expects x,y");
    const Point2 p{pv[0], pv[1]};
    const double value = g.value(p.x, p.y);
    const double gn = norm(g.gradient(p.x, p.y));
    if (std::abs(value) < kNullTol && gn < kNodeGradTol) {
      j = node_json(classify_node(g, p));
    } else if (std::abs(value) < kNullTol && gn > kRegularGradTol) {
      const Field field = extend(g, trap_params(o));
      const auto c = transverse_confinement(field, g, p);
      j["point"] = json::array({p.x, p.y});
      j["kind"] = "guide";
      j["lambda_n"] = c.lambda_n;
      j["lambda_z"] = c.lambda_z;
      j["expected"] = 2.0 * field.params().kappa() * gn * gn;
    } else {
      throw PreconditionError("point (" + fmt(p.x) + ", " + fmt(p.y) +
                              ") is neither a node nor a regular guide-line point: |P| = " +
                              fmt(std::abs(value)) + ", |grad P| = " + fmt(gn));
    }
    if (!o.scan.empty()) {
      auto [name, range] = split_assignment(o.scan, "--scan");
      const auto r = parse_list(range, "--scan");
      if (r.size() != 2) throw UsageError("--scan expects name=lo,hi");
      j["scan"] = {{"param", name}, {"range", r},
                   {"transition", threshold_scan(spec, name, p, r[0], r[1])}};
    }
  } else {
    const Window w = window2(o, {-2.0, 2.0, -2.0, 2.0});
    const int res = single_res(o, 40);
    const auto crit = critical_points(g, w, res);
    j["window"] = json::array({w.x0, w.x1, w.y0, w.y1});
    j["critical_points"] = json::array();
    j["nodes"] = json::array();
    for (const CriticalPoint& c : crit) {
      j["critical_points"].push_back({{"point", json::array({c.location.x, c.location.y})},
                                      {"value", c.value},
                                      {"grad_norm", c.grad_norm},
                                      {"is_node", c.is_node}});
      if (c.is_node) j["nodes"].push_back(node_json(classify_node(g, c.location)));
    }
  }
  emit(o, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Generator g = compile(load_spec(o));
  const Field field = extend(g, trap_params(o));
  VerifyOptions vo;
  vo.samples = o.samples;
  vo.seed = o.seed;
  vo.h = o.h;
  if (!(vo.h > 0.0)) throw UsageError("--step must be positive");
  if (!o.window.empty()) {
    const auto v = parse_list(o.window, "--window");
    if (v.size() != 6) throw UsageError("verify --window expects x0,x1,y0,y1,z0,z1");
    vo.box = {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  const VerifyReport r = verify_field(field, g, vo);
  json j;
  j["max_gradient_error"] = r.max_gradient_error;
  j["max_laplace_residual"] = r.max_laplace_residual;
  j["max_plane_value"] = r.max_plane_value;
  j["max_normal_error"] = r.max_normal_error;
  j["max_normal_error_fd"] = r.max_normal_error_fd;
  j["samples"] = r.samples;
  j["seed"] = vo.seed;
  j["h"] = vo.h;
  j["tolerances"] = {{"gradient", vo.tolerances.gradient},
                     {"laplace", vo.tolerances.laplace},
                     {"plane_value", vo.tolerances.plane_value},
                     {"normal_analytic", vo.tolerances.normal_analytic},
                     {"normal_fd", vo.tolerances.normal_fd}};
  j["pass"] = r.pass;
  emit(o, j.dump(2) + "\n", out);
  return r.pass ? kOk : kVerifyFailed;
}

int cmd_catalog(const Options& o, std::ostream& out) {
  std::string text;
  if (!o.name.empty()) {
    text = spec_to_json(catalog(o.name, parse_params(o.params))) + "\n";
  } else {
    json list = json::array();
    for (const CatalogEntry& e : catalog_entries()) {
      json entry = json::parse(spec_to_json(e.spec));
      list.push_back({{"name", e.name}, {"description", e.description}, {"kind", entry["kind"]},
                      {"expr", entry["expr"]}, {"params", entry["params"]}});
      if (entry.contains("periods")) list.back()["periods"] = entry["periods"];
    }
    text = list.dump(2) + "\n";
  }
  emit(o, text, out);
  return kOk;
}

void add_common(CLI::App* sub, Options& o, bool with_spec) {
  if (with_spec)
    sub->add_option("spec", o.spec, "generator file, or builtin:NAME")->required();
  sub->add_option("--param", o.params, "bind a parameter, name=value (repeatable)");
  sub->add_option("--out", o.out, "write output to PATH instead of stdout");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--window", o.window, "x0,x1,y0,y1[,z0,z1]");
  sub->add_option("--res", o.res, "resolution N[,N,N]");
  sub->add_option("--format", o.format, "csv|json");
  sub->add_option("--charge", o.charge, "particle charge [C]");
  sub->add_option("--mass", o.mass, "particle mass [kg]");
  sub->add_option("--omega", o.omega, "RF angular frequency [rad/s]");
  sub->add_flag("--normalized", o.normalized, "use kappa = 1 (default)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"rftrap: harmonic RF potentials from planar generating functions"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "sample phi, U_PP, |grad phi| or P on a grid");
  add_common(sample, o, true);
  sample->add_option("--quantity", o.quantity, "phi|upp|grad_norm|p");
  sample->add_option("--z", o.z, "plane height for 4-number windows");
  sample->add_option("--threads", o.threads, "worker threads (0 = all cores)");

  auto* nulllines = app.add_subcommand("nulllines", "extract the null lines P = 0");
  add_common(nulllines, o, true);

  auto* analyze = app.add_subcommand("analyze", "classify nodes or guide-line points");
  add_common(analyze, o, true);
  analyze->add_option("--point", o.point, "x,y");
  analyze->add_option("--scan", o.scan, "name=lo,hi connectivity threshold scan at --point");

  auto* verify = app.add_subcommand("verify", "finite-difference verification of the field");
  add_common(verify, o, true);
  verify->add_option("--samples", o.samples, "number of random sample points");
  verify->add_option("--step", o.h, "finite-difference step");

  auto* catalog_cmd = app.add_subcommand("catalog", "list built-in generators, or print one spec");
  add_common(catalog_cmd, o, false);
  catalog_cmd->add_option("name", o.name, "entry to print as a generator file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "rftrap: " << e.what() << "\n";
    return kSpecError;
  }

  try {
    if (sample->parsed()) return cmd_sample(o, out);
    if (nulllines->parsed()) return cmd_nulllines(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (catalog_cmd->parsed()) return cmd_catalog(o, out);
  } catch (const IoError& e) {
    err << "rftrap: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const PreconditionError& e) {
    err << "rftrap: " << e.what() << "\n";
    return kPrecondition;
  } catch (const SpecError& e) {
    err << "rftrap: spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const UsageError& e) {
    err << "rftrap: " << e.what() << "\n";
    return kSpecError;
  } catch (const std::invalid_argument& e) {
    err << "rftrap: " << e.what() << "\n";
    return kSpecError;
  }
  return kSpecError;
}

}  // namespace rftrap::cli
