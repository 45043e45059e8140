#pragma once

// Planar generating functions P(x,y): sparse polynomials and periodic
// trig-polynomials, the textual spec that produces them, and the built-in
// catalog.

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rftrap/algebra.hpp"
#include "rftrap/expression.hpp"
#include "rftrap/linalg.hpp"

namespace rftrap {

/// Relative tolerance when snapping a wave vector onto the period lattice.
inline constexpr double kCommensurabilityTol = 1e-9;

struct ModeIndex {
  int m = 0;
  int n = 0;
  auto operator<=>(const ModeIndex&) const = default;
};

/// One complex exponential  amp * exp[i(k_x x + k_y y)],  k_x = 2 pi m / L_x,
/// k_y = 2 pi n / L_y.
struct FourierMode {
  int m = 0;
  int n = 0;
  std::complex<double> amp;
};

/// Real cosine/sine form of a Hermitian pair (m,n),(-m,-n):
///   cos_amp * cos(k.r) + sin_amp * sin(k.r).
/// The constant mode appears once with cos_amp = p00.
struct RealMode {
  int m = 0;
  int n = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Periodic generator as a Hermitian set of Fourier modes.
///
/// Construction symmetrizes the input so that the amplitude of (-m,-n) is the
/// conjugate of (m,n) and p00 is real; zero amplitudes are dropped.
class FourierGen {
 public:
  using ModeMap = std::map<ModeIndex, std::complex<double>>;

  FourierGen(double lx, double ly, ModeMap modes);

  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double kx(int m) const noexcept;
  double ky(int n) const noexcept;

  const ModeMap& modes() const noexcept { return modes_; }
  std::vector<FourierMode> mode_list() const;
  std::complex<double> amplitude(int m, int n) const;
  double p00() const { return amplitude(0, 0).real(); }

  /// Canonical half-plane (m > 0, or m == 0 and n >= 0), sorted by index.
  std::vector<RealMode> real_modes() const;

 private:
  double lx_;
  double ly_;
  ModeMap modes_;
};

double eval_fourier(const FourierGen& g, double x, double y);
/// Complex-arithmetic evaluation; the imaginary part vanishes by Hermitian symmetry.
std::complex<double> eval_fourier_complex(const FourierGen& g, double x, double y);

Poly2 parse_polynomial(std::string_view expr, const ParamMap& params = {});
FourierGen parse_fourier(std::string_view expr, std::array<double, 2> periods,
                         const ParamMap& params = {});

enum class GeneratorKind { polynomial, fourier };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::polynomial;
  std::string expr;
  ParamMap params;
  std::optional<std::array<double, 2>> periods;  // fourier only
};

/// Reads the generator file format
///   { "kind": "polynomial"|"fourier", "expr": "...", "params": {...}, "periods": [Lx, Ly] }
/// Throws SpecError on malformed JSON or missing / mistyped fields.
GeneratorSpec parse_spec_json(std::string_view text);
std::string spec_to_json(const GeneratorSpec& spec);

struct CatalogEntry {
  std::string name;
  std::string description;
  GeneratorSpec spec;  // with default parameter values bound
};

const std::vector<CatalogEntry>& catalog_entries();

/// Built-in generator by name (linear, cusp, round, cross). Overrides must name
/// parameters the entry declares.
GeneratorSpec catalog(std::string_view name, const ParamMap& overrides = {});

/// Compiled generator: P and its analytic first and second derivatives.
class Generator {
 public:
  explicit Generator(Poly2 p);
  explicit Generator(FourierGen g);

  bool is_polynomial() const noexcept { return std::holds_alternative<Poly2>(repr_); }
  const Poly2& polynomial() const { return std::get<Poly2>(repr_); }
  const FourierGen& fourier() const { return std::get<FourierGen>(repr_); }

  double value(double x, double y) const;
  Vec2 gradient(double x, double y) const;
  SymMat2 hessian(double x, double y) const;

 private:
  std::variant<Poly2, FourierGen> repr_;
  // Derivative polynomials, polynomial case only.
  Poly2 px_, py_, pxx_, pxy_, pyy_;
};

Generator compile(const GeneratorSpec& spec);

}  // namespace rftrap
