#pragma once

#include "nlreg/config.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlreg {

/// Point in R^N for N <= 2; the second coordinate is ignored when N = 1.
using Point = std::array<double, 2>;

enum class Family { fractional, radial, cone, custom, asymmetric_pair };
enum class ProfileKind { constant, one_minus_sin_log, power, tabulated };
enum class CustomKind { tabulated, indicator_ball, oscillating_power };
enum class KernelMode { translation_invariant, symmetrized, x_modulated };

/// Positive samples on increasing radii, interpolated linearly in log-log coordinates.
struct LogLogTable {
  std::vector<double> radii;
  std::vector<double> values;

  /// Throws ExtrapolationError outside [radii.front(), radii.back()].
  double operator()(double r) const;
  /// Derivative of the interpolant (one-sided at nodes).
  double derivative(double r) const;
  void validate(const std::string& field) const;
};

/// The radial profile l; zero beyond `cutoff`.
struct LFunction {
  ProfileKind kind = ProfileKind::constant;
  double cutoff = 1.0;
  double level = 1.0;     // constant kind
  double exponent = 0.0;  // power kind: l(r) = r^{-exponent}
  LogLogTable table;      // tabulated kind

  double operator()(double r) const;
  double derivative(double r) const;
  /// sup of l over (0, cutoff], +inf when unbounded near 0.
  double sup() const;
};

/// Arc of the unit circle [lo, hi] in radians.
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
};

/// One half-line of an asymmetric pair: coef * |h|^{-1-order}.
struct PowerSide {
  double coef = 1.0;
  double order = 0.5;
};

struct CustomDensity {
  CustomKind kind = CustomKind::indicator_ball;
  double radius = 1.0;  // indicator_ball
  double height = 1.0;  // indicator_ball
  LogLogTable table;    // tabulated radial density j(z) = table(|z|)
};

struct KernelSpec {
  Family family = Family::fractional;
  int dim = 1;
  double lambda = 1.0;
  std::optional<double> gamma_hint;

  double s = 0.25;          // fractional: j(z) = |z|^{-N-2s}
  LFunction ell;            // radial, cone
  std::vector<Arc> arcs;    // cone (N = 2)
  CustomDensity custom;     // custom
  PowerSide plus, minus;    // asymmetric_pair (N = 1)

  void validate() const;
  /// j(-z) = j(z) for all z.
  bool is_even() const;
  std::string describe() const;
};

/// K(x,y) built from a density. x_modulated uses w(x) = 1 + delta*sin(omega*x_1).
struct TwoPointKernel {
  KernelSpec base;
  KernelMode mode = KernelMode::translation_invariant;
  double weight_delta = 0.0;
  double weight_omega = 1.0;

  double operator()(const Point& x, const Point& y) const;
  double weight(double x) const;
  void validate() const;
  bool is_symmetric() const;
  bool is_translation_invariant() const;
};

double eval_density(const KernelSpec& spec, const Point& z);
/// N = 1 shorthand for eval_density(spec, {h, 0}).
double eval_density(const KernelSpec& spec, double h);

/// Density used as the comparability reference in (K): the even part for
/// asymmetric pairs, j itself otherwise.
double reference_density(const KernelSpec& spec, const Point& z);

struct SymAntisym {
  double sym = 0.0;
  double anti = 0.0;
};
SymAntisym decompose(const TwoPointKernel& K, const Point& x, const Point& y);

/// Largest relative violation of L^{-1} j_ref(y-x) <= K(x,y) <= L j_ref(y-x) over
/// `samples` pseudo-random pairs; 0 means the sampled check passed.
double comparability_violation(const TwoPointKernel& K, int samples, std::uint64_t seed);

KernelSpec build_kernel(const Config& cfg, const std::string& section = "kernel");
TwoPointKernel build_two_point(const Config& cfg, const std::string& section = "kernel");
void write_kernel(const KernelSpec& spec, Config& cfg, const std::string& section = "kernel");
void write_two_point(const TwoPointKernel& K, Config& cfg, const std::string& section = "kernel");

std::string family_name(Family f);
std::string mode_name(KernelMode m);

// ---- radial reductions used by the integrators ----

/// Surface measure of S^{N-1}: 2 for N = 1, 2*pi for N = 2.
double sphere_measure(int dim);
/// Measure of the set of directions where j may be nonzero.
double angular_measure(const KernelSpec& spec);
/// Number of boundary points of the arc set (H_0 of its boundary).
int arc_boundary_count(const KernelSpec& spec);

/// q(rho) = rho^{N-1} * integral of j(rho*theta) over the unit sphere, so that
/// the integral of j over an annulus equals the integral of q over (r, R).
double radial_mass(const KernelSpec& spec, double rho);

/// coef * rho^exponent
struct PowerLaw {
  double coef = 0.0;
  double exponent = 0.0;
  double operator()(double rho) const;
};

/// Optional power bounds on q near 0 (rho <= near_radius) and at infinity
/// (rho >= far_radius), the support radius, and the smallest radius at which
/// the density can still be resolved by panel quadrature.
struct MassEnvelope {
  std::optional<PowerLaw> lower0, upper0;
  double near_radius = 0.0;
  std::optional<PowerLaw> lower_inf, upper_inf;
  double far_radius = 0.0;
  double support = 0.0;  // +inf when unbounded
  double floor = 0.0;
};
MassEnvelope mass_envelope(const KernelSpec& spec);

/// Radii where q may jump (cutoffs, table ends, indicator radius).
std::vector<double> mass_breaks(const KernelSpec& spec);

/// Radial profile along one ray: for N = 1, side = +1/-1 selects the half-line;
/// for N = 2 the value inside the support of the angular factor.
double ray_profile(const KernelSpec& spec, int side, double rho);
/// Derivative in rho of ray_profile; nullopt for tabulated data.
std::optional<double> ray_derivative(const KernelSpec& spec, int side, double rho);

/// Integrand of (K_as) for translation-invariant N = 1 kernels, summed over both
/// half-lines: (j(rho)-j(-rho))^2 / (j(rho)+j(-rho)).
double antisym_ratio(const KernelSpec& spec, double rho);

}  // namespace nlreg
