#pragma once

#include "nlreg/kernel.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nlreg {

struct QuadConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  long max_subdivisions = 1L << 20;
  /// Radius separating the shell-summation regimes near 0 and near infinity
  /// from direct panel integration.
  double split_radius = 1.0;

  void validate() const;
  QuadConfig tightened(double factor) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
  /// Set when refinement showed unbounded growth; value is then a lower bound.
  bool diverged = false;
  std::string note;

  IntegralResult& operator+=(const IntegralResult& o);
};
IntegralResult operator+(IntegralResult a, const IntegralResult& b);

/// Global adaptive 21-point Gauss-Kronrod on [a,b], splitting first at `breaks`.
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadConfig& cfg, const std::vector<double>& breaks = {});

/// A nonnegative radial function with optional power bounds used to certify
/// remainders near 0 and infinity.
struct RadialIntegrand {
  std::function<double(double)> g;
  std::optional<PowerLaw> lower0, upper0;
  double near_radius = 0.0;
  std::optional<PowerLaw> lower_inf, upper_inf;
  double far_radius = std::numeric_limits<double>::infinity();
  double support = std::numeric_limits<double>::infinity();
  double floor = 0.0;
  std::vector<double> breaks;
};

/// Integral of g over (a,b) with 0 <= a < b <= inf, computed in t = log(rho).
IntegralResult integrate_radial(const RadialIntegrand& f, double a, double b, const QuadConfig& cfg);

/// rho^w * q(rho) where q is the radial mass of the density.
RadialIntegrand mass_integrand(const KernelSpec& spec, double w = 0.0);
/// rho -> j(side*rho) for N = 1.
RadialIntegrand side_integrand(const KernelSpec& spec, int side);

/// L(r,R): integral of j over r <= |z| < R; R may be infinite.
IntegralResult annulus_integral(const KernelSpec& spec, double r, double R, const QuadConfig& cfg);
/// m(r): integral of |z| j(z) over B_r. Throws DivergenceError when it is infinite.
IntegralResult first_moment(const KernelSpec& spec, double r, const QuadConfig& cfg);
/// L(r) = m(r)/r + L(r, inf).
IntegralResult L_total(const KernelSpec& spec, double r, const QuadConfig& cfg);
/// Integral of j(side*tau) over tau > d (N = 1).
IntegralResult one_sided_tail(const KernelSpec& spec, int side, double d, const QuadConfig& cfg);

/// Bounded function on the line: either a constant, or piecewise-linear data on
/// nodes with a declared bound outside the node range.
struct BoundedFunction {
  std::optional<double> constant;
  std::vector<double> nodes;
  std::vector<double> values;
  std::optional<double> far_bound;

  static BoundedFunction constant_value(double c);
  static BoundedFunction table(std::vector<double> nodes, std::vector<double> values,
                               std::optional<double> far_bound);
  double operator()(double x) const;
  double sup_abs() const;
};

/// Integral of |g(y)| j(y - x) over |y - x| > rho. For tabulated g the part
/// outside the nodes is bounded by far_bound times the remaining tail mass.
double tail_integral(const BoundedFunction& g, const Point& x, double rho, const KernelSpec& spec,
                     const QuadConfig& cfg);

/// Total variation of j on the open annulus r < |z| < R. value = +inf with
/// diverged set when refinement shows unbounded variation. For tabulated data
/// the value is a finite-difference lower bound.
IntegralResult bv_estimate(const KernelSpec& spec, double r, double R, const QuadConfig& cfg);

}  // namespace nlreg
