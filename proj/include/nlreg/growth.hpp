#pragma once

#include "nlreg/conditions.hpp"
#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlreg {

/// The fixed bump beta(s) = 1/(1+s^2) and c_b = 2 max(sup|b|, sup|grad b|) for b(x) = beta(|x|).
struct Bump {
  double c_b = 2.0;
  double sup_b = 1.0;
  double sup_grad = 0.0;
  double operator()(double s) const { return 1.0 / (1.0 + s * s); }
};
Bump bump_constants();

enum class GrowthCase { doubling, bounded_variation };
std::string growth_case_name(GrowthCase c);

struct GrowthParams {
  double alpha = 0.0;
  double K0 = 0.0;
  double vartheta = 0.0;
  double eta = 0.0;
  double a = 0.0;
  double theta = 0.0;
  double d_a = 0.0;
  double c_b = 0.0;
  GrowthCase growth_case = GrowthCase::doubling;
  /// doubling case
  double c0 = 0.0, sigma = 0.0;
  /// bounded-variation case
  double M = 0.0, vartheta0 = 0.0;
  double lambda = 1.0;
  double R0 = 0.0;
  std::vector<double> radii;
  /// h(r) = h_factor * L(r)
  double h_factor = 0.0;
  /// (r, h(r)) with r decreasing
  std::vector<std::pair<double, double>> h_table;
};

/// m(r) <= K0 r L(r,2r) with both sides pushed against the inequality by their error estimates.
bool radius_admissible(const KernelSpec& spec, double K0, double r, const QuadConfig& cfg);

/// Strictly decreasing radii satisfying radius_admissible, searched on dyadic scales
/// refined by eighth-octave candidates. Throws SearchError below 2^-40 and
/// UnsupportedKernelError when j is integrable near 0.
std::vector<double> find_radii(const KernelSpec& spec, double K0, std::size_t count, const QuadConfig& cfg);

/// Index into `radii` of the first r_k < R with L(t r_k) <= 2(K0/t + 1) L(r_k,R) for every t in `thetas`.
/// Throws SearchError when the sequence runs out.
std::size_t k0_for(double R, double K0, const std::vector<double>& radii, const std::vector<double>& thetas,
                   const KernelSpec& spec, const QuadConfig& cfg);

/// Left side of the smallness rule for vartheta_0: (t M/(1-t)) (2 K0/(1-t) + 2).
double theta0_lhs(double t, double K0, double M);
/// Largest t in (0, 1/2] with theta0_lhs(t) <= 1/4, by bisection to 1e-10.
double theta0_for(double K0, double M);

struct GrowthOptions {
  std::optional<double> K0;
  std::optional<GrowthCase> force_case;
  std::size_t radii_count = 24;
  /// h is tabulated at R0 2^{-i/2} down to the last radius
  int h_per_octave = 2;
};

/// Assemble the constant bundle from certified condition reports.
GrowthParams growth_params(const KernelSpec& spec, const ConditionSuite& reports, double R0, const QuadConfig& cfg,
                           const GrowthOptions& opt = {});

/// h(r) = h_factor * L(r).
double eval_h(const GrowthParams& p, const KernelSpec& spec, double r, const QuadConfig& cfg);

struct Pick {
  std::size_t index = 0;
  double r = 0.0;
};
/// First r_k with k >= k0 meeting the case's selection inequality; c is the Garding constant.
Pick pick_r(double R, double v_inf, const GrowthParams& p, const KernelSpec& spec, const QuadConfig& cfg,
            double c = 0.0);

std::string to_text(const GrowthParams& p);
/// r,h two-column CSV with header
std::string h_table_csv(const GrowthParams& p);
/// k,r_k CSV with header
std::string radii_csv(const GrowthParams& p);

}  // namespace nlreg
