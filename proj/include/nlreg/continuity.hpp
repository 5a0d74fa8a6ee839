#pragma once

#include "nlreg/growth.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlreg {

/// Nondecreasing continuous piecewise-linear function with omega(0) = 0,
/// constant after the last breakpoint.
struct Modulus {
  /// (t, omega(t)) with t strictly increasing, first entry (0,0)
  std::vector<std::pair<double, double>> breakpoints;
  /// Below this t the values come from the final segment to (0,0) and are not
  /// backed by a computed radius.
  double certified_from = 0.0;

  void validate() const;
};

double eval_modulus(const Modulus& w, double t);

struct OscillationSchedule {
  /// r[0] = R_*
  std::vector<double> r;
  double kappa = 0.0;
  double K_tilde = 0.0;
  /// h(r_n)
  std::vector<double> h;
  std::vector<double> g;
  /// max{kappa^n, g_n}
  std::vector<double> g_tilde;
  /// running max of g_tilde over later indices (nonincreasing)
  std::vector<double> g_tilde_mono;
};

/// 2 K max_{i=1..n} kappa^{i-1}/h(r_{n-i}); zero for n = 0.
double schedule_g(const std::vector<double>& h, double kappa, double K_tilde, std::size_t n);

struct OscillationStep {
  double r_next = 0.0;
  double bound = 0.0;
  /// radius picked by the growth lemma before scaling by eta
  double r_pick = 0.0;
};
/// r' = eta * pick_r(R, 2 h(R)/K), bound = max{kappa O_R, 2 K c_fu / h(R)}; c is the Garding constant.
OscillationStep oscillation_step(double O_R, double R, const GrowthParams& p, double K_tilde, double c_fu,
                                 const KernelSpec& spec, const QuadConfig& cfg, double c = 0.0);

struct ModulusResult {
  Modulus omega;
  OscillationSchedule schedule;
  /// false when the radius search stopped before n_max steps
  bool complete = true;
  std::string error;
};

/// Schedule r_0..r_{n_max} and the interpolated modulus. Needs n_max >= 1 and R_* <= R0/2.
ModulusResult build_modulus(const GrowthParams& p, double K_tilde, double R_star, int n_max, const KernelSpec& spec,
                            const QuadConfig& cfg, double c = 0.0);

/// K = max{1, Lambda, Lambda C, w_sup}.
double k_tilde(double lambda, double C_tilde, double w_sup);

/// sup over a grid of x in (bs_lo, bs_hi) of the mass of j(. - x) outside (b_lo, b_hi); N = 1.
double tail_constant(const KernelSpec& spec, double bs_lo, double bs_hi, double b_lo, double b_hi,
                     const QuadConfig& cfg, int samples = 33);

/// t,omega CSV with header
std::string modulus_csv(const Modulus& w);
/// n,r_n,g_n,g_tilde_n CSV with header
std::string schedule_csv(const OscillationSchedule& s);

}  // namespace nlreg
