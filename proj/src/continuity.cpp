#include "nlreg/continuity.hpp"

#include "nlreg/config.hpp"
#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlreg {

void Modulus::validate() const {
  if (breakpoints.empty() || breakpoints.front() != std::pair<double, double>{0.0, 0.0})
    throw ValidationError("modulus", "first breakpoint must be (0,0)");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i].first > breakpoints[i - 1].first))
      throw ValidationError("modulus", "breakpoints must be strictly increasing in t");
    if (!(breakpoints[i].second >= breakpoints[i - 1].second))
      throw ValidationError("modulus", "values must be nondecreasing");
  }
}

double eval_modulus(const Modulus& w, double t) {
  if (!(t >= 0.0)) throw ArgumentError("modulus argument must be nonnegative");
  const auto& b = w.breakpoints;
  if (t == 0.0 || b.empty()) return 0.0;
  if (t >= b.back().first) return b.back().second;
  const auto it = std::upper_bound(b.begin(), b.end(), t, [](double v, const auto& p) { return v < p.first; });
  const auto& [t1, v1] = *(it - 1);
  const auto& [t2, v2] = *it;
  return v1 + (v2 - v1) * (t - t1) / (t2 - t1);
}

double schedule_g(const std::vector<double>& h, double kappa, double K_tilde, std::size_t n) {
  if (n >= h.size() + 1) throw ArgumentError("schedule index beyond the computed radii");
  double m = 0.0;
  for (std::size_t i = 1; i <= n; ++i) m = std::max(m, std::pow(kappa, static_cast<double>(i - 1)) / h[n - i]);
  return 2.0 * K_tilde * m;
}

OscillationStep oscillation_step(double O_R, double R, const GrowthParams& p, double K_tilde, double c_fu,
                                 const KernelSpec& spec, const QuadConfig& cfg, double c) {
  if (!(O_R >= 0.0) || !(c_fu > 0.0)) throw ArgumentError("oscillation step needs O_R >= 0 and c(f,u) > 0");
  const double hR = eval_h(p, spec, R, cfg);
  const double kappa = (2.0 - p.theta) / 2.0;
  const auto pick = pick_r(R, 2.0 / K_tilde * hR, p, spec, cfg, c);
  return {p.eta * pick.r, std::max(kappa * O_R, 2.0 * K_tilde * c_fu / hR), pick.r};
}

ModulusResult build_modulus(const GrowthParams& p, double K_tilde, double R_star, int n_max, const KernelSpec& spec,
                            const QuadConfig& cfg, double c) {
  if (n_max < 1) throw ArgumentError("n_max must be at least 1");
  if (!(R_star > 0.0 && R_star <= 0.5 * p.R0)) throw ArgumentError("R_* must lie in (0, R0/2]");
  if (!(K_tilde >= std::max(1.0, p.lambda))) throw ArgumentError("K must be at least max{1, Lambda}");
  ModulusResult res;
  auto& s = res.schedule;
  s.kappa = (2.0 - p.theta) / 2.0;
  s.K_tilde = K_tilde;
  s.r.push_back(R_star);
  s.h.push_back(eval_h(p, spec, R_star, cfg));
  for (int n = 0; n < n_max; ++n) {
    try {
      const double R = s.r.back();
      const auto pick = pick_r(R, 2.0 / K_tilde * s.h.back(), p, spec, cfg, c);
      s.r.push_back(p.eta * pick.r);
      s.h.push_back(eval_h(p, spec, s.r.back(), cfg));
    } catch (const SearchError& e) {
      res.complete = false;
      res.error = "step " + std::to_string(n + 1) + ": " + e.what();
      break;
    }
  }
  const std::size_t N = s.r.size() - 1;
  for (std::size_t n = 0; n <= N; ++n) {
    s.g.push_back(schedule_g(s.h, s.kappa, K_tilde, n));
    s.g_tilde.push_back(std::max(std::pow(s.kappa, static_cast<double>(n)), s.g.back()));
  }
  s.g_tilde_mono = s.g_tilde;
  for (std::size_t n = N; n-- > 0;) s.g_tilde_mono[n] = std::max(s.g_tilde_mono[n], s.g_tilde_mono[n + 1]);

  // omega~ equals g~_{n-1} on (r_{n+1}, r_n]; the interpolant through
  // (r_{n+1}, g~_{n-1}) lies above it
  auto& b = res.omega.breakpoints;
  b.push_back({0.0, 0.0});
  for (std::size_t n = N; n >= 2; --n) b.push_back({s.r[n], s.g_tilde_mono[n - 2]});
  if (N >= 1) b.push_back({s.r[1], std::max(2.0, s.g_tilde_mono[0])});
  res.omega.certified_from = N >= 2 ? s.r[N] : (N == 1 ? s.r[1] : 0.0);
  res.omega.validate();
  return res;
}

double k_tilde(double lambda, double C_tilde, double w_sup) {
  return std::max({1.0, lambda, lambda * C_tilde, w_sup});
}

double tail_constant(const KernelSpec& spec, double bs_lo, double bs_hi, double b_lo, double b_hi,
                     const QuadConfig& cfg, int samples) {
  if (spec.dim != 1) throw ArgumentError("tail constant is implemented for N = 1");
  if (!(b_lo < bs_lo && bs_lo < bs_hi && bs_hi < b_hi)) throw ArgumentError("need B_* compactly inside B");
  if (samples < 2) throw ArgumentError("need at least two sample points");
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = bs_lo + (bs_hi - bs_lo) * i / (samples - 1);
    const double v = one_sided_tail(spec, 1, b_hi - x, cfg).value + one_sided_tail(spec, -1, x - b_lo, cfg).value;
    sup = std::max(sup, v);
  }
  return sup;
}

std::string modulus_csv(const Modulus& w) {
  std::ostringstream o;
  o << "t,omega\n";
  for (const auto& [t, v] : w.breakpoints) o << format_double(t) << "," << format_double(v) << "\n";
  return o.str();
}

std::string schedule_csv(const OscillationSchedule& s) {
  std::ostringstream o;
  o << "n,r_n,g_n,g_tilde_n\n";
  for (std::size_t n = 0; n < s.r.size(); ++n)
    o << n << "," << format_double(s.r[n]) << "," << format_double(s.g[n]) << "," << format_double(s.g_tilde[n])
      << "\n";
  return o.str();
}

}  // namespace nlreg
