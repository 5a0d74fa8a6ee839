#include "nlreg/growth.hpp"

#include "nlreg/config.hpp"
#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kFloorExponent = 40;

// value pushed down by its error estimate
double lower(const IntegralResult& r) { return r.value - r.error_estimate; }
double upper(const IntegralResult& r) { return r.value + r.error_estimate; }

}  // namespace

Bump bump_constants() {
  Bump b;
  // |d/ds beta| = 2s/(1+s^2)^2 peaks at s = 1/sqrt(3)
  const double s = 1.0 / std::sqrt(3.0);
  b.sup_grad = 2.0 * s / std::pow(1.0 + s * s, 2);
  b.sup_b = 1.0;
  b.c_b = 2.0 * std::max(b.sup_b, b.sup_grad);
  return b;
}

std::string growth_case_name(GrowthCase c) {
  return c == GrowthCase::doubling ? "doubling" : "bounded_variation";
}

bool radius_admissible(const KernelSpec& spec, double K0, double r, const QuadConfig& cfg) {
  const auto m = first_moment(spec, r, cfg);
  const auto L = annulus_integral(spec, r, 2.0 * r, cfg);
  return upper(m) <= K0 * r * lower(L);
}

std::vector<double> find_radii(const KernelSpec& spec, double K0, std::size_t count, const QuadConfig& cfg) {
  if (!(K0 > 0.0)) throw ArgumentError("K0 must be positive");
  if (!check_A2(spec, cfg).passed()) throw UnsupportedKernelError("radii search needs j to be non-integrable near 0");
  std::vector<double> radii;
  for (int k = 1; k <= kFloorExponent && radii.size() < count; ++k) {
    const double top = std::ldexp(1.0, -k);
    for (int j = 0; j < 8; ++j) {
      const double r = top * std::exp2(-j / 8.0);
      if (radius_admissible(spec, K0, r, cfg)) {
        radii.push_back(r);
        break;
      }
    }
  }
  if (radii.size() < count)
    throw SearchError("found " + std::to_string(radii.size()) + " of " + std::to_string(count) +
                      " admissible radii above 2^-" + std::to_string(kFloorExponent));
  return radii;
}

std::size_t k0_for(double R, double K0, const std::vector<double>& radii, const std::vector<double>& thetas,
                   const KernelSpec& spec, const QuadConfig& cfg) {
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    if (!(r < R)) continue;
    const double LrR = lower(annulus_integral(spec, r, R, cfg));
    bool ok = true;
    for (double t : thetas) {
      if (!(t > 0.0 && t <= 1.0)) throw ArgumentError("theta grid values must lie in (0,1]");
      if (upper(L_total(spec, t * r, cfg)) > 2.0 * (K0 / t + 1.0) * LrR) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  throw SearchError("no radius below R = " + format_double(R) + " satisfies the key estimate; more radii needed");
}

double theta0_lhs(double t, double K0, double M) { return (t * M / (1.0 - t)) * (2.0 * K0 / (1.0 - t) + 2.0); }

double theta0_for(double K0, double M) {
  if (!(M >= 0.0) || !(K0 > 0.0)) throw ArgumentError("theta0 needs M >= 0 and K0 > 0");
  if (theta0_lhs(0.5, K0, M) <= 0.25) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (theta0_lhs(mid, K0, M) <= 0.25 ? lo : hi) = mid;
  }
  return lo;
}

GrowthParams growth_params(const KernelSpec& spec, const ConditionSuite& reports, double R0, const QuadConfig& cfg,
                           const GrowthOptions& opt) {
  if (!(R0 > 0.0)) throw ArgumentError("R0 must be positive");
  if (!reports.A1.passed() || !reports.A2.passed())
    throw UnsupportedKernelError("growth lemma needs A1 and A2 to pass");
  if (!reports.B.passed()) throw UnsupportedKernelError("no exponent alpha certified for condition B");
  const bool doubling = reports.A3_1.passed(), bv = reports.A3_2.passed();
  if (!doubling && !bv) throw UnsupportedKernelError("neither A3_1 nor A3_2 holds");
  GrowthCase which = doubling ? GrowthCase::doubling : GrowthCase::bounded_variation;
  if (opt.force_case) {
    if ((*opt.force_case == GrowthCase::doubling && !doubling) ||
        (*opt.force_case == GrowthCase::bounded_variation && !bv))
      throw UnsupportedKernelError("requested case " + growth_case_name(*opt.force_case) + " is not certified");
    which = *opt.force_case;
  }

  GrowthParams p;
  p.growth_case = which;
  p.lambda = spec.lambda;
  p.R0 = R0;
  p.alpha = reports.B.constant("alpha");
  p.K0 = opt.K0 ? *opt.K0 : 16.0 / (std::exp2(p.alpha) - 1.0);
  if (!(p.K0 > 8.0 / (std::exp2(p.alpha) - 1.0))) throw ArgumentError("K0 must exceed 8/(2^alpha - 1)");
  const Bump b = bump_constants();
  p.c_b = b.c_b;
  const double L2 = p.lambda * p.lambda;
  if (which == GrowthCase::doubling) {
    p.c0 = reports.A3_1.constant("c0");
    p.sigma = reports.A3_1.constant("sigma");
    p.vartheta = p.sigma;
    p.eta = p.sigma / 2.0;
    p.a = std::max(1.0, 16.0 * L2 * p.c_b / p.c0 * (p.K0 / p.vartheta + 1.0));
    p.h_factor = p.c0 / p.lambda / (33.0 * (p.K0 / p.vartheta + 1.0));
  } else {
    p.M = reports.A3_2.constant("M");
    p.vartheta0 = theta0_for(p.K0, p.M);
    p.vartheta = p.vartheta0;
    p.eta = p.vartheta0 / 2.0;
    // the bound on a is strict here
    p.a = std::nextafter(std::max(1.0, 32.0 * L2 * p.c_b * (p.K0 / p.vartheta + 1.0)), kInf);
    p.h_factor = 1.0 / p.lambda / (33.0 * (p.K0 / p.vartheta + 1.0));
  }
  p.theta = (b(0.5) - b(1.0)) / p.a;
  p.d_a = 1.0 + b(1.0) / p.a;
  p.radii = find_radii(spec, p.K0, opt.radii_count, cfg);
  const double last = p.radii.back();
  for (int i = 1;; ++i) {
    const double r = R0 * std::exp2(-static_cast<double>(i) / opt.h_per_octave);
    if (r < last) break;
    p.h_table.push_back({r, eval_h(p, spec, r, cfg)});
  }
  return p;
}

double eval_h(const GrowthParams& p, const KernelSpec& spec, double r, const QuadConfig& cfg) {
  return p.h_factor * L_total(spec, r, cfg).value;
}

Pick pick_r(double R, double v_inf, const GrowthParams& p, const KernelSpec& spec, const QuadConfig& cfg, double c) {
  if (!(R > 0.0 && R < p.R0)) throw ArgumentError("R must lie in (0, R0)");
  if (!(v_inf >= 0.0) || !(c >= 0.0)) throw ArgumentError("v_inf and c must be nonnegative");
  const std::vector<double> thetas{1.0, 0.5, 0.25, p.vartheta};
  const std::size_t k0 = k0_for(R, p.K0, p.radii, thetas, spec, cfg);
  const double factor = p.growth_case == GrowthCase::doubling
                            ? p.c0 / (p.lambda * p.lambda * 4.0 * (v_inf + 2.0))
                            : 1.0 / (8.0 * (v_inf + 2.0));
  for (std::size_t k = k0; k < p.radii.size(); ++k) {
    const double r = p.radii[k];
    const double lhs = c / p.lambda + upper(annulus_integral(spec, R - r, kInf, cfg));
    if (lhs < factor * lower(annulus_integral(spec, r, R, cfg))) return {k, r};
  }
  throw SearchError("radii exhausted before the selection inequality held at R = " + format_double(R));
}

std::string to_text(const GrowthParams& p) {
  std::ostringstream o;
  o << "case = " << growth_case_name(p.growth_case) << "\n";
  auto row = [&o](const char* k, double v) { o << k << " = " << format_double(v) << "\n"; };
  row("alpha", p.alpha);
  row("K0", p.K0);
  row("vartheta", p.vartheta);
  row("eta", p.eta);
  row("a", p.a);
  row("theta", p.theta);
  row("d_a", p.d_a);
  row("c_b", p.c_b);
  if (p.growth_case == GrowthCase::doubling) {
    row("c0", p.c0);
    row("sigma", p.sigma);
  } else {
    row("M", p.M);
    row("vartheta0", p.vartheta0);
  }
  row("lambda", p.lambda);
  row("R0", p.R0);
  row("h_factor", p.h_factor);
  o << "radii = " << p.radii.size() << "\n";
  return o.str();
}

std::string h_table_csv(const GrowthParams& p) {
  std::ostringstream o;
  o << "r,h\n";
  for (const auto& [r, h] : p.h_table) o << format_double(r) << "," << format_double(h) << "\n";
  return o.str();
}

std::string radii_csv(const GrowthParams& p) {
  std::ostringstream o;
  o << "k,r\n";
  for (std::size_t k = 0; k < p.radii.size(); ++k) o << k + 1 << "," << format_double(p.radii[k]) << "\n";
  return o.str();
}

}  // namespace nlreg
