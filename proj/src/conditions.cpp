#include "nlreg/conditions.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nlreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConditionReport make_report(Condition c, const QuadConfig& cfg) {
  ConditionReport r;
  r.condition = c;
  r.rel_tol = cfg.rel_tol;
  r.abs_tol = cfg.abs_tol;
  return r;
}

bool finite_result(const IntegralResult& r) {
  return !r.diverged && std::isfinite(r.value) && std::isfinite(r.error_estimate);
}

bool is_tabulated(const KernelSpec& s) {
  if (s.family == Family::custom) return s.custom.kind == CustomKind::tabulated;
  if (s.family == Family::radial || s.family == Family::cone) return s.ell.kind == ProfileKind::tabulated;
  return false;
}

/// Additive recurrence with the generalized golden ratio (low discrepancy in d dimensions).
class Kronecker {
public:
  Kronecker(int dim, std::uint64_t seed) : alpha_(dim), offset_(dim) {
    double phi = 2.0;
    for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < dim; ++i) {
      alpha_[i] = std::fmod(1.0 / std::pow(phi, i + 1), 1.0);
      offset_[i] = seed == 0 ? 0.5 : u(rng);
    }
  }
  double at(long n, int i) const {
    const double v = offset_[i] + static_cast<double>(n) * alpha_[i];
    return v - std::floor(v);
  }

private:
  std::vector<double> alpha_, offset_;
};

Point direction(int dim, double u, double rho) {
  if (dim == 1) return {u < 0.5 ? -rho : rho, 0.0};
  const double a = 2.0 * M_PI * u;
  return {rho * std::cos(a), rho * std::sin(a)};
}

}  // namespace

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::A1: return "A1";
    case Condition::A2: return "A2";
    case Condition::A3_1: return "A3_1";
    case Condition::A3_2: return "A3_2";
    case Condition::Kas: return "Kas";
    case Condition::B: return "B";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double ConditionReport::constant(const std::string& key) const {
  auto it = constants.find(key);
  if (it == constants.end())
    throw ArgumentError(condition_name(condition) + " report has no constant '" + key + "'");
  return it->second;
}

// ---------------------------------------------------------------- A1

ConditionReport check_A1(const KernelSpec& spec, double gamma, const QuadConfig& cfg) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ArgumentError("check_A1 needs gamma in (0,1]");
  auto rep = make_report(Condition::A1, cfg);
  rep.constants["gamma"] = gamma;
  QuadConfig c = cfg;
  c.split_radius = 1.0;
  auto inner = integrate_radial(mass_integrand(spec, gamma), 0.0, 1.0, c);
  auto outer = integrate_radial(mass_integrand(spec), 1.0, kInf, c);
  rep.evidence = {{1.0, inner.value}, {kInf, outer.value}};
  if (inner.diverged || outer.diverged) {
    rep.verdict = Verdict::fail;
    rep.diagnostics = inner.diverged ? inner.note : outer.note;
    return rep;
  }
  if (finite_result(inner) && finite_result(outer)) {
    rep.verdict = Verdict::pass;
    rep.constants["value"] = inner.value + outer.value;
    rep.constants["error"] = inner.error_estimate + outer.error_estimate;
    std::string note = inner.note;
    if (!outer.note.empty()) note += (note.empty() ? "" : "; ") + outer.note;
    rep.diagnostics = note;
    return rep;
  }
  rep.diagnostics = "integral neither bounded nor divergent: " + inner.note + " " + outer.note;
  return rep;
}

ConditionReport scan_A1(const KernelSpec& spec, const QuadConfig& cfg) {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  grid.push_back(0.99);
  ConditionReport last;
  std::vector<std::pair<double, double>> trail;
  bool any_inconclusive = false;
  for (double g : grid) {
    auto r = check_A1(spec, g, cfg);
    trail.push_back({g, r.verdict == Verdict::pass ? 1.0 : (r.verdict == Verdict::fail ? 0.0 : 0.5)});
    if (r.passed()) {
      r.evidence.insert(r.evidence.begin(), trail.begin(), trail.end());
      r.diagnostics = "smallest passing gamma on the scan grid" + (r.diagnostics.empty() ? "" : "; " + r.diagnostics);
      return r;
    }
    any_inconclusive = any_inconclusive || r.verdict == Verdict::inconclusive;
    last = r;
  }
  last.evidence = trail;
  if (any_inconclusive) last.verdict = Verdict::inconclusive;
  last.diagnostics = "no gamma < 1 on the scan grid passed";
  return last;
}

// ---------------------------------------------------------------- A2

ConditionReport check_A2(const KernelSpec& spec, const QuadConfig& cfg) {
  auto rep = make_report(Condition::A2, cfg);
  const auto env = mass_envelope(spec);
  const bool certified = env.lower0 && env.lower0->exponent <= -1.0 && env.near_radius > 0.0;
  const auto f = mass_integrand(spec);
  const double stop = std::max(env.floor, std::ldexp(1.0, -60));
  double V = integrate_radial(f, 0.5, 1.0, cfg).value;
  rep.evidence.push_back({0.5, V});
  double ref = V;
  int doublings = 0;
  std::vector<double> incs;
  const double tol = std::max(cfg.rel_tol, 1e-9) * 100.0;
  for (int k = 2; k <= 60; ++k) {
    const double r = std::ldexp(1.0, -k);
    if (r < stop) break;
    const double d = integrate_radial(f, r, 2.0 * r, cfg).value;
    V += d;
    rep.evidence.push_back({r, V});
    incs.push_back(V > 0.0 ? d / V : 0.0);
    if (V > 0.0 && (ref == 0.0 ? V > 0.0 : V >= 2.0 * ref)) {
      if (ref > 0.0) ++doublings;
      ref = V;
    }
    const std::size_t n = incs.size();
    const bool converging = n >= 3 && incs[n - 1] < tol && incs[n - 2] < tol && incs[n - 3] < tol;
    if (converging) {
      rep.verdict = certified ? Verdict::pass : Verdict::fail;
      rep.constants["L_limit"] = V;
      rep.diagnostics = certified ? "power bound certifies divergence; numerics stalled"
                                  : "L(r,1) converges as r -> 0";
      return rep;
    }
    if (doublings >= 3 && k >= 12) break;
  }
  rep.constants["doublings"] = doublings;
  rep.constants["L_last"] = V;
  if (certified) {
    rep.verdict = Verdict::pass;
    rep.diagnostics = "lower power bound near 0 is not integrable";
  } else if (doublings >= 3) {
    rep.verdict = Verdict::pass;
    rep.diagnostics = "L(r,1) doubled three times along dyadic r";
  } else {
    rep.diagnostics = "L(r,1) neither converged nor doubled three times before the resolution floor";
  }
  return rep;
}

// ---------------------------------------------------------------- A3_1

namespace {

struct PairSample {
  double log_rho = 0.0;  // log of |y|
  double t = 1.0;        // |z| / |y|
  double uz = 0.0, uy = 0.0;
};

struct PairEval {
  double ratio = 1.0;  // min(j(z)/j(y), j(y)/j(z))
};

class PairSampler {
public:
  PairSampler(const KernelSpec& spec, double R0, double sigma, double lo)
      : spec_(spec), R0_(R0), sigma_(sigma), lo_(lo), hi_(std::log(R0)) {}

  PairSample draw(const Kronecker& q, long n) const {
    PairSample p;
    p.log_rho = lo_ + q.at(n, 0) * (hi_ - lo_);
    p.t = 1.0 - sigma_ + 2.0 * sigma_ * q.at(n, 1);
    // every eighth sample sits on an endpoint of the ratio interval
    if (n % 8 == 3) p.t = 1.0 - sigma_;
    if (n % 8 == 7) p.t = 1.0 + sigma_;
    p.uz = q.at(n, 2);
    p.uy = q.at(n, 3);
    return p;
  }

  double eval(const PairSample& p) const {
    double ry = std::exp(p.log_rho);
    double rz = p.t * ry;
    const double top = std::max(ry, rz);
    if (top >= R0_) {
      const double s = R0_ * (1.0 - 1e-12) / top;
      ry *= s;
      rz *= s;
    }
    const double jz = eval_density(spec_, direction(spec_.dim, p.uz, rz));
    const double jy = eval_density(spec_, direction(spec_.dim, p.uy, ry));
    if (jz <= 0.0 || jy <= 0.0) return 0.0;
    return std::min(jz / jy, jy / jz);
  }

  double band(const PairSample& p, int bands) const {
    const double x = (p.log_rho - lo_) / (hi_ - lo_);
    return std::clamp(static_cast<int>(x * bands), 0, bands - 1);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double sigma() const { return sigma_; }

private:
  const KernelSpec& spec_;
  double R0_, sigma_, lo_, hi_;
};

}  // namespace

ConditionReport check_A3_1(const KernelSpec& spec, double R0, const QuadConfig& cfg, const A31Options& opt) {
  if (!(R0 > 0.0)) throw ArgumentError("check_A3_1 needs R0 > 0");
  auto rep = make_report(Condition::A3_1, cfg);
  rep.sampled = true;
  rep.constants["R0"] = R0;
  double lo = std::log(R0 * opt.depth);
  if (is_tabulated(spec)) lo = std::max(lo, std::log(mass_envelope(spec).floor));
  if (!(lo < std::log(R0))) {
    rep.diagnostics = "sampling range is empty";
    return rep;
  }
  const Kronecker q(4, opt.seed);
  constexpr int kBands = 8;
  std::ostringstream diag;
  for (double sigma : opt.sigmas) {
    const PairSampler sampler(spec, R0, sigma, lo);
    double c_half = kInf, c_full = kInf;
    PairSample worst;
    std::vector<double> band_inf(kBands, kInf);
    const long n_full = 2L * opt.samples;
    for (long n = 0; n < n_full; ++n) {
      const auto p = sampler.draw(q, n);
      const double c = sampler.eval(p);
      if (c < c_full) {
        c_full = c;
        worst = p;
      }
      if (n < opt.samples) c_half = std::min(c_half, c);
      const int b = static_cast<int>(sampler.band(p, kBands));
      band_inf[b] = std::min(band_inf[b], c);
    }
    // local refinement around the worst pair
    double c_loc = c_full;
    if (c_full > 0.0) {
      const double dl = (sampler.hi() - sampler.lo()) / 1024.0;
      const double dt = sigma / 64.0;
      const Kronecker lq(4, opt.seed + 17);
      for (long n = 0; n < 512; ++n) {
        PairSample p = worst;
        p.log_rho = std::clamp(worst.log_rho + (2.0 * lq.at(n, 0) - 1.0) * dl, sampler.lo(), sampler.hi());
        p.t = std::clamp(worst.t + (2.0 * lq.at(n, 1) - 1.0) * dt, 1.0 - sigma, 1.0 + sigma);
        if (spec.dim == 2) {
          p.uz = worst.uz + (2.0 * lq.at(n, 2) - 1.0) / 2048.0;
          p.uy = worst.uy + (2.0 * lq.at(n, 3) - 1.0) / 2048.0;
          p.uz -= std::floor(p.uz);
          p.uy -= std::floor(p.uy);
        }
        c_loc = std::min(c_loc, sampler.eval(p));
      }
    }
    // band 0 holds the smallest radii
    const bool trend = band_inf[0] < 0.5 * band_inf[kBands - 1];
    const bool stable = c_half > 0.0 && c_full >= 0.95 * c_half;
    const bool refined = c_loc >= 0.95 * c_full;
    rep.evidence.push_back({sigma, c_loc});
    diag << "sigma=" << format_double(sigma) << ": inf " << format_double(c_half) << " -> "
         << format_double(c_full) << " (refined " << format_double(c_loc) << ")";
    if (c_full <= 0.0) diag << " zero ratio";
    else if (!stable) diag << " unstable under sample doubling";
    else if (!refined) diag << " drops under local refinement";
    else if (trend) diag << " decays toward the origin";
    diag << "; ";
    if (c_loc > 0.0 && stable && refined && !trend) {
      rep.verdict = Verdict::pass;
      rep.constants["sigma"] = sigma;
      rep.constants["c0"] = std::min(c_loc, 1.0);
      rep.diagnostics = "sampled: " + diag.str();
      return rep;
    }
  }
  rep.verdict = Verdict::fail;
  rep.diagnostics = "sampled: " + diag.str();
  return rep;
}

// ---------------------------------------------------------------- A3_2

double bv_ratio(const KernelSpec& spec, double r, double R, const QuadConfig& cfg) {
  const auto bv = bv_estimate(spec, r, R, cfg);
  if (bv.diverged) return kInf;
  const auto L = annulus_integral(spec, r, kInf, cfg);
  if (!(L.value > 0.0)) return bv.value > 0.0 ? kInf : 0.0;
  return r * bv.value / L.value;
}

ConditionReport check_A3_2(const KernelSpec& spec, double R0, const QuadConfig& cfg, const A32Options& opt) {
  if (!(R0 > 0.0)) throw ArgumentError("check_A3_2 needs R0 > 0");
  auto rep = make_report(Condition::A3_2, cfg);
  rep.constants["R0"] = R0;
  constexpr int kPerDecade = 20;
  const int step = kPerDecade / opt.r_per_decade;
  const double floor = mass_envelope(spec).floor;
  std::vector<double> g{R0};
  for (int k = 1; k <= kPerDecade * opt.decades; ++k) {
    const double x = R0 * std::pow(10.0, -static_cast<double>(k) / kPerDecade);
    if (x < floor) break;
    g.push_back(x);
  }
  const int K = static_cast<int>(g.size()) - 1;
  if (K < 2 * step) {
    rep.diagnostics = "resolution floor leaves too few radii below R0";
    return rep;
  }
  // segment variations and tail masses, accumulated inward from g[1]
  std::vector<double> seg(K + 1, 0.0), tail(K + 1, 0.0);
  tail[1] = annulus_integral(spec, g[1], kInf, cfg).value;
  for (int k = 1; k < K; ++k) {
    const auto b = bv_estimate(spec, g[k + 1], g[k], cfg);
    if (b.diverged) {
      rep.verdict = Verdict::fail;
      rep.diagnostics = "unbounded variation between " + format_double(g[k + 1]) + " and " + format_double(g[k]) +
                        ": " + b.note;
      return rep;
    }
    seg[k] = b.value;
    tail[k + 1] = tail[k] + annulus_integral(spec, g[k + 1], g[k], cfg).value;
  }
  std::vector<double> decade_sup(opt.decades, 0.0);
  std::vector<bool> decade_seen(opt.decades, false);
  double sup = 0.0;
  for (int kr = step; kr <= K; kr += step) {
    double best = 0.0;
    std::vector<int> kRs;
    for (int j = 1; j <= opt.R_per_r; ++j) {
      const int kR = std::max(1, static_cast<int>(std::lround(kr * (1.0 - static_cast<double>(j) / opt.R_per_r))));
      if (kR < kr && std::find(kRs.begin(), kRs.end(), kR) == kRs.end()) kRs.push_back(kR);
    }
    for (int kR : kRs) {
      double bv = 0.0;
      for (int i = kR; i < kr; ++i) bv += seg[i];
      const double m = tail[kr] > 0.0 ? g[kr] * bv / tail[kr] : (bv > 0.0 ? kInf : 0.0);
      best = std::max(best, m);
    }
    rep.evidence.push_back({g[kr], best});
    sup = std::max(sup, best);
    const int d = std::min((kr - 1) / kPerDecade, opt.decades - 1);
    decade_sup[d] = std::max(decade_sup[d], best);
    decade_seen[d] = true;
  }
  std::vector<double> ds;
  for (int d = 0; d < opt.decades; ++d)
    if (decade_seen[d]) ds.push_back(decade_sup[d]);
  int chain = 0;
  bool growth = false;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    chain = ds[i] >= 2.0 * ds[i - 1] ? chain + 1 : 0;
    if (chain >= 3) growth = true;
  }
  rep.constants["M"] = sup;
  if (!std::isfinite(sup) || growth) {
    rep.verdict = Verdict::fail;
    rep.diagnostics = "M(r,R) grows at least twofold per decade as r -> 0";
    return rep;
  }
  const std::size_t half = ds.size() / 2;
  const double early = *std::max_element(ds.begin(), ds.begin() + std::max<std::size_t>(half, 1));
  const double late = *std::max_element(ds.begin() + std::max<std::size_t>(half, 1), ds.end());
  if (late <= 1.25 * early) {
    rep.verdict = Verdict::pass;
    rep.diagnostics = "sup of M(r,R) stable toward r -> 0";
  } else {
    rep.diagnostics = "sup of M(r,R) still increasing at the smallest radii";
  }
  return rep;
}

// ---------------------------------------------------------------- Kas

namespace {

RadialIntegrand antisym_integrand(const KernelSpec& spec) {
  RadialIntegrand f;
  f.g = [&spec](double rho) { return antisym_ratio(spec, rho); };
  f.breaks = mass_breaks(spec);
  if (spec.family == Family::asymmetric_pair && spec.plus.order == spec.minus.order) {
    const double d = spec.plus.coef - spec.minus.coef;
    const PowerLaw p{d * d / (spec.plus.coef + spec.minus.coef), -1.0 - spec.plus.order};
    f.lower0 = f.upper0 = f.lower_inf = f.upper_inf = p;
    f.near_radius = kInf;
    f.far_radius = 0.0;
  } else if (spec.family == Family::custom && spec.custom.kind == CustomKind::oscillating_power) {
    // odd part 2 rho^{-7/6} against an even part at least rho^{-3/2} on (0,1]
    f.upper0 = PowerLaw{2.0, -5.0 / 6.0};
    f.near_radius = 1.0;
    f.support = 1.0;
  }
  f.floor = mass_envelope(spec).floor;
  return f;
}

}  // namespace

ConditionReport check_Kas(const TwoPointKernel& K, const QuadConfig& cfg) {
  auto rep = make_report(Condition::Kas, cfg);
  if (K.is_symmetric()) {
    rep.verdict = Verdict::pass;
    rep.constants["A"] = 0.0;
    rep.diagnostics = "symmetric kernel";
    return rep;
  }
  if (K.base.dim != 1) {
    rep.diagnostics = "non-symmetric kernels are only analysed for N = 1";
    return rep;
  }
  QuadConfig c = cfg;
  c.split_radius = 1.0;
  auto judge = [](const IntegralResult& inner, const IntegralResult& outer) {
    if (inner.diverged || outer.diverged) return Verdict::fail;
    if (finite_result(inner) && finite_result(outer)) return Verdict::pass;
    return Verdict::inconclusive;
  };
  if (K.is_translation_invariant()) {
    const auto f = antisym_integrand(K.base);
    const auto inner = integrate_radial(f, 0.0, 1.0, c);
    const auto outer = integrate_radial(f, 1.0, kInf, c);
    for (int k = 1; k <= 12; ++k) {
      const double eps = std::ldexp(1.0, -k);
      rep.evidence.push_back({eps, integrate_radial(f, eps, 1.0, c).value});
    }
    rep.verdict = judge(inner, outer);
    if (rep.verdict == Verdict::pass) rep.constants["A"] = inner.value + outer.value;
    if (rep.verdict == Verdict::fail) rep.constants["A"] = kInf;
    rep.diagnostics = rep.verdict == Verdict::fail ? "inner integral diverges: " + (inner.diverged ? inner.note : outer.note)
                                                   : inner.note;
    return rep;
  }
  // x dependent: sup over one period of the weight
  const int nx = 16;
  const double period = 2.0 * M_PI / K.weight_omega;
  double A = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = period * i / nx;
    RadialIntegrand f;
    f.g = [&K, x](double rho) {
      double s = 0.0;
      for (int side : {-1, 1}) {
        const Point px{x, 0.0}, py{x + side * rho, 0.0};
        const auto d = decompose(K, px, py);
        if (d.sym > 0.0) s += d.anti * d.anti / d.sym;
      }
      return s;
    };
    f.breaks = mass_breaks(K.base);
    const auto inner = integrate_radial(f, 0.0, 1.0, c);
    const auto outer = integrate_radial(f, 1.0, kInf, c);
    const auto v = judge(inner, outer);
    rep.evidence.push_back({x, inner.value + outer.value});
    if (v != Verdict::pass) {
      rep.verdict = v;
      if (v == Verdict::fail) rep.constants["A"] = kInf;
      rep.diagnostics = "x=" + format_double(x) + ": " + inner.note + " " + outer.note;
      return rep;
    }
    A = std::max(A, inner.value + outer.value);
  }
  rep.verdict = Verdict::pass;
  rep.constants["A"] = A;
  rep.diagnostics = "sup over 16 points of one weight period";
  return rep;
}

// ---------------------------------------------------------------- B

namespace {

ConditionReport estimate_alpha_capped(const KernelSpec& spec, const QuadConfig& cfg, std::optional<double> gamma) {
  auto rep = make_report(Condition::B, cfg);
  const double floor = mass_envelope(spec).floor;
  std::vector<double> xs, ys;
  bool clean = true;
  for (int k = 1; k <= 20; ++k) {
    const double r = std::ldexp(1.0, -k);
    if (r < floor) break;
    IntegralResult m;
    try {
      m = first_moment(spec, r, cfg);
    } catch (const DivergenceError& e) {
      rep.verdict = Verdict::fail;
      rep.diagnostics = e.what();
      return rep;
    }
    clean = clean && m.converged;
    rep.evidence.push_back({r, m.value});
    if (m.value > 0.0) {
      xs.push_back(std::log(r));
      ys.push_back(std::log(m.value));
    }
  }
  const double cap = gamma ? std::min(1.0, 1.0 - *gamma) : 1.0;
  if (gamma) rep.constants["gamma"] = *gamma;
  const double span = xs.empty() ? 0.0 : (xs.front() - xs.back()) / std::log(10.0);
  if (!clean || (span < 4.0 && !xs.empty())) {
    if (gamma && cap > 0.0) {
      rep.verdict = Verdict::pass;
      rep.constants["alpha"] = cap;
      rep.diagnostics = clean ? "too few decades for a fit; alpha = 1 - gamma"
                              : "first moments only bounded near 0; alpha = 1 - gamma";
    } else {
      rep.diagnostics = clean ? "fewer than 4 decades of usable radii" : "first moments not resolved";
    }
    return rep;
  }
  if (xs.empty()) {
    // m vanishes on all sampled radii: (B) holds with any alpha <= 1
    rep.verdict = Verdict::pass;
    rep.constants["alpha"] = cap;
    rep.constants["slope"] = kInf;
    return rep;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.constants["slope"] = slope;
  const double alpha = std::min(slope, cap);
  if (!(alpha > 0.0)) {
    rep.verdict = Verdict::fail;
    rep.diagnostics = "fitted slope is not positive";
    return rep;
  }
  rep.verdict = Verdict::pass;
  rep.constants["alpha"] = alpha;
  return rep;
}

}  // namespace

ConditionReport estimate_alpha(const KernelSpec& spec, const QuadConfig& cfg) {
  return estimate_alpha_capped(spec, cfg, spec.gamma_hint);
}

ConditionSuite run_all(const TwoPointKernel& K, double R0, const QuadConfig& cfg, std::uint64_t seed) {
  ConditionSuite s;
  s.A1 = scan_A1(K.base, cfg);
  s.A2 = check_A2(K.base, cfg);
  A31Options o;
  o.seed = seed;
  s.A3_1 = check_A3_1(K.base, R0, cfg, o);
  s.A3_2 = check_A3_2(K.base, R0, cfg);
  s.Kas = check_Kas(K, cfg);
  std::optional<double> g = K.base.gamma_hint;
  if (!g && s.A1.passed()) g = s.A1.constant("gamma");
  s.B = estimate_alpha_capped(K.base, cfg, g);
  return s;
}

// ---------------------------------------------------------------- output

std::string to_text(const ConditionReport& r) {
  std::ostringstream o;
  o << condition_name(r.condition) << ": " << verdict_name(r.verdict) << (r.sampled ? " (sampled)" : "") << "\n";
  for (const auto& [k, v] : r.constants) o << "  " << k << " = " << format_double(v) << "\n";
  o << "  tolerances: rel " << format_double(r.rel_tol) << ", abs " << format_double(r.abs_tol) << "\n";
  if (!r.diagnostics.empty()) o << "  note: " << r.diagnostics << "\n";
  if (!r.evidence.empty()) {
    o << "  evidence (scale, value):";
    for (const auto& [a, b] : r.evidence) o << " (" << format_double(a) << ", " << format_double(b) << ")";
    o << "\n";
  }
  return o.str();
}

std::string csv_header() { return "condition,verdict,key,value\n"; }

std::string to_csv_rows(const ConditionReport& r) {
  std::ostringstream o;
  const std::string head = condition_name(r.condition) + "," + verdict_name(r.verdict) + ",";
  if (r.constants.empty()) o << head << ",\n";
  for (const auto& [k, v] : r.constants) o << head << k << "," << format_double(v) << "\n";
  return o.str();
}

}  // namespace nlreg
