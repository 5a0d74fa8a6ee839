#include "nlreg/quadrature.hpp"

#include "nlreg/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>

namespace nlreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// decade shells are used near 0 and at infinity
constexpr double kShell = 10.0;
// shells integrated numerically before a power bound may close the remainder
constexpr int kMinShells = 3;
constexpr double kTruncation = 1e6;
// power exponents this close to -1 count as the logarithmic borderline
constexpr double kExponentTol = 1e-9;

struct Panel {
  double a, b, value, err;
};

Panel gk21(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
  if (!std::isfinite(v)) throw NumericalError("non-finite integrand value on [" + format_double(a) + ", " + format_double(b) + "]");
  // the non-adaptive error estimate refers to the reference interval [-1,1]
  return {a, b, v, err * 0.5 * (b - a)};
}

// integral of c*rho^e over (a,b)
double power_integral(const PowerLaw& p, double a, double b) {
  const double e1 = p.exponent + 1.0;
  if (std::abs(e1) < 1e-14) return p.coef * std::log(b / a);
  if (a == 0.0) return e1 > 0 ? p.coef * std::pow(b, e1) / e1 : kInf;
  if (std::isinf(b)) return e1 < 0 ? p.coef * std::pow(a, e1) / (-e1) : kInf;
  return p.coef * (std::pow(b, e1) - std::pow(a, e1)) / e1;
}

double target_for(const QuadConfig& cfg, double value) {
  return 0.1 * std::max(cfg.rel_tol * std::abs(value), cfg.abs_tol);
}

IntegralResult log_direct(const RadialIntegrand& f, double a, double b, const QuadConfig& cfg) {
  std::vector<double> br;
  for (double x : f.breaks)
    if (x > a && x < b) br.push_back(std::log(x));
  auto h = [&](double t) {
    const double r = std::exp(t);
    return f.g(r) * r;
  };
  return integrate(h, std::log(a), std::log(b), cfg, br);
}

// Part of (a,b) that lies below the resolution floor: bounded by the envelopes.
IntegralResult below_floor(const RadialIntegrand& f, double a, double b, const QuadConfig& cfg) {
  IntegralResult res;
  if (b <= f.near_radius && f.upper0) {
    const double hi = power_integral(*f.upper0, a, b);
    const double lo = f.lower0 ? power_integral(*f.lower0, a, b) : 0.0;
    res.value = 0.5 * (hi + lo);
    res.error_estimate = 0.5 * (hi - lo);
    res.converged = res.error_estimate <= 10.0 * target_for(cfg, res.value);
    res.note = "power bounds below resolution floor";
    return res;
  }
  return log_direct(f, a, b, cfg);  // tabulated data raise ExtrapolationError here
}

IntegralResult near_zero(const RadialIntegrand& f, double c, const QuadConfig& cfg) {
  IntegralResult res;
  std::vector<double> incs, sums;
  double hi = c;
  for (int k = 0; k < 700; ++k) {
    const bool enough = static_cast<int>(incs.size()) >= kMinShells || hi <= f.floor;
    if (hi <= f.near_radius && f.lower0 && f.lower0->exponent <= -1.0 + kExponentTol) {
      if (enough) {
        res.diverged = true;
        res.converged = false;
        res.error_estimate = kInf;
        res.note = "lower power bound is not integrable at 0";
        return res;
      }
    }
    if (hi <= f.near_radius && f.upper0 && f.upper0->exponent > -1.0 + kExponentTol && enough) {
      const double rhi = power_integral(*f.upper0, 0.0, hi);
      const double rlo = (f.lower0 && f.lower0->exponent > -1.0 + kExponentTol) ? power_integral(*f.lower0, 0.0, hi) : 0.0;
      const double half = 0.5 * (rhi - rlo);
      const double tgt = target_for(cfg, res.value + rlo);
      if (half <= tgt || hi <= f.floor) {
        res.value += 0.5 * (rhi + rlo);
        res.error_estimate += half;
        if (half > 10.0 * tgt) {
          res.converged = false;
          res.note = "remainder below resolution floor only bounded";
        }
        return res;
      }
    }
    if (hi <= f.floor) {
      res.converged = false;
      res.error_estimate = kInf;
      res.note = "resolution floor reached without a power bound";
      return res;
    }
    const double lo = std::max(hi / kShell, f.floor);
    if (lo < 1e-300) break;
    const auto shell = log_direct(f, lo, hi, cfg);
    res.value += shell.value;
    res.error_estimate += shell.error_estimate;
    res.evaluations += shell.evaluations;
    res.converged = res.converged && shell.converged;
    incs.push_back(shell.value);
    sums.push_back(res.value);
    hi = lo;
    const std::size_t n = incs.size();
    if (n >= 3) {
      const double d0 = incs[n - 1], d1 = incs[n - 2], d2 = incs[n - 3];
      if (d0 == 0.0 && d1 == 0.0 && d2 == 0.0) return res;
      const bool bounded = hi <= f.near_radius && f.upper0 && f.upper0->exponent > -1.0 + kExponentTol;
      if (!bounded && d2 > 0.0 && d1 >= 0.999 * d2 && d0 >= 0.999 * d1) {
        res.diverged = true;
        res.converged = false;
        res.error_estimate = kInf;
        res.note = "shell increments do not decay toward 0";
        return res;
      }
      if (d0 > 0.0 && d1 > 0.0 && d0 < 0.9 * d1 && d1 < 0.95 * d2) {
        const double q = d0 / d1;
        const double tail = d0 * q / (1.0 - q);
        if (tail <= target_for(cfg, res.value)) {
          res.value += tail;
          res.error_estimate += tail;
          return res;
        }
      }
    }
  }
  res.converged = false;
  res.error_estimate = kInf;
  res.note = "near-zero shells exhausted";
  return res;
}

IntegralResult near_infinity(const RadialIntegrand& f, double d, const QuadConfig& cfg) {
  IntegralResult res;
  std::vector<double> incs;
  double lo = d;
  for (int k = 0; k < 700; ++k) {
    if (lo >= f.support) return res;
    const bool enough = static_cast<int>(incs.size()) >= kMinShells;
    if (lo >= f.far_radius && f.lower_inf && f.lower_inf->exponent >= -1.0 - kExponentTol && enough) {
      res.diverged = true;
      res.converged = false;
      res.error_estimate = kInf;
      res.note = "lower power bound is not integrable at infinity";
      return res;
    }
    if (lo >= f.far_radius && f.upper_inf && f.upper_inf->exponent < -1.0 - kExponentTol && enough) {
      const double rhi = power_integral(*f.upper_inf, lo, kInf);
      const double rlo =
          (f.lower_inf && f.lower_inf->exponent < -1.0 - kExponentTol) ? power_integral(*f.lower_inf, lo, kInf) : 0.0;
      const double half = 0.5 * (rhi - rlo);
      if (half <= target_for(cfg, res.value + rlo)) {
        res.value += 0.5 * (rhi + rlo);
        res.error_estimate += half;
        return res;
      }
    }
    const double hi = std::min(lo * kShell, f.support);
    if (!std::isfinite(hi) || hi > 1e300) break;
    const auto shell = log_direct(f, lo, hi, cfg);
    res.value += shell.value;
    res.error_estimate += shell.error_estimate;
    res.evaluations += shell.evaluations;
    res.converged = res.converged && shell.converged;
    incs.push_back(shell.value);
    lo = hi;
    const std::size_t n = incs.size();
    if (n >= 3) {
      const double d0 = incs[n - 1], d1 = incs[n - 2], d2 = incs[n - 3];
      if (d0 == 0.0 && d1 == 0.0 && d2 == 0.0) return res;
      const bool bounded = lo >= f.far_radius && f.upper_inf && f.upper_inf->exponent < -1.0 - kExponentTol;
      if (!bounded && d2 > 0.0 && d1 >= 0.999 * d2 && d0 >= 0.999 * d1) {
        res.diverged = true;
        res.converged = false;
        res.error_estimate = kInf;
        res.note = "shell increments do not decay at infinity";
        return res;
      }
      const bool geometric = d0 > 0.0 && d1 > 0.0 && d0 < 0.9 * d1 && d1 < 0.95 * d2;
      if (geometric) {
        const double q = d0 / d1;
        const double tail = d0 * q / (1.0 - q);
        if (tail <= target_for(cfg, res.value) || lo >= kTruncation) {
          // beyond the truncation radius the geometric tail is an estimate, not a bound
          res.value += tail;
          res.error_estimate += tail;
          if (tail > 10.0 * target_for(cfg, res.value)) {
            res.converged = false;
            res.note = "truncated at 1e6 with estimated remainder";
          }
          return res;
        }
      } else if (lo >= kTruncation && !(f.upper_inf && lo >= f.far_radius)) {
        res.converged = false;
        res.error_estimate = kInf;
        res.note = "truncated at 1e6 without a remainder estimate";
        return res;
      }
    }
  }
  res.converged = false;
  res.error_estimate = kInf;
  res.note = "far shells exhausted";
  return res;
}

}  // namespace

// ---------------------------------------------------------------- config / result

void QuadConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("quadrature.rel_tol", "must be positive");
  if (!(abs_tol > 0.0)) throw ValidationError("quadrature.abs_tol", "must be positive");
  if (max_subdivisions < 64) throw ValidationError("quadrature.max_subdivisions", "must be >= 64");
  if (!(split_radius > 0.0)) throw ValidationError("quadrature.split_radius", "must be positive");
}

QuadConfig QuadConfig::tightened(double factor) const {
  QuadConfig c = *this;
  c.rel_tol *= factor;
  c.abs_tol *= factor;
  return c;
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& o) {
  value += o.value;
  error_estimate += o.error_estimate;
  converged = converged && o.converged;
  diverged = diverged || o.diverged;
  evaluations += o.evaluations;
  if (!o.note.empty()) note = note.empty() ? o.note : note + "; " + o.note;
  return *this;
}

IntegralResult operator+(IntegralResult a, const IntegralResult& b) { return a += b; }

// ---------------------------------------------------------------- adaptive core

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadConfig& cfg, const std::vector<double>& breaks) {
  IntegralResult res;
  if (!(b > a)) return res;
  long evals = 0;
  auto fc = [&](double x) {
    ++evals;
    return f(x);
  };
  auto worse = [](const Panel& x, const Panel& y) { return x.err < y.err; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
  std::vector<Panel> frozen;

  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    auto p = gk21(fc, cuts[i], cuts[i + 1]);
    total += p.value;
    err += p.err;
    heap.push(p);
  }
  long panels = static_cast<long>(heap.size());
  long iter = 0;
  while (!heap.empty() && err > std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol) &&
         panels < cfg.max_subdivisions) {
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e-14 * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen.push_back(p);
      continue;
    }
    auto l = gk21(fc, p.a, mid);
    auto r = gk21(fc, mid, p.b);
    total += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
    ++panels;
    if (++iter % 4096 == 0) {
      // refresh running sums against drift
      auto copy = heap;
      double t = 0.0, e = 0.0;
      while (!copy.empty()) {
        t += copy.top().value;
        e += copy.top().err;
        copy.pop();
      }
      for (const auto& q : frozen) {
        t += q.value;
        e += q.err;
      }
      total = t;
      err = e;
    }
  }
  // final ordered summation for determinism
  std::vector<Panel> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  total = 0.0;
  err = 0.0;
  for (const auto& p : all) {
    total += p.value;
    err += p.err;
  }
  res.value = total;
  res.error_estimate = err;
  res.evaluations = evals;
  res.converged = err <= std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol);
  if (!res.converged) res.note = "subdivision limit reached";
  return res;
}

IntegralResult integrate_radial(const RadialIntegrand& f, double a, double b, const QuadConfig& cfg) {
  if (a < 0.0 || !(b > a)) return {};
  b = std::min(b, f.support);
  if (!(b > a)) return {};
  IntegralResult res;
  double lo = a, hi = b;
  if (a == 0.0) {
    const double c = std::min(b, cfg.split_radius);
    res += near_zero(f, c, cfg);
    lo = c;
  }
  if (std::isinf(b)) {
    const double d = std::max(lo, cfg.split_radius);
    res += near_infinity(f, d, cfg);
    hi = d;
  }
  if (hi > lo) {
    if (lo < f.floor) {
      const double m = std::min(f.floor, hi);
      res += below_floor(f, lo, m, cfg);
      lo = m;
    }
    if (hi > lo) res += log_direct(f, lo, hi, cfg);
  }
  return res;
}

RadialIntegrand mass_integrand(const KernelSpec& spec, double w) {
  const auto env = mass_envelope(spec);
  RadialIntegrand f;
  if (w == 0.0)
    f.g = [spec](double r) { return radial_mass(spec, r); };
  else
    f.g = [spec, w](double r) { return std::pow(r, w) * radial_mass(spec, r); };
  auto shift = [w](std::optional<PowerLaw> p) {
    if (p) p->exponent += w;
    return p;
  };
  f.lower0 = shift(env.lower0);
  f.upper0 = shift(env.upper0);
  f.near_radius = env.near_radius;
  f.lower_inf = shift(env.lower_inf);
  f.upper_inf = shift(env.upper_inf);
  f.far_radius = (env.lower_inf || env.upper_inf) ? env.far_radius : kInf;
  f.support = env.support;
  f.floor = env.floor;
  f.breaks = mass_breaks(spec);
  return f;
}

RadialIntegrand side_integrand(const KernelSpec& spec, int side) {
  if (spec.dim != 1) throw ArgumentError("one-sided integrals need N = 1");
  RadialIntegrand f = mass_integrand(spec, 0.0);
  f.g = [spec, side](double r) { return eval_density(spec, side * r); };
  auto half = [](std::optional<PowerLaw> p) {
    if (p) p->coef *= 0.5;
    return p;
  };
  if (spec.is_even()) {
    f.lower0 = half(f.lower0);
    f.upper0 = half(f.upper0);
    f.lower_inf = half(f.lower_inf);
    f.upper_inf = half(f.upper_inf);
  } else if (spec.family == Family::asymmetric_pair) {
    const auto& p = side > 0 ? spec.plus : spec.minus;
    const PowerLaw exact{p.coef, -1.0 - p.order};
    f.lower0 = f.upper0 = f.lower_inf = f.upper_inf = exact;
    f.near_radius = kInf;
    f.far_radius = 0.0;
  } else {
    // the sum of both sides bounds each side from above
    f.lower0.reset();
    if (f.lower_inf) f.lower_inf->coef *= 0.5;
  }
  return f;
}

// ---------------------------------------------------------------- kernel quantities

IntegralResult annulus_integral(const KernelSpec& spec, double r, double R, const QuadConfig& cfg) {
  if (!(r > 0.0)) throw ArgumentError("annulus_integral needs r > 0");
  if (R < r) throw ArgumentError("annulus_integral needs r <= R");
  if (R == r) return {};
  return integrate_radial(mass_integrand(spec), r, R, cfg);
}

IntegralResult first_moment(const KernelSpec& spec, double r, const QuadConfig& cfg) {
  if (!(r > 0.0)) throw ArgumentError("first_moment needs r > 0");
  auto res = integrate_radial(mass_integrand(spec, 1.0), 0.0, r, cfg);
  if (res.diverged) throw DivergenceError("first moment diverges near 0: " + res.note);
  return res;
}

IntegralResult L_total(const KernelSpec& spec, double r, const QuadConfig& cfg) {
  auto m = first_moment(spec, r, cfg);
  m.value /= r;
  m.error_estimate /= r;
  auto t = annulus_integral(spec, r, kInf, cfg);
  if (t.diverged) throw DivergenceError("tail of j is not integrable: " + t.note);
  return m + t;
}

IntegralResult one_sided_tail(const KernelSpec& spec, int side, double d, const QuadConfig& cfg) {
  if (!(d > 0.0)) throw ArgumentError("one_sided_tail needs d > 0");
  return integrate_radial(side_integrand(spec, side), d, kInf, cfg);
}

// ---------------------------------------------------------------- bounded functions

BoundedFunction BoundedFunction::constant_value(double c) {
  BoundedFunction g;
  g.constant = c;
  g.far_bound = std::abs(c);
  return g;
}

BoundedFunction BoundedFunction::table(std::vector<double> nodes, std::vector<double> values,
                                       std::optional<double> far_bound) {
  if (nodes.size() < 2 || nodes.size() != values.size())
    throw ArgumentError("bounded function table needs >= 2 matching nodes and values");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw ArgumentError("bounded function nodes must increase");
  BoundedFunction g;
  g.nodes = std::move(nodes);
  g.values = std::move(values);
  g.far_bound = far_bound;
  return g;
}

double BoundedFunction::operator()(double x) const {
  if (constant) return *constant;
  if (x < nodes.front() || x > nodes.back()) return far_bound.value_or(0.0);
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t i = it == nodes.end() ? nodes.size() - 2 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

double BoundedFunction::sup_abs() const {
  if (constant) return std::abs(*constant);
  double m = far_bound.value_or(0.0);
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double tail_integral(const BoundedFunction& g, const Point& x, double rho, const KernelSpec& spec,
                     const QuadConfig& cfg) {
  if (!(rho > 0.0)) throw ArgumentError("tail_integral needs rho > 0");
  if (g.constant) {
    if (*g.constant == 0.0) return 0.0;
    auto t = annulus_integral(spec, rho, kInf, cfg);
    if (t.diverged) throw DivergenceError("tail of j is not integrable");
    return std::abs(*g.constant) * t.value;
  }
  if (spec.dim != 1) throw ArgumentError("tabulated tails are implemented for N = 1");
  if (!g.far_bound) {
    auto t = annulus_integral(spec, rho, kInf, cfg);
    if (t.diverged || !t.converged)
      throw ArgumentError("tabulated function without far-field bound and non-integrable tail");
    throw ArgumentError("tabulated function needs a declared far-field bound");
  }
  const double x0 = x[0];
  double total = 0.0;
  // tabulated part: y in [nodes.front(), nodes.back()] with |y - x0| > rho
  auto piece = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    std::vector<double> br;
    for (double n : g.nodes)
      if (n > lo && n < hi) br.push_back(n);
    auto h = [&](double y) { return std::abs(g(y)) * eval_density(spec, y - x0); };
    total += integrate(h, lo, hi, cfg, br).value;
  };
  const double a = g.nodes.front(), b = g.nodes.back();
  piece(a, std::min(b, x0 - rho));
  piece(std::max(a, x0 + rho), b);
  // outside the table: far_bound times the remaining tail mass on each side
  const double B = *g.far_bound;
  if (B > 0.0) {
    total += B * one_sided_tail(spec, +1, std::max(b - x0, rho), cfg).value;
    total += B * one_sided_tail(spec, -1, std::max(x0 - a, rho), cfg).value;
  }
  return total;
}

// ---------------------------------------------------------------- variation

namespace {

double jump_at(const KernelSpec& spec, int side, double b) {
  const double left = ray_profile(spec, side, std::nextafter(b, 0.0));
  const double right = ray_profile(spec, side, std::nextafter(b, kInf));
  return std::abs(left - right);
}

// Variation of one ray profile on (r,R) weighted by rho^{N-1}.
IntegralResult ray_variation(const KernelSpec& spec, int side, double r, double R, const QuadConfig& cfg) {
  const int N = spec.dim;
  auto breaks = mass_breaks(spec);
  if (ray_derivative(spec, side, 0.5 * (r + R))) {
    RadialIntegrand f;
    f.g = [&spec, side, N](double rho) {
      return std::abs(*ray_derivative(spec, side, rho)) * (N == 2 ? rho : 1.0);
    };
    f.breaks = breaks;
    auto res = integrate_radial(f, r, R, cfg);
    for (double b : breaks)
      if (b > r && b < R) res.value += jump_at(spec, side, b) * (N == 2 ? b : 1.0);
    return res;
  }
  // finite differences on refined log grids; increasing lower bound
  IntegralResult res;
  double prev = -1.0;
  std::vector<double> history;
  for (int m = 4; m <= 18; ++m) {
    const long n = 1L << m;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n) + breaks.size() + 1);
    for (long i = 0; i <= n; ++i) xs.push_back(r * std::pow(R / r, static_cast<double>(i) / n));
    for (double b : breaks)
      if (b > r && b < R) {
        xs.push_back(std::nextafter(b, 0.0));
        xs.push_back(std::nextafter(b, kInf));
      }
    std::sort(xs.begin(), xs.end());
    double v = 0.0;
    double last = ray_profile(spec, side, xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double cur = ray_profile(spec, side, xs[i]);
      v += std::abs(cur - last) * (N == 2 ? 0.5 * (xs[i] + xs[i - 1]) : 1.0);
      last = cur;
    }
    res.evaluations += static_cast<long>(xs.size());
    history.push_back(v);
    const std::size_t h = history.size();
    if (h >= 4 && history[h - 1] > 2.0 * history[h - 2] && history[h - 2] > 2.0 * history[h - 3] &&
        history[h - 3] > 2.0 * history[h - 4]) {
      res.value = kInf;
      res.diverged = true;
      res.converged = false;
      res.error_estimate = kInf;
      res.note = "finite-difference variation doubles under refinement";
      return res;
    }
    if (prev >= 0.0 && std::abs(v - prev) <= cfg.rel_tol * std::max(v, 1e-300)) {
      res.value = v;
      res.error_estimate = std::abs(v - prev);
      res.note = "finite-difference lower bound";
      return res;
    }
    prev = v;
  }
  res.value = prev;
  res.converged = false;
  res.note = "finite-difference lower bound, refinement not settled";
  return res;
}

}  // namespace

IntegralResult bv_estimate(const KernelSpec& spec, double r, double R, const QuadConfig& cfg) {
  if (!(r > 0.0 && R > r)) throw ArgumentError("bv_estimate needs 0 < r < R");
  if (spec.dim == 1) {
    auto res = ray_variation(spec, +1, r, R, cfg);
    res += ray_variation(spec, -1, r, R, cfg);
    if (res.diverged) res.value = kInf;
    return res;
  }
  auto res = ray_variation(spec, +1, r, R, cfg);
  res.value *= angular_measure(spec);
  res.error_estimate *= angular_measure(spec);
  if (spec.family == Family::cone) {
    // boundary rays of the cone carry the jump of the angular indicator
    RadialIntegrand f;
    f.g = [&spec](double rho) { return ray_profile(spec, +1, rho); };
    f.breaks = mass_breaks(spec);
    auto b = integrate_radial(f, r, R, cfg);
    b.value *= arc_boundary_count(spec);
    b.error_estimate *= arc_boundary_count(spec);
    res += b;
  }
  if (res.diverged) res.value = kInf;
  return res;
}

}  // namespace nlreg
