#include "nlreg/kernel.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace nlreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * M_PI;

double norm(const Point& z, int dim) {
  return dim == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

bool in_arcs(const std::vector<Arc>& arcs, double angle) {
  const double a = wrap_angle(angle);
  for (const auto& arc : arcs) {
    const double lo = wrap_angle(arc.lo);
    const double len = arc.hi - arc.lo;
    double d = a - lo;
    if (d < 0) d += kTwoPi;
    if (d <= len) return true;
  }
  return false;
}

// Exponent of the oscillating example: (cos(1/h)+4)/6.
double osc_exponent(double rho) { return (std::cos(1.0 / rho) + 4.0) / 6.0; }

double osc_side(int side, double rho) {
  double v = std::pow(rho, -1.0 - osc_exponent(rho));
  if (rho <= 1.0) v += side * std::pow(rho, -7.0 / 6.0);
  return v;
}

double osc_side_derivative(int side, double rho) {
  const double e = osc_exponent(rho);
  const double de = std::sin(1.0 / rho) / (6.0 * rho * rho);
  const double main = std::pow(rho, -1.0 - e);
  double d = main * (-de * std::log(rho) - (1.0 + e) / rho);
  if (rho < 1.0) d += side * (-7.0 / 6.0) * std::pow(rho, -13.0 / 6.0);
  return d;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

// ---------------------------------------------------------------- tables

void LogLogTable::validate(const std::string& field) const {
  if (radii.size() < 2) throw ValidationError(field, "table needs at least two nodes");
  if (radii.size() != values.size())
    throw ValidationError(field, "radii and values differ in length");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ValidationError(field + ".radii", "radii must be positive");
    if (!(values[i] > 0.0)) throw ValidationError(field + ".values", "values must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw ValidationError(field + ".radii", "radii must be strictly increasing");
  }
}

double LogLogTable::operator()(double r) const {
  if (r < radii.front() || r > radii.back())
    throw ExtrapolationError("tabulated density queried at r=" + format_double(r) +
                             " outside [" + format_double(radii.front()) + ", " +
                             format_double(radii.back()) + "]");
  auto it = std::upper_bound(radii.begin(), radii.end(), r);
  std::size_t i = it == radii.end() ? radii.size() - 2
                                    : static_cast<std::size_t>(it - radii.begin()) - 1;
  const double t = std::log(r / radii[i]) / std::log(radii[i + 1] / radii[i]);
  return values[i] * std::pow(values[i + 1] / values[i], t);
}

double LogLogTable::derivative(double r) const {
  const double v = (*this)(r);
  auto it = std::upper_bound(radii.begin(), radii.end(), r);
  std::size_t i = it == radii.end() ? radii.size() - 2
                                    : static_cast<std::size_t>(it - radii.begin()) - 1;
  const double slope = std::log(values[i + 1] / values[i]) / std::log(radii[i + 1] / radii[i]);
  return slope * v / r;
}

// ---------------------------------------------------------------- l profile

double LFunction::operator()(double r) const {
  if (r > cutoff) return 0.0;
  switch (kind) {
    case ProfileKind::constant: return level;
    case ProfileKind::one_minus_sin_log: return 1.0 - std::sin(std::log(r));
    case ProfileKind::power: return std::pow(r, -exponent);
    case ProfileKind::tabulated: return table(r);
  }
  return 0.0;
}

double LFunction::derivative(double r) const {
  if (r > cutoff) return 0.0;
  switch (kind) {
    case ProfileKind::constant: return 0.0;
    case ProfileKind::one_minus_sin_log: return -std::cos(std::log(r)) / r;
    case ProfileKind::power: return -exponent * std::pow(r, -exponent - 1.0);
    case ProfileKind::tabulated: return table.derivative(r);
  }
  return 0.0;
}

double LFunction::sup() const {
  switch (kind) {
    case ProfileKind::constant: return level;
    case ProfileKind::one_minus_sin_log: return 2.0;
    case ProfileKind::power: return exponent > 0 ? kInf : std::pow(cutoff, -exponent);
    case ProfileKind::tabulated: return *std::max_element(table.values.begin(), table.values.end());
  }
  return kInf;
}

// ---------------------------------------------------------------- spec

void KernelSpec::validate() const {
  if (dim != 1 && dim != 2) throw ValidationError("kernel.dimension", "must be 1 or 2");
  if (!(lambda >= 1.0)) throw ValidationError("kernel.lambda", "must be >= 1");
  if (gamma_hint && !(*gamma_hint > 0.0 && *gamma_hint <= 1.0))
    throw ValidationError("kernel.gamma_hint", "must lie in (0,1]");
  auto check_ell = [&] {
    if (!(ell.cutoff > 0.0)) throw ValidationError("kernel.ell.cutoff", "must be positive");
    if (ell.kind == ProfileKind::constant && !(ell.level > 0.0))
      throw ValidationError("kernel.ell.level", "must be positive");
    if (ell.kind == ProfileKind::tabulated) ell.table.validate("kernel.ell");
    if (ell.kind == ProfileKind::power && std::isinf(ell.cutoff) && !(ell.exponent > 0.0))
      throw ValidationError("kernel.ell.exponent", "must be positive when the cutoff is infinite");
  };
  switch (family) {
    case Family::fractional:
      if (!(s > 0.0 && s < 1.0)) throw ValidationError("kernel.s", "must lie in (0,1)");
      break;
    case Family::radial: check_ell(); break;
    case Family::cone: {
      if (dim != 2) throw ValidationError("kernel.dimension", "cone kernels need N = 2");
      if (arcs.empty()) throw ValidationError("kernel.arcs", "arc set is empty");
      check_ell();
      double total = 0.0;
      for (const auto& a : arcs) {
        if (!(a.hi > a.lo)) throw ValidationError("kernel.arcs", "arc with nonpositive length");
        total += a.hi - a.lo;
      }
      if (total >= kTwoPi) throw ValidationError("kernel.arcs", "arcs cover the whole circle");
      for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t k = i + 1; k < arcs.size(); ++k) {
          // disjointness: the start of one arc must not lie inside another
          if (in_arcs({arcs[i]}, arcs[k].lo) || in_arcs({arcs[k]}, arcs[i].lo))
            throw ValidationError("kernel.arcs", "arcs overlap");
        }
      // A = -A: every arc must have an antipodal partner
      for (const auto& a : arcs) {
        bool found = false;
        for (const auto& b : arcs) {
          double d = wrap_angle(b.lo - (a.lo + M_PI));
          d = std::min(d, kTwoPi - d);
          if (d < 1e-9 && std::abs((b.hi - b.lo) - (a.hi - a.lo)) < 1e-9) found = true;
        }
        if (!found) throw ValidationError("kernel.arcs", "arc set is not symmetric (A != -A)");
      }
      break;
    }
    case Family::custom:
      switch (custom.kind) {
        case CustomKind::indicator_ball:
          if (!(custom.radius > 0.0)) throw ValidationError("kernel.custom.radius", "must be positive");
          if (!(custom.height > 0.0)) throw ValidationError("kernel.custom.height", "must be positive");
          break;
        case CustomKind::oscillating_power:
          if (dim != 1) throw ValidationError("kernel.dimension", "oscillating_power needs N = 1");
          break;
        case CustomKind::tabulated: custom.table.validate("kernel.custom"); break;
      }
      break;
    case Family::asymmetric_pair:
      if (dim != 1) throw ValidationError("kernel.dimension", "asymmetric pairs need N = 1");
      for (const auto* side : {&plus, &minus}) {
        const std::string f = side == &plus ? "kernel.plus" : "kernel.minus";
        if (!(side->coef > 0.0)) throw ValidationError(f + ".coef", "must be positive");
        if (!(side->order > 0.0 && side->order < 1.0))
          throw ValidationError(f + ".order", "must lie in (0,1)");
      }
      break;
  }
}

bool KernelSpec::is_even() const {
  if (family == Family::asymmetric_pair)
    return plus.coef == minus.coef && plus.order == minus.order;
  if (family == Family::custom && custom.kind == CustomKind::oscillating_power) return false;
  return true;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::fractional: return "fractional";
    case Family::radial: return "radial";
    case Family::cone: return "cone";
    case Family::custom: return "custom";
    case Family::asymmetric_pair: return "asymmetric_pair";
  }
  return "?";
}

std::string mode_name(KernelMode m) {
  switch (m) {
    case KernelMode::translation_invariant: return "translation_invariant";
    case KernelMode::symmetrized: return "symmetrized";
    case KernelMode::x_modulated: return "x_modulated";
  }
  return "?";
}

std::string KernelSpec::describe() const {
  std::ostringstream o;
  o << family_name(family) << " N=" << dim;
  switch (family) {
    case Family::fractional: o << " s=" << s; break;
    case Family::asymmetric_pair:
      o << " plus=" << plus.coef << "|h|^-" << 1 + plus.order << " minus=" << minus.coef
        << "|h|^-" << 1 + minus.order;
      break;
    case Family::custom:
      o << (custom.kind == CustomKind::indicator_ball      ? " indicator_ball"
            : custom.kind == CustomKind::oscillating_power ? " oscillating_power"
                                                           : " tabulated");
      break;
    default: break;
  }
  return o.str();
}

// ---------------------------------------------------------------- evaluation

double eval_density(const KernelSpec& spec, const Point& z) {
  const double r = norm(z, spec.dim);
  if (r == 0.0) throw SingularPointError("density evaluated at z = 0");
  const int N = spec.dim;
  switch (spec.family) {
    case Family::fractional: return std::pow(r, -N - 2.0 * spec.s);
    case Family::radial: return spec.ell(r) * std::pow(r, -N);
    case Family::cone:
      if (!in_arcs(spec.arcs, std::atan2(z[1], z[0]))) return 0.0;
      return spec.ell(r) / (r * r);
    case Family::custom:
      switch (spec.custom.kind) {
        case CustomKind::indicator_ball: return r < spec.custom.radius ? spec.custom.height : 0.0;
        case CustomKind::oscillating_power: return osc_side(z[0] > 0 ? 1 : -1, r);
        case CustomKind::tabulated: return spec.custom.table(r);
      }
      break;
    case Family::asymmetric_pair: {
      const auto& p = z[0] > 0 ? spec.plus : spec.minus;
      return p.coef * std::pow(r, -1.0 - p.order);
    }
  }
  return 0.0;
}

double eval_density(const KernelSpec& spec, double h) { return eval_density(spec, Point{h, 0.0}); }

double reference_density(const KernelSpec& spec, const Point& z) {
  if (spec.family == Family::asymmetric_pair)
    return 0.5 * (eval_density(spec, z) + eval_density(spec, Point{-z[0], -z[1]}));
  return eval_density(spec, z);
}

double TwoPointKernel::weight(double x) const {
  return mode == KernelMode::x_modulated ? 1.0 + weight_delta * std::sin(weight_omega * x) : 1.0;
}

double TwoPointKernel::operator()(const Point& x, const Point& y) const {
  const Point h{y[0] - x[0], y[1] - x[1]};
  switch (mode) {
    case KernelMode::translation_invariant: return eval_density(base, h);
    case KernelMode::symmetrized:
      return 0.5 * (eval_density(base, h) + eval_density(base, Point{-h[0], -h[1]}));
    case KernelMode::x_modulated: return weight(x[0]) * eval_density(base, h);
  }
  return 0.0;
}

void TwoPointKernel::validate() const {
  base.validate();
  if (mode == KernelMode::x_modulated) {
    if (!(std::abs(weight_delta) < 1.0))
      throw ValidationError("kernel.weight_delta", "must satisfy |delta| < 1");
    if (!(weight_omega > 0.0)) throw ValidationError("kernel.weight_omega", "must be positive");
    const double need = std::max(1.0 + std::abs(weight_delta), 1.0 / (1.0 - std::abs(weight_delta)));
    if (base.lambda < need)
      throw ValidationError("kernel.lambda", "weight range needs lambda >= " + format_double(need));
  }
}

bool TwoPointKernel::is_symmetric() const {
  if (mode == KernelMode::symmetrized) return true;
  if (mode == KernelMode::x_modulated) return weight_delta == 0.0 && base.is_even();
  return base.is_even();
}

bool TwoPointKernel::is_translation_invariant() const {
  return mode != KernelMode::x_modulated || weight_delta == 0.0;
}

SymAntisym decompose(const TwoPointKernel& K, const Point& x, const Point& y) {
  const double kxy = K(x, y);
  const double kyx = K(y, x);
  return {0.5 * (kxy + kyx), 0.5 * (kxy - kyx)};
}

double comparability_violation(const TwoPointKernel& K, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = K.base.lambda;
  const int N = K.base.dim;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Point x{2.0 * unit(rng) - 1.0, N == 2 ? 2.0 * unit(rng) - 1.0 : 0.0};
    const double rho = std::exp(std::log(1e-6) + unit(rng) * std::log(1e7));
    Point h{rho, 0.0};
    if (N == 1) {
      if (unit(rng) < 0.5) h[0] = -rho;
    } else {
      const double a = kTwoPi * unit(rng);
      h = {rho * std::cos(a), rho * std::sin(a)};
    }
    const Point y{x[0] + h[0], x[1] + h[1]};
    const double k = K(x, y);
    const double jr = reference_density(K.base, Point{y[0] - x[0], y[1] - x[1]});
    if (jr == 0.0) {
      if (k != 0.0) return kInf;
      continue;
    }
    worst = std::max({worst, k / (L * jr) - 1.0, jr / (L * k) - 1.0});
  }
  return std::max(worst, 0.0);
}

// ---------------------------------------------------------------- radial reductions

double sphere_measure(int dim) { return dim == 1 ? 2.0 : kTwoPi; }

double angular_measure(const KernelSpec& spec) {
  if (spec.family != Family::cone) return sphere_measure(spec.dim);
  double total = 0.0;
  for (const auto& a : spec.arcs) total += a.hi - a.lo;
  return total;
}

int arc_boundary_count(const KernelSpec& spec) {
  return spec.family == Family::cone ? 2 * static_cast<int>(spec.arcs.size()) : 0;
}

double PowerLaw::operator()(double rho) const { return coef * std::pow(rho, exponent); }

double radial_mass(const KernelSpec& spec, double rho) {
  const int N = spec.dim;
  const double S = sphere_measure(N);
  switch (spec.family) {
    case Family::fractional: return S * std::pow(rho, -1.0 - 2.0 * spec.s);
    case Family::radial: return S * spec.ell(rho) / rho;
    case Family::cone: return angular_measure(spec) * spec.ell(rho) / rho;
    case Family::custom:
      switch (spec.custom.kind) {
        case CustomKind::indicator_ball:
          return rho < spec.custom.radius ? S * spec.custom.height * std::pow(rho, N - 1) : 0.0;
        case CustomKind::oscillating_power: return osc_side(1, rho) + osc_side(-1, rho);
        case CustomKind::tabulated:
          if (rho > spec.custom.table.radii.back()) return 0.0;
          return S * spec.custom.table(rho) * std::pow(rho, N - 1);
      }
      break;
    case Family::asymmetric_pair:
      return spec.plus.coef * std::pow(rho, -1.0 - spec.plus.order) +
             spec.minus.coef * std::pow(rho, -1.0 - spec.minus.order);
  }
  return 0.0;
}

MassEnvelope mass_envelope(const KernelSpec& spec) {
  MassEnvelope e;
  const int N = spec.dim;
  const double S = sphere_measure(N);
  e.support = kInf;
  auto ell_case = [&](double ang) {
    const auto& l = spec.ell;
    e.support = l.cutoff;
    e.near_radius = l.cutoff;
    switch (l.kind) {
      case ProfileKind::constant:
        e.lower0 = e.upper0 = PowerLaw{ang * l.level, -1.0};
        break;
      case ProfileKind::one_minus_sin_log: e.upper0 = PowerLaw{2.0 * ang, -1.0}; break;
      case ProfileKind::power:
        e.lower0 = e.upper0 = PowerLaw{ang, -1.0 - l.exponent};
        if (std::isinf(l.cutoff)) {
          e.lower_inf = e.upper_inf = PowerLaw{ang, -1.0 - l.exponent};
          e.far_radius = 0.0;
        }
        break;
      case ProfileKind::tabulated:
        e.support = std::min(l.cutoff, l.table.radii.back());
        e.floor = l.table.radii.front();
        break;
    }
  };
  switch (spec.family) {
    case Family::fractional: {
      PowerLaw p{S, -1.0 - 2.0 * spec.s};
      e.lower0 = e.upper0 = e.lower_inf = e.upper_inf = p;
      e.near_radius = kInf;
      e.far_radius = 0.0;
      break;
    }
    case Family::radial: ell_case(S); break;
    case Family::cone: ell_case(angular_measure(spec)); break;
    case Family::custom:
      switch (spec.custom.kind) {
        case CustomKind::indicator_ball:
          e.lower0 = e.upper0 = PowerLaw{S * spec.custom.height, static_cast<double>(N - 1)};
          e.near_radius = spec.custom.radius;
          e.support = spec.custom.radius;
          break;
        case CustomKind::oscillating_power:
        {
          e.lower0 = PowerLaw{2.0, -1.5};
          e.upper0 = PowerLaw{2.0, -11.0 / 6.0};
          e.near_radius = 1.0;
          // exponent >= 5/6 - 1/(12 rho^2), and log(rho)/rho^2 decreases past rho = 1e3
          const double far = 1e3;
          e.lower_inf = PowerLaw{2.0, -11.0 / 6.0};
          e.upper_inf = PowerLaw{2.0 * std::exp(std::log(far) / (12.0 * far * far)), -11.0 / 6.0};
          e.far_radius = far;
          e.floor = std::ldexp(1.0, -14);
        }
          break;
        case CustomKind::tabulated:
          e.support = spec.custom.table.radii.back();
          e.floor = spec.custom.table.radii.front();
          break;
      }
      break;
    case Family::asymmetric_pair: {
      const double c = spec.plus.coef + spec.minus.coef;
      const double pmin = std::min(spec.plus.order, spec.minus.order);
      const double pmax = std::max(spec.plus.order, spec.minus.order);
      e.lower0 = PowerLaw{c, -1.0 - pmin};
      e.upper0 = PowerLaw{c, -1.0 - pmax};
      e.near_radius = 1.0;
      e.lower_inf = PowerLaw{c, -1.0 - pmax};
      e.upper_inf = PowerLaw{c, -1.0 - pmin};
      e.far_radius = 1.0;
      break;
    }
  }
  return e;
}

std::vector<double> mass_breaks(const KernelSpec& spec) {
  std::vector<double> b;
  switch (spec.family) {
    case Family::radial:
    case Family::cone:
      if (std::isfinite(spec.ell.cutoff)) b.push_back(spec.ell.cutoff);
      if (spec.ell.kind == ProfileKind::tabulated)
        for (double r : spec.ell.table.radii) b.push_back(r);
      break;
    case Family::custom:
      if (spec.custom.kind == CustomKind::indicator_ball) b.push_back(spec.custom.radius);
      if (spec.custom.kind == CustomKind::oscillating_power) b.push_back(1.0);
      if (spec.custom.kind == CustomKind::tabulated)
        for (double r : spec.custom.table.radii) b.push_back(r);
      break;
    default: break;
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double ray_profile(const KernelSpec& spec, int side, double rho) {
  if (spec.dim == 1) return eval_density(spec, side * rho);
  if (spec.family == Family::cone) return spec.ell(rho) / (rho * rho);
  return eval_density(spec, Point{rho, 0.0});
}

std::optional<double> ray_derivative(const KernelSpec& spec, int side, double rho) {
  const int N = spec.dim;
  switch (spec.family) {
    case Family::fractional: return -(N + 2.0 * spec.s) * std::pow(rho, -N - 2.0 * spec.s - 1.0);
    case Family::radial:
    case Family::cone:
      if (rho > spec.ell.cutoff) return 0.0;
      if (spec.ell.kind == ProfileKind::tabulated) return std::nullopt;
      return spec.ell.derivative(rho) * std::pow(rho, -N) - N * spec.ell(rho) * std::pow(rho, -N - 1);
    case Family::custom:
      switch (spec.custom.kind) {
        case CustomKind::indicator_ball: return 0.0;
        case CustomKind::oscillating_power: return osc_side_derivative(side, rho);
        case CustomKind::tabulated: return std::nullopt;
      }
      break;
    case Family::asymmetric_pair: {
      const auto& p = side > 0 ? spec.plus : spec.minus;
      return -(1.0 + p.order) * p.coef * std::pow(rho, -2.0 - p.order);
    }
  }
  return std::nullopt;
}

double antisym_ratio(const KernelSpec& spec, double rho) {
  const double jp = eval_density(spec, rho);
  const double jm = eval_density(spec, -rho);
  const double sum = jp + jm;
  if (sum == 0.0) return 0.0;
  const double d = jp - jm;
  return d * d / sum;
}

// ---------------------------------------------------------------- config

namespace {

ProfileKind parse_profile(const std::string& s, const std::string& field) {
  const auto v = lower(s);
  if (v == "constant") return ProfileKind::constant;
  if (v == "one_minus_sin_log") return ProfileKind::one_minus_sin_log;
  if (v == "power") return ProfileKind::power;
  if (v == "tabulated") return ProfileKind::tabulated;
  throw ValidationError(field, "unknown profile kind '" + s + "'");
}

std::string profile_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::one_minus_sin_log: return "one_minus_sin_log";
    case ProfileKind::power: return "power";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "?";
}

LogLogTable read_table(const Config& cfg, const std::string& sec) {
  LogLogTable t;
  t.radii = cfg.get_list(sec, "radii");
  t.values = cfg.get_list(sec, "values");
  return t;
}

void write_table(const LogLogTable& t, Config& cfg, const std::string& sec) {
  auto join = [](const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
    return out;
  };
  cfg.set(sec, "radii", join(t.radii));
  cfg.set(sec, "values", join(t.values));
}

}  // namespace

KernelSpec build_kernel(const Config& cfg, const std::string& section) {
  if (!cfg.has_section(section)) throw ValidationError(section, "missing kernel section");
  KernelSpec k;
  const std::string fam = lower(cfg.require(section, "family"));
  if (fam == "fractional") k.family = Family::fractional;
  else if (fam == "radial") k.family = Family::radial;
  else if (fam == "cone") k.family = Family::cone;
  else if (fam == "custom") k.family = Family::custom;
  else if (fam == "asymmetric_pair") k.family = Family::asymmetric_pair;
  else throw ValidationError(section + ".family", "unknown family '" + fam + "'");

  k.dim = static_cast<int>(cfg.get_long(section, "dimension", 1));
  k.lambda = cfg.get_double(section, "lambda", 1.0);
  if (cfg.has(section, "gamma_hint")) k.gamma_hint = cfg.require_double(section, "gamma_hint");

  const std::string ell_sec = section + ".ell";
  switch (k.family) {
    case Family::fractional:
      k.s = cfg.require_double(section, "s");
      break;
    case Family::radial:
    case Family::cone: {
      if (!cfg.has_section(ell_sec)) throw ValidationError(ell_sec, "missing profile section");
      k.ell.kind = parse_profile(cfg.require(ell_sec, "kind"), ell_sec + ".kind");
      k.ell.cutoff = cfg.get_double(ell_sec, "cutoff", 1.0);
      k.ell.level = cfg.get_double(ell_sec, "level", 1.0);
      k.ell.exponent = cfg.get_double(ell_sec, "exponent", 0.0);
      if (k.ell.kind == ProfileKind::tabulated) k.ell.table = read_table(cfg, ell_sec);
      if (k.family == Family::cone) {
        const auto a = cfg.get_list(section, "arcs");
        if (a.empty()) throw ValidationError(section + ".arcs", "arc set is empty");
        if (a.size() % 2 != 0) throw ValidationError(section + ".arcs", "arcs need lo,hi pairs");
        for (std::size_t i = 0; i < a.size(); i += 2) k.arcs.push_back({a[i], a[i + 1]});
      }
      break;
    }
    case Family::custom: {
      const std::string cs = section + ".custom";
      const std::string kind = lower(cfg.require(cs, "kind"));
      if (kind == "indicator_ball") {
        k.custom.kind = CustomKind::indicator_ball;
        k.custom.radius = cfg.get_double(cs, "radius", 1.0);
        k.custom.height = cfg.get_double(cs, "height", 1.0);
      } else if (kind == "oscillating_power") {
        k.custom.kind = CustomKind::oscillating_power;
      } else if (kind == "tabulated") {
        k.custom.kind = CustomKind::tabulated;
        k.custom.table = read_table(cfg, cs);
      } else {
        throw ValidationError(cs + ".kind", "unknown custom kind '" + kind + "'");
      }
      break;
    }
    case Family::asymmetric_pair:
      k.plus.coef = cfg.require_double(section + ".plus", "coef");
      k.plus.order = cfg.require_double(section + ".plus", "order");
      k.minus.coef = cfg.require_double(section + ".minus", "coef");
      k.minus.order = cfg.require_double(section + ".minus", "order");
      break;
  }
  // the fractional family satisfies (B) with alpha = 1-2s exactly; 2s is stored
  // as the hint (the infimum of admissible gamma) when the user gives none
  if (!k.gamma_hint && k.family == Family::fractional && 2.0 * k.s < 1.0) k.gamma_hint = 2.0 * k.s;
  k.validate();
  return k;
}

TwoPointKernel build_two_point(const Config& cfg, const std::string& section) {
  TwoPointKernel K;
  K.base = build_kernel(cfg, section);
  const std::string m = lower(cfg.get(section, "mode").value_or("translation_invariant"));
  if (m == "translation_invariant") K.mode = KernelMode::translation_invariant;
  else if (m == "symmetrized") K.mode = KernelMode::symmetrized;
  else if (m == "x_modulated") K.mode = KernelMode::x_modulated;
  else throw ValidationError(section + ".mode", "unknown mode '" + m + "'");
  K.weight_delta = cfg.get_double(section, "weight_delta", 0.0);
  K.weight_omega = cfg.get_double(section, "weight_omega", 1.0);
  K.validate();
  return K;
}

void write_kernel(const KernelSpec& k, Config& cfg, const std::string& section) {
  cfg.set(section, "family", family_name(k.family));
  cfg.set(section, "dimension", std::to_string(k.dim));
  cfg.set(section, "lambda", k.lambda);
  if (k.gamma_hint) cfg.set(section, "gamma_hint", *k.gamma_hint);
  const std::string ell_sec = section + ".ell";
  switch (k.family) {
    case Family::fractional: cfg.set(section, "s", k.s); break;
    case Family::radial:
    case Family::cone: {
      cfg.set(ell_sec, "kind", profile_name(k.ell.kind));
      cfg.set(ell_sec, "cutoff", k.ell.cutoff);
      cfg.set(ell_sec, "level", k.ell.level);
      cfg.set(ell_sec, "exponent", k.ell.exponent);
      if (k.ell.kind == ProfileKind::tabulated) write_table(k.ell.table, cfg, ell_sec);
      if (k.family == Family::cone) {
        std::string a;
        for (std::size_t i = 0; i < k.arcs.size(); ++i)
          a += (i ? ", " : "") + format_double(k.arcs[i].lo) + ", " + format_double(k.arcs[i].hi);
        cfg.set(section, "arcs", a);
      }
      break;
    }
    case Family::custom: {
      const std::string cs = section + ".custom";
      switch (k.custom.kind) {
        case CustomKind::indicator_ball:
          cfg.set(cs, "kind", std::string("indicator_ball"));
          cfg.set(cs, "radius", k.custom.radius);
          cfg.set(cs, "height", k.custom.height);
          break;
        case CustomKind::oscillating_power: cfg.set(cs, "kind", std::string("oscillating_power")); break;
        case CustomKind::tabulated:
          cfg.set(cs, "kind", std::string("tabulated"));
          write_table(k.custom.table, cfg, cs);
          break;
      }
      break;
    }
    case Family::asymmetric_pair:
      cfg.set(section + ".plus", "coef", k.plus.coef);
      cfg.set(section + ".plus", "order", k.plus.order);
      cfg.set(section + ".minus", "coef", k.minus.coef);
      cfg.set(section + ".minus", "order", k.minus.order);
      break;
  }
}

void write_two_point(const TwoPointKernel& K, Config& cfg, const std::string& section) {
  write_kernel(K.base, cfg, section);
  cfg.set(section, "mode", mode_name(K.mode));
  if (K.mode == KernelMode::x_modulated) {
    cfg.set(section, "weight_delta", K.weight_delta);
    cfg.set(section, "weight_omega", K.weight_omega);
  }
}

}  // namespace nlreg
