#include "nlreg/cli.hpp"

#include "nlreg/conditions.hpp"
#include "nlreg/continuity.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/experiments.hpp"
#include "nlreg/solver.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace nlreg {

namespace fs = std::filesystem;

namespace {

Interval get_interval(const Config& c, const std::string& sec, const std::string& key, Interval fallback) {
  if (!c.has(sec, key)) return fallback;
  const auto v = c.get_list(sec, key);
  if (v.size() != 2 || !(v[0] <= v[1])) throw ValidationError(sec + "." + key, "expected lo,hi with lo <= hi");
  return {v[0], v[1]};
}

std::vector<double> get_list_or(const Config& c, const std::string& sec, const std::string& key,
                                std::vector<double> fallback) {
  return c.has(sec, key) ? c.get_list(sec, key) : fallback;
}

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
  try {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field, "expected an unsigned integer, got '" + text + "'");
  }
}

class Outputs {
public:
  Outputs(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ValidationError("out", "cannot create directory " + dir_ + ": " + ec.message());
  }
  void write(const std::string& name, const std::string& content) {
    const auto path = (fs::path(dir_) / name).string();
    write_text_file(path, content);
    out_ << "wrote " << path << "\n";
  }

private:
  std::string dir_;
  std::ostream& out_;
};

struct Context {
  RunConfig run;
  Outputs files;
  std::ostream& out;
};

ConditionSuite certified_conditions(const Context& c, const TwoPointKernel& K) {
  return run_all(K, c.run.R0, c.run.quad, c.run.seed);
}

GrowthParams growth_for(const Context& c, const TwoPointKernel& K) {
  return growth_params(K.base, certified_conditions(c, K), c.run.R0, c.run.quad, c.run.growth);
}

Mesh1D mesh_from(const Config& c) {
  const double h = c.get_double("mesh", "h", 1.0 / 256);
  return build_mesh(c.get_double("mesh", "a", -1.0), c.get_double("mesh", "b", 1.0),
                    c.get_double("mesh", "collar", 1.0), h);
}

/// [data] f: a number for a constant source or "random" for one seeded random source.
ScalarField source_from(const Context& c, double* f_const) {
  const std::string f = c.run.raw.get("data", "f").value_or("1");
  if (f == "random") {
    if (f_const) *f_const = std::nan("");
    return random_sources(1, c.run.seed).front();
  }
  const double v = parse_double(f, "data.f");
  if (f_const) *f_const = v;
  return constant_field(v);
}

Series nodal_series(const std::string& name, const DiscreteFunction& u) {
  Series s{name, {}, {}};
  for (int k = 0; k < u.mesh.size(); ++k) {
    s.x.push_back(u.mesh.x[static_cast<std::size_t>(k)]);
    s.y.push_back(u.values(k));
  }
  return s;
}

Series modulus_series(const Modulus& w) {
  Series s{"omega", {}, {}};
  for (const auto& [t, v] : w.breakpoints)
    if (t > 0.0) {
      s.x.push_back(t);
      s.y.push_back(v);
    }
  return s;
}

int cmd_check(Context& c) {
  const auto K = c.run.kernel();
  const auto suite = certified_conditions(c, K);
  std::string text, csv = csv_header();
  for (const auto* r : suite.all()) {
    text += to_text(*r) + "\n";
    csv += to_csv_rows(*r);
  }
  c.files.write("conditions.txt", text);
  c.files.write("conditions.csv", csv);
  c.out << text;
  return exit_ok;
}

int cmd_growth(Context& c) {
  const auto K = c.run.kernel();
  const auto p = growth_for(c, K);
  c.files.write("growth.txt", to_text(p));
  c.files.write("h_table.csv", h_table_csv(p));
  c.files.write("radii.csv", radii_csv(p));
  c.out << to_text(p);
  return exit_ok;
}

struct ContinuityDomains {
  ContinuitySetup setup;
  std::vector<double> radii;
};

ContinuityDomains continuity_domains(const Config& raw) {
  ContinuityDomains d;
  auto& s = d.setup;
  s.A = get_interval(raw, "continuity", "A", s.A);
  s.Bs = get_interval(raw, "continuity", "Bs", s.Bs);
  s.B = get_interval(raw, "continuity", "B", s.B);
  s.R_star = raw.get_double("continuity", "R_star", s.R_star);
  s.n_max = static_cast<int>(raw.get_long("continuity", "n_max", s.n_max));
  s.w_sup = raw.get_double("continuity", "w_sup", s.w_sup);
  d.radii = get_list_or(raw, "continuity", "oscillation_radii", {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4});
  return d;
}

int cmd_modulus(Context& c) {
  const auto K = c.run.kernel();
  const auto p = growth_for(c, K);
  const auto d = continuity_domains(c.run.raw);
  const auto& s = d.setup;
  const double C = tail_constant(K.base, s.Bs.lo, s.Bs.hi, s.B.lo, s.B.hi, c.run.quad);
  const double Kt = k_tilde(K.base.lambda, C, s.w_sup);
  const auto m = build_modulus(p, Kt, s.R_star, s.n_max, K.base, c.run.quad);
  std::ostringstream t;
  t << "modulus\n  C_tilde " << format_double(C) << "\n  K_tilde " << format_double(Kt) << "\n  kappa "
    << format_double(m.schedule.kappa) << "\n  steps " << m.schedule.r.size() - 1 << "\n  certified_from "
    << format_double(m.omega.certified_from) << "\n";
  if (!m.complete) t << "  stopped early: " << m.error << "\n";
  c.files.write("modulus.txt", t.str());
  c.files.write("modulus.csv", modulus_csv(m.omega));
  c.files.write("schedule.csv", schedule_csv(m.schedule));
  c.files.write("modulus.svg", svg_line_chart("modulus of continuity", {modulus_series(m.omega)}, true));
  c.out << t.str();
  return exit_ok;
}

struct Solved {
  AssembledSystem sys;
  DiscreteFunction u;
  ScalarField f;
  double f_const = 0.0;
  double g = 0.0;
};

Solved solve_from(const Context& c, const TwoPointKernel& K) {
  const auto& raw = c.run.raw;
  Solved r;
  r.f = source_from(c, &r.f_const);
  r.g = raw.get_double("data", "g", 0.0);
  r.sys = assemble(K, mesh_from(raw), constant_field(raw.get_double("data", "W", 0.0)), c.run.quad);
  r.u = solve(r.sys, r.f, ExteriorData::constant(r.g));
  return r;
}

/// L2 errors of u against `exact` over the domain, Gauss 7 per cell.
std::pair<double, double> l2_errors(const DiscreteFunction& u, const std::function<double(double)>& exact) {
  using G = boost::math::quadrature::gauss<double, 7>;
  double err = 0.0, ref = 0.0;
  const auto& m = u.mesh;
  const long cells = std::lround((m.b - m.a) / m.h);
  for (long k = 0; k < cells; ++k) {
    const double x = m.a + static_cast<double>(k) * m.h;
    err += G::integrate([&](double t) { return std::pow(u(t) - exact(t), 2); }, x, x + m.h);
    ref += G::integrate([&](double t) { return std::pow(exact(t), 2); }, x, x + m.h);
  }
  return {std::sqrt(err), ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err)};
}

int cmd_solve(Context& c) {
  const auto K = c.run.kernel();
  const auto r = solve_from(c, K);
  const auto res = residual(r.sys, r.u, r.f);
  std::ostringstream sum;
  sum << "quantity,value\n";
  sum << "h," << format_double(r.u.mesh.h) << "\n";
  sum << "nodes," << r.u.mesh.size() << "\n";
  sum << "u_sup," << format_double(r.u.values.cwiseAbs().maxCoeff()) << "\n";
  sum << "u_l2," << format_double(l2_norm(r.u)) << "\n";
  sum << "residual_max_abs," << format_double(res.max_abs) << "\n";
  sum << "rcond," << format_double(r.u.rcond) << "\n";
  std::vector<Series> plot{nodal_series("u_h", r.u)};

  const std::string bench = c.run.raw.get("benchmark", "exact").value_or("");
  if (!bench.empty()) {
    if (bench != "fractional_poisson") throw ValidationError("benchmark.exact", "unknown benchmark '" + bench + "'");
    if (K.base.family != Family::fractional || K.base.dim != 1 || !K.is_translation_invariant())
      throw ValidationError("benchmark.exact", "needs a 1D translation-invariant fractional kernel");
    if (std::isnan(r.f_const) || r.g != 0.0)
      throw ValidationError("benchmark.exact", "needs a constant f and zero exterior data");
    const double center = 0.5 * (r.u.mesh.a + r.u.mesh.b), rho = 0.5 * (r.u.mesh.b - r.u.mesh.a);
    const auto exact = [&](double x) { return fractional_poisson_exact(K.base.s, r.f_const, center, rho, x); };
    const auto [abs_err, rel_err] = l2_errors(r.u, exact);
    sum << "l2_error," << format_double(abs_err) << "\n";
    sum << "rel_l2_error," << format_double(rel_err) << "\n";
    Series ex{"exact", {}, {}};
    for (double x : r.u.mesh.x) {
      ex.x.push_back(x);
      ex.y.push_back(exact(x));
    }
    plot.push_back(ex);
  }
  c.files.write("solution.csv", solution_csv(r.u));
  c.files.write("summary.csv", sum.str());
  c.files.write("solution.svg", svg_line_chart("solution", plot));
  c.out << sum.str();
  return exit_ok;
}

int verify_boundedness_cmd(Context& c, const TwoPointKernel& K) {
  const auto& raw = c.run.raw;
  BoundednessSetup s;
  s.K = K;
  s.a = raw.get_double("mesh", "a", s.a);
  s.b = raw.get_double("mesh", "b", s.b);
  s.collar = raw.get_double("mesh", "collar", s.collar);
  s.h = get_list_or(raw, "boundedness", "h", s.h);
  s.W = raw.get_double("data", "W", s.W);
  s.g = ExteriorData::constant(raw.get_double("data", "g", 0.0));
  s.random_f = static_cast<int>(raw.get_long("boundedness", "random_f", s.random_f));
  s.sweep = get_list_or(raw, "boundedness", "sweep", s.sweep);
  s.stability = raw.get_double("boundedness", "stability", s.stability);
  s.seed = c.run.seed;
  const auto rep = verify_boundedness(s, c.run.quad);
  c.files.write("report.txt", rep.to_text());
  c.files.write("report.csv", rep.to_csv());
  c.out << rep.to_text();
  return exit_ok;
}

int verify_continuity_cmd(Context& c, const TwoPointKernel& K) {
  const auto p = growth_for(c, K);
  const auto d = continuity_domains(c.run.raw);
  const auto r = solve_from(c, K);
  ModulusResult m;
  const auto rep = verify_continuity(r.u, r.f, K, p, d.setup, c.run.quad, &m);
  const double x0 = 0.5 * (d.setup.A.lo + d.setup.A.hi);
  const auto trace = measure_oscillation(r.u, x0, d.radii);
  c.files.write("report.txt", rep.to_text());
  c.files.write("report.csv", rep.to_csv());
  c.files.write("solution.csv", solution_csv(r.u));
  c.files.write("oscillation.csv", trace.to_csv());
  c.files.write("modulus.csv", modulus_csv(m.omega));
  c.files.write("schedule.csv", schedule_csv(m.schedule));
  c.files.write("solution.svg", svg_line_chart("solution", {nodal_series("u_h", r.u)}));
  Series osc{"O(r)", {}, {}};
  for (const auto& [rr, o] : trace.pairs) {
    osc.x.push_back(rr);
    osc.y.push_back(o);
  }
  c.files.write("oscillation.svg", svg_line_chart("oscillation", {osc}, true));
  c.files.write("modulus.svg", svg_line_chart("modulus of continuity", {modulus_series(m.omega)}, true));
  c.out << rep.to_text();
  return exit_ok;
}

int verify_growth_cmd(Context& c, const TwoPointKernel& K) {
  const auto& raw = c.run.raw;
  const auto p = growth_for(c, K);
  GrowthScenario sc;
  const std::string sec = "growth_scenario";
  sc.R = raw.get_double(sec, "R", sc.R);
  sc.v_inf = raw.get_double(sec, "v_inf", sc.v_inf);
  sc.rho_factor = raw.get_double(sec, "rho_factor", sc.rho_factor);
  sc.annulus_value = raw.get_double(sec, "annulus_value", sc.annulus_value);
  sc.far_value = raw.get_double(sec, "far_value", sc.far_value);
  sc.source = raw.get_double(sec, "source", sc.source);
  sc.outer_cells = static_cast<int>(raw.get_long(sec, "outer_cells", sc.outer_cells));
  sc.residual_tol = raw.get_double(sec, "residual_tol", sc.residual_tol);
  const auto hs = get_list_or(raw, sec, "h", {1.0 / 512, 1.0 / 1024, 1.0 / 2048});
  std::string text, csv = "h,verdict,v_max_ball,slack,margin\n";
  for (double h : hs) {
    const auto rep = verify_growth(K, p, sc, h, c.run.quad);
    text += rep.to_text() + "\n";
    const double v = rep.verdict == ReportVerdict::refused ? std::nan("") : rep.get("v_max_ball");
    csv += format_double(h) + "," + report_verdict_name(rep.verdict) + "," + format_double(v) + "," +
           format_double(rep.slack) + "," + format_double(rep.margin) + "\n";
  }
  c.files.write("report.txt", text);
  c.files.write("report.csv", csv);
  c.out << text;
  return exit_ok;
}

int cmd_verify(Context& c) {
  const auto K = c.run.kernel();
  const std::string theorem = c.run.raw.require("experiment", "theorem");
  if (theorem == "boundedness") return verify_boundedness_cmd(c, K);
  if (theorem == "continuity") return verify_continuity_cmd(c, K);
  if (theorem == "growth") return verify_growth_cmd(c, K);
  throw ValidationError("experiment.theorem", "unknown theorem '" + theorem + "'");
}

const std::map<std::string, std::function<int(Context&)>>& commands() {
  static const std::map<std::string, std::function<int(Context&)>> m{
      {"check", cmd_check}, {"growth", cmd_growth}, {"modulus", cmd_modulus},
      {"solve", cmd_solve}, {"verify", cmd_verify}};
  return m;
}

}  // namespace

TwoPointKernel RunConfig::kernel() const {
  if (!raw.has_section("kernel")) throw ValidationError("kernel", "missing kernel section");
  return build_two_point(raw);
}

RunConfig load_run_config(const Config& raw, const RunOptions& opt) {
  RunConfig r;
  r.raw = raw;
  r.out_dir = opt.out_dir.empty() ? raw.get("run", "out").value_or("out") : opt.out_dir;
  r.seed = opt.seed ? *opt.seed : parse_seed(raw.get("run", "seed").value_or("0"), "run.seed");
  r.quad.rel_tol = opt.tol ? *opt.tol : raw.get_double("quadrature", "rel_tol", r.quad.rel_tol);
  r.quad.abs_tol = raw.get_double("quadrature", "abs_tol", r.quad.abs_tol);
  r.quad.split_radius = raw.get_double("quadrature", "split_radius", r.quad.split_radius);
  try {
    r.quad.validate();
  } catch (const Error& e) {
    throw ValidationError("quadrature", e.what());
  }
  r.R0 = raw.get_double("conditions", "R0", r.R0);
  if (!(r.R0 > 0.0)) throw ValidationError("conditions.R0", "must be positive");
  const long count = raw.get_long("growth", "radii_count", static_cast<long>(r.growth.radii_count));
  if (count < 2) throw ValidationError("growth.radii_count", "needs at least 2 radii");
  r.growth.radii_count = static_cast<std::size_t>(count);
  if (raw.has("growth", "K0")) r.growth.K0 = raw.require_double("growth", "K0");
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : commands()) v.push_back(k);
    return v;
  }();
  return names;
}

int run_command(const std::string& command, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto it = commands().find(command);
    if (it == commands().end()) throw ValidationError("command", "unknown subcommand '" + command + "'");
    const auto run = load_run_config(Config::from_file(opt.config_path), opt);
    Context c{run, Outputs(run.out_dir, out), out};
    return it->second(c);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const UnsupportedKernelError& e) {
    err << "unsupported kernel: " << e.what() << "\n";
    return exit_unsupported;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numeric;
  }
}

double fractional_poisson_exact(double s, double f, double center, double rho, double x) {
  if (!(s > 0.0 && s < 1.0)) throw ArgumentError("fractional_poisson_exact needs 0 < s < 1");
  const double d = rho * rho - (x - center) * (x - center);
  if (d <= 0.0) return 0.0;
  return f * std::sin(M_PI * s) / M_PI * std::pow(d, s);
}

}  // namespace nlreg
