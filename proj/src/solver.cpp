#include "nlreg/solver.hpp"

#include "nlreg/config.hpp"
#include "nlreg/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace nlreg {

namespace {

using Cubic = std::array<double, 4>;

// coefficients in u of the hat correlation on the unit piece containing u_mid
Cubic correlation_piece(double u_mid) {
  if (u_mid >= 0.0 && u_mid < 1.0) return {2.0 / 3.0, 0.0, -1.0, 0.5};
  if (u_mid >= 1.0 && u_mid < 2.0) return {8.0 / 6.0, -2.0, 1.0, -1.0 / 6.0};
  if (u_mid < 0.0 && u_mid >= -1.0) return {2.0 / 3.0, 0.0, -1.0, -0.5};
  if (u_mid < -1.0 && u_mid >= -2.0) return {8.0 / 6.0, 2.0, 1.0, 1.0 / 6.0};
  return {0.0, 0.0, 0.0, 0.0};
}

// B(t) = M(d) - M(d - sigma t) on 0 <= t <= 1 as a cubic in t with B(0) = 0
Cubic first_piece(int d, int sigma) {
  const Cubic c = correlation_piece(d - sigma * 0.5);
  Cubic out{0.0, 0.0, 0.0, 0.0};
  // expand sum_j c_j (d - sigma t)^j
  const double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l <= j; ++l)
      out[l] -= c[j] * binom[j][l] * std::pow(static_cast<double>(d), j - l) * std::pow(-sigma, l);
  out[0] = 0.0;
  return out;
}

double eval_cubic(const Cubic& c, double t) { return ((c[3] * t + c[2]) * t + c[1]) * t + c[0]; }

bool pure_power(const KernelSpec& spec) {
  return spec.dim == 1 && (spec.family == Family::fractional || spec.family == Family::asymmetric_pair);
}

PowerSide side_power(const KernelSpec& spec, int sigma) {
  if (spec.family == Family::fractional) return {1.0, 2.0 * spec.s};
  return sigma > 0 ? spec.plus : spec.minus;
}

// int_0^inf t^{-1-p} sum_sigma c_sigma B_sigma(t) dt over the listed sides, all of order p
double power_moment(int d, double p, const std::vector<std::pair<int, double>>& sides) {
  Cubic a{0.0, 0.0, 0.0, 0.0};
  for (const auto& [sigma, c] : sides) {
    const Cubic b = first_piece(d, sigma);
    for (int l = 0; l < 4; ++l) a[l] += c * b[l];
  }
  const double scale = std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]);
  if (p >= 1.0) {
    if (std::abs(a[1]) > 1e-12 * std::max(scale, 1.0))
      throw NumericalError("stiffness integral diverges: odd part of order " + format_double(p) + " >= 1");
    a[1] = 0.0;
  }
  double J = 0.0;
  for (int l = 1; l < 4; ++l)
    if (a[l] != 0.0) J += a[l] / (l - p);
  const int K = std::abs(d) + 2;
  const double Md = hat_correlation(d);
  for (int m = 1; m < K; ++m)
    for (const auto& [sigma, c] : sides) {
      if (std::abs(d - sigma * (m + 0.5)) > 2.0) {
        // M(d - sigma t) vanishes on the whole piece
        if (Md != 0.0) J += c * Md * (std::pow(static_cast<double>(m), -p) - std::pow(m + 1.0, -p)) / p;
        continue;
      }
      auto f = [&, sigma = sigma](double t) { return (Md - hat_correlation(d - sigma * t)) * std::pow(t, -1.0 - p); };
      J += c * boost::math::quadrature::gauss<double, 20>::integrate(f, static_cast<double>(m), m + 1.0);
    }
  double csum = 0.0;
  for (const auto& s : sides) csum += s.second;
  J += Md * csum * std::pow(static_cast<double>(K), -p) / p;
  return J;
}

double stiffness_power(const KernelSpec& spec, int d, double h) {
  const auto pp = side_power(spec, 1), pm = side_power(spec, -1);
  if (pp.order == pm.order)
    return std::pow(h, 1.0 - pp.order) * power_moment(d, pp.order, {{1, pp.coef}, {-1, pm.coef}});
  return std::pow(h, 1.0 - pp.order) * power_moment(d, pp.order, {{1, pp.coef}}) +
         std::pow(h, 1.0 - pm.order) * power_moment(d, pm.order, {{-1, pm.coef}});
}

double stiffness_numeric(const KernelSpec& spec, int d, double h, const QuadConfig& cfg) {
  const int K = std::abs(d) + 2;
  auto j = [&spec](double z) { return eval_density(spec, z); };
  double total = 0.0;
  if (std::abs(d) <= 2) {
    // first cell in log coordinates: z = h e^{-u}
    const Cubic bp = first_piece(d, 1), bm = first_piece(d, -1);
    // even and odd parts of j pair with B+ + B- and B+ - B-; the linear term of the sum cancels
    Cubic ps, pd;
    for (int l = 0; l < 4; ++l) {
      ps[l] = bp[l] + bm[l];
      pd[l] = bp[l] - bm[l];
    }
    if (std::abs(ps[1]) <= 1e-12 * (std::abs(bp[1]) + 1.0)) ps[1] = 0.0;
    const double rho_min = std::max(mass_envelope(spec).floor, h * 1e-30);
    const double U = std::log(h / std::min(rho_min, h));
    auto g = [&](double u) {
      const double t = std::exp(-u), z = h * t;
      const double jp = j(z), jm = j(-z);
      const double odd = jp == jm ? 0.0 : 0.5 * (jp - jm) * eval_cubic(pd, t);
      return (0.5 * (jp + jm) * eval_cubic(ps, t) + odd) * z;
    };
    std::vector<double> breaks;
    for (double b : mass_breaks(spec))
      if (b > rho_min && b < h) breaks.push_back(std::log(h / b));
    std::sort(breaks.begin(), breaks.end());
    total += integrate(g, 0.0, U, cfg, breaks).value / h;
  }
  auto f = [&](double t) {
    const double z = h * t;
    return j(z) * (hat_correlation(d) - hat_correlation(d - t)) + j(-z) * (hat_correlation(d) - hat_correlation(d + t));
  };
  const int m0 = std::abs(d) <= 2 ? 1 : std::abs(d) - 2;
  std::vector<double> breaks;
  for (double b : mass_breaks(spec))
    if (b > m0 * h && b < K * h) breaks.push_back(b / h);
  std::sort(breaks.begin(), breaks.end());
  if (K > m0) total += integrate(f, m0, K, cfg, breaks).value;
  const double Md = hat_correlation(d);
  if (Md != 0.0) total += Md * annulus_integral(spec, K * h, std::numeric_limits<double>::infinity(), cfg).value / h;
  return h * h * total;
}

// mass of j(side * tau) over tau > D
double side_tail(const KernelSpec& spec, int side, double D, const QuadConfig& cfg) {
  if (pure_power(spec)) {
    const auto p = side_power(spec, side);
    return p.coef * std::pow(D, -p.order) / p.order;
  }
  return one_sided_tail(spec, side, D, cfg).value;
}

template <class F>
double gk21(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0);
}

// fixed rule on [a,b] split at the interior points of `cuts`
template <class F>
double gk21_split(F f, double a, double b, const std::vector<double>& cuts) {
  double total = 0.0, lo = a;
  for (double c : cuts)
    if (c > lo && c < b) {
      total += gk21(f, lo, c);
      lo = c;
    }
  return total + gk21(f, lo, b);
}

template <class F>
double gauss7(F f, double a, double b) {
  return boost::math::quadrature::gauss<double, 7>::integrate(f, a, b);
}

double hat(const Mesh1D& m, int k, double x) {
  return std::max(0.0, 1.0 - std::abs(x - m.x[static_cast<std::size_t>(k)]) / m.h);
}

}  // namespace

double hat_correlation(double t) {
  const double u = std::abs(t);
  if (u >= 2.0) return 0.0;
  if (u <= 1.0) return 2.0 / 3.0 - u * u + 0.5 * u * u * u;
  const double v = 2.0 - u;
  return v * v * v / 6.0;
}

Mesh1D build_mesh(double a, double b, double collar_width, double h) {
  if (!(a < b)) throw ArgumentError("mesh needs a < b");
  if (!(collar_width > 0.0)) throw ArgumentError("collar width must be positive");
  if (!(h > 0.0) || h > b - a) throw ArgumentError("mesh size must lie in (0, b - a]");
  const double nd = (b - a) / h, nc = collar_width / h;
  if (std::abs(nd - std::round(nd)) > 1e-9 * nd || std::abs(nc - std::round(nc)) > 1e-9 * std::max(nc, 1.0) ||
      std::round(nc) < 1.0)
    throw ArgumentError("h must divide the domain length and the collar width");
  Mesh1D m;
  m.a = a;
  m.b = b;
  m.collar = collar_width;
  m.h = h;
  const int n_dom = static_cast<int>(std::round(nd)), n_col = static_cast<int>(std::round(nc));
  const int n = n_dom + 2 * n_col + 1;
  for (int k = 0; k < n; ++k) {
    const int off = k - n_col;
    m.x.push_back(a + off * h);
    const bool inside = off > 0 && off < n_dom;
    m.kind.push_back(inside ? NodeKind::interior : NodeKind::collar);
    (inside ? m.interior : m.collar_nodes).push_back(k);
  }
  return m;
}

ExteriorData ExteriorData::constant(double c) {
  ExteriorData g;
  g.collar = [c](double) { return c; };
  g.far_left = g.far_right = c;
  return g;
}

bool ExteriorData::is_zero() const { return far_left == 0.0 && far_right == 0.0 && !collar; }

ScalarField constant_field(double c) {
  return [c](double) { return c; };
}

double stiffness_entry(const KernelSpec& spec, int d, double h, const QuadConfig& cfg) {
  if (spec.dim != 1) throw UnsupportedKernelError("the Galerkin solver is one-dimensional");
  if (!(h > 0.0)) throw ArgumentError("mesh size must be positive");
  return pure_power(spec) ? stiffness_power(spec, d, h) : stiffness_numeric(spec, d, h, cfg);
}

Eigen::MatrixXd AssembledSystem::even_part() const {
  const int n = static_cast<int>(mesh.interior.size());
  Eigen::MatrixXd E(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) E(i, k) = 0.5 * (toeplitz_at(k - i) + toeplitz_at(i - k));
  return E;
}

Eigen::MatrixXd AssembledSystem::dirichlet_form() const {
  const Eigen::MatrixXd E = even_part();
  return w.asDiagonal() * E + E * w.asDiagonal();
}

AssembledSystem assemble(const TwoPointKernel& K, const Mesh1D& mesh, const ScalarField& W, const QuadConfig& cfg) {
  if (K.base.dim != 1) throw UnsupportedKernelError("the Galerkin solver is one-dimensional");
  if (mesh.interior.empty()) throw ArgumentError("mesh has no interior nodes");
  AssembledSystem s;
  s.K = K;
  s.mesh = mesh;
  s.cfg = cfg;
  const int n = mesh.size();
  s.toeplitz.resize(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d) {
    try {
      s.toeplitz[static_cast<std::size_t>(d + n - 1)] = stiffness_entry(K.base, d, mesh.h, cfg);
    } catch (const NumericalError& e) {
      throw NumericalError("assembly failed for cell offset " + std::to_string(d) + ": " + e.what());
    }
  }
  if (K.mode == KernelMode::symmetrized)
    for (int d = 1; d <= n - 1; ++d) {
      const double v = 0.5 * (s.toeplitz_at(d) + s.toeplitz_at(-d));
      s.toeplitz[static_cast<std::size_t>(d + n - 1)] = s.toeplitz[static_cast<std::size_t>(-d + n - 1)] = v;
    }
  const int ni = static_cast<int>(mesh.interior.size()), nc = static_cast<int>(mesh.collar_nodes.size());
  s.w.resize(ni);
  for (int i = 0; i < ni; ++i) s.w(i) = K.weight(mesh.x[static_cast<std::size_t>(mesh.interior[i])]);
  s.w_sup = 0.0;
  s.S.resize(ni, ni);
  s.S_collar.resize(ni, nc);
  s.mass.setZero(ni, ni);
  s.mass_W.setZero(ni, n);
  for (int i = 0; i < ni; ++i) {
    const int gi = mesh.interior[i];
    for (int k = 0; k < ni; ++k) s.S(i, k) = s.w(i) * s.toeplitz_at(mesh.interior[k] - gi);
    for (int c = 0; c < nc; ++c) s.S_collar(i, c) = s.w(i) * s.toeplitz_at(mesh.collar_nodes[c] - gi);
    for (int k = std::max(0, i - 1); k <= std::min(ni - 1, i + 1); ++k)
      s.mass(i, k) = mesh.h * hat_correlation(mesh.interior[k] - gi);
    for (int k = gi - 1; k <= gi + 1; ++k) {
      // W-weighted mass over the cells shared by the two hats
      double v = 0.0;
      for (int cell = std::max(gi, k) - 1; cell < std::min(gi, k) + 1; ++cell) {
        const double x0 = mesh.x[static_cast<std::size_t>(cell)], x1 = x0 + mesh.h;
        v += gauss7([&](double x) { return W(x) * hat(mesh, gi, x) * hat(mesh, k, x); }, x0, x1);
      }
      s.mass_W(i, k) = v;
    }
    for (int cell = gi - 1; cell <= gi; ++cell)
      for (int q = 0; q <= 4; ++q) {
        const double x = mesh.x[static_cast<std::size_t>(cell)] + mesh.h * q / 4.0;
        s.w_sup = std::max(s.w_sup, std::abs(W(x)));
      }
  }
  return s;
}

Eigen::VectorXd exterior_load(const AssembledSystem& sys, const ExteriorData& g) {
  const auto& m = sys.mesh;
  const int ni = static_cast<int>(m.interior.size()), nc = static_cast<int>(m.collar_nodes.size());
  Eigen::VectorXd gc(nc);
  for (int c = 0; c < nc; ++c) gc(c) = g.collar ? g.collar(m.x[static_cast<std::size_t>(m.collar_nodes[c])]) : 0.0;
  Eigen::VectorXd load = -sys.S_collar * gc;
  const double g_first = gc(0), g_last = gc(nc - 1);
  if (g.far_left == 0.0 && g.far_right == 0.0 && g_first == 0.0 && g_last == 0.0) return load;
  const auto& spec = sys.K.base;
  const bool sym = sys.K.mode == KernelMode::symmetrized;
  auto dens = [&](double z) { return sym ? 0.5 * (eval_density(spec, z) + eval_density(spec, -z)) : eval_density(spec, z); };
  auto tail = [&](int side, double D) {
    return sym ? 0.5 * (side_tail(spec, 1, D, sys.cfg) + side_tail(spec, -1, D, sys.cfg)) : side_tail(spec, side, D, sys.cfg);
  };
  const double h = m.h, xl = m.lo(), xr = m.hi();
  // jumps of j at the radii in `br` make T kink; the quadrature is split there
  std::vector<double> br = mass_breaks(spec);
  std::sort(br.begin(), br.end());
  auto inner = [&](double D, int side) {
    std::vector<double> cuts;
    for (double b : br) cuts.push_back(b - D);
    return gk21_split([&](double s) { return (1.0 - s / h) * dens(side * (D + s)); }, 0.0, h, cuts);
  };
  // far field minus the outer half of the last collar hat, integrated against j(y - x)
  auto T = [&](double x) {
    double v = 0.0;
    if (g.far_right != 0.0) v += g.far_right * tail(1, xr - x);
    if (g_last != 0.0) v -= g_last * inner(xr - x, 1);
    if (g.far_left != 0.0) v += g.far_left * tail(-1, x - xl);
    if (g_first != 0.0) v -= g_first * inner(x - xl, -1);
    return v;
  };
  std::vector<double> kinks;
  for (double b : br)
    for (double x : {xl + b, xl + b - h, xr - b, xr - b + h}) kinks.push_back(x);
  std::sort(kinks.begin(), kinks.end());
  for (int i = 0; i < ni; ++i) {
    const int gi = m.interior[i];
    double v = 0.0;
    for (int cell = gi - 1; cell <= gi; ++cell) {
      const double x0 = m.x[static_cast<std::size_t>(cell)];
      v += gk21_split([&](double x) { return hat(m, gi, x) * T(x); }, x0, x0 + h, kinks);
    }
    load(i) += sys.w(i) * v;
  }
  return load;
}

Eigen::VectorXd source_load(const AssembledSystem& sys, const ScalarField& f) {
  const auto& m = sys.mesh;
  const int ni = static_cast<int>(m.interior.size());
  Eigen::VectorXd F(ni);
  for (int i = 0; i < ni; ++i) {
    const int gi = m.interior[i];
    double v = 0.0;
    for (int cell = gi - 1; cell <= gi; ++cell) {
      const double x0 = m.x[static_cast<std::size_t>(cell)];
      v += gauss7([&](double x) { return f(x) * hat(m, gi, x); }, x0, x0 + m.h);
    }
    F(i) = v;
  }
  return F;
}

namespace {

// W-mass acting on the collar data of G
Eigen::VectorXd collar_mass_load(const AssembledSystem& sys, const Eigen::VectorXd& all_values) {
  const auto& m = sys.mesh;
  const int ni = static_cast<int>(m.interior.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ni);
  for (int i = 0; i < ni; ++i)
    for (int k = m.interior[i] - 1; k <= m.interior[i] + 1; ++k)
      if (m.kind[static_cast<std::size_t>(k)] == NodeKind::collar) out(i) += sys.mass_W(i, k) * all_values(k);
  return out;
}

Eigen::MatrixXd interior_mass_W(const AssembledSystem& sys) {
  const int ni = static_cast<int>(sys.mesh.interior.size());
  Eigen::MatrixXd A(ni, ni);
  for (int i = 0; i < ni; ++i)
    for (int k = 0; k < ni; ++k) A(i, k) = sys.mass_W(i, sys.mesh.interior[k]);
  return A;
}

Eigen::VectorXd nodal_exterior(const Mesh1D& m, const ExteriorData& g) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.size());
  for (int c : m.collar_nodes) v(c) = g.collar ? g.collar(m.x[static_cast<std::size_t>(c)]) : 0.0;
  return v;
}

}  // namespace

Eigen::VectorXd DiscreteFunction::interior_values() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(mesh.interior.size()));
  for (std::size_t i = 0; i < mesh.interior.size(); ++i) v(static_cast<Eigen::Index>(i)) = values(mesh.interior[i]);
  return v;
}

double DiscreteFunction::operator()(double x) const {
  if (x < mesh.lo()) return far_left;
  if (x > mesh.hi()) return far_right;
  const double s = (x - mesh.lo()) / mesh.h;
  const int k = std::min(static_cast<int>(s), mesh.size() - 2);
  const double t = s - k;
  return (1.0 - t) * values(k) + t * values(k + 1);
}

DiscreteFunction solve(const AssembledSystem& sys, const ScalarField& f, const ExteriorData& g) {
  const Eigen::VectorXd ext = nodal_exterior(sys.mesh, g);
  const Eigen::MatrixXd A = sys.S - interior_mass_W(sys);
  const Eigen::VectorXd rhs = source_load(sys, f) + exterior_load(sys, g) + collar_mass_load(sys, ext);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-13))
    throw NumericalError("near-resonance: reciprocal condition " + format_double(rc) +
                         " (W too close to an eigenvalue)");
  const Eigen::VectorXd ui = lu.solve(rhs);
  DiscreteFunction u;
  u.mesh = sys.mesh;
  u.values = ext;
  for (std::size_t i = 0; i < sys.mesh.interior.size(); ++i)
    u.values(sys.mesh.interior[i]) = ui(static_cast<Eigen::Index>(i));
  u.far_left = g.far_left;
  u.far_right = g.far_right;
  u.rcond = rc;
  return u;
}

GardingEstimate garding_check(const AssembledSystem& sys, int trials, std::uint64_t seed) {
  if (trials < 100) throw ArgumentError("Garding check needs at least 100 trials");
  const Eigen::MatrixXd Q = 0.25 * sys.dirichlet_form() - 0.5 * (sys.S + sys.S.transpose());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Eigen::Index n = sys.S.rows();
  GardingEstimate est;
  est.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = U(rng);
    const double q = u.dot(Q * u) / u.dot(sys.mass * u);
    est.c_hat = std::max(est.c_hat, q);
  }
  return est;
}

double poincare_lambda1(const AssembledSystem& sys) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.dirichlet_form(), sys.mass,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigenvalue solver failed");
  return es.eigenvalues()(0);
}

Residual residual(const AssembledSystem& sys, const DiscreteFunction& u, const ScalarField& f) {
  ExteriorData g;
  const DiscreteFunction* pu = &u;
  g.collar = [pu](double x) { return (*pu)(x); };
  g.far_left = u.far_left;
  g.far_right = u.far_right;
  const Eigen::VectorXd ui = u.interior_values();
  const Eigen::VectorXd E = sys.S * ui - exterior_load(sys, g);
  const Eigen::VectorXd rhs = interior_mass_W(sys) * ui + collar_mass_load(sys, u.values) + source_load(sys, f);
  const Eigen::VectorXd r = (E - rhs) / sys.mesh.h;
  Residual res;
  res.max_abs = r.cwiseAbs().maxCoeff();
  res.max_pos = std::max(0.0, r.maxCoeff());
  res.max_neg = std::max(0.0, -r.minCoeff());
  return res;
}

std::string solution_csv(const DiscreteFunction& u) {
  std::ostringstream o;
  o << "x,u\n";
  for (int k = 0; k < u.mesh.size(); ++k)
    o << format_double(u.mesh.x[static_cast<std::size_t>(k)]) << "," << format_double(u.values(k)) << "\n";
  return o.str();
}

}  // namespace nlreg
