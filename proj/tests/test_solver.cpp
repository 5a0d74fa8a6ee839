#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/solver.hpp"

#include <Eigen/Eigenvalues>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace nlreg;

namespace {

/// radial power profile with a far cutoff: numerically assembled twin of the fractional kernel
KernelSpec radial_power(double s, double cutoff) {
  KernelSpec k;
  k.family = Family::radial;
  k.ell.kind = ProfileKind::power;
  k.ell.exponent = 2.0 * s;
  k.ell.cutoff = cutoff;
  k.validate();
  return k;
}

double l2_error(const DiscreteFunction& u, const std::function<double(double)>& ref, double a, double b,
                double* norm) {
  double e = 0.0, n = 0.0;
  const int cells = static_cast<int>(std::round((b - a) / u.mesh.h));
  for (int c = 0; c < cells; ++c) {
    const double x0 = a + c * u.mesh.h, x1 = x0 + u.mesh.h;
    e += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double x) { return std::pow(u(x) - ref(x), 2); }, x0, x1, 0);
    n += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double x) { return ref(x) * ref(x); }, x0, x1, 0);
  }
  if (norm) *norm = std::sqrt(n);
  return std::sqrt(e);
}

}  // namespace

TEST_CASE("mesh layout") {
  const auto m = build_mesh(-1, 1, 1, 0.5);
  CHECK(m.size() == 9);
  CHECK(m.interior.size() == 3);
  CHECK(m.collar_nodes.size() == 6);
  CHECK(m.x.front() == -2.0);
  CHECK(m.x.back() == 2.0);
  CHECK(m.x[static_cast<std::size_t>(m.first_interior())] == -0.5);
  CHECK(m.kind[2] == NodeKind::collar);  // boundary node x = -1
  CHECK_THROWS_AS(build_mesh(1, -1, 1, 0.5), ArgumentError);
  CHECK_THROWS_AS(build_mesh(-1, 1, 1, 0.3), ArgumentError);
  CHECK_THROWS_AS(build_mesh(-1, 1, 0.25, 0.5), ArgumentError);
  CHECK_THROWS_AS(build_mesh(-1, 1, 0, 0.5), ArgumentError);
}

TEST_CASE("hat correlation") {
  CHECK(hat_correlation(0) == doctest::Approx(2.0 / 3.0));
  CHECK(hat_correlation(1) == doctest::Approx(1.0 / 6.0));
  CHECK(hat_correlation(-1.5) == doctest::Approx(1.0 / 48.0));
  CHECK(hat_correlation(2) == 0.0);
  const double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(hat_correlation, -1, 1, 0) +
                       2 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(hat_correlation, 1, 2, 0);
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("closed-form stiffness matches the numeric path") {
  QuadConfig cfg;
  cfg.rel_tol = 1e-11;
  const double cutoff = 1e6;
  for (double s : {0.25, 0.5, 0.75}) {
    const auto frac = fx::fractional(s);
    const auto rad = radial_power(s, cutoff);
    for (double h : {0.5, 1.0 / 64}) {
      for (int d : {0, 1, 2, 3, -4, 7}) {
        const double closed = stiffness_entry(frac, d, h, cfg);
        // mass beyond the cutoff only enters through M(d)
        const double correction = h * hat_correlation(d) * 2 * std::pow(cutoff, -2 * s) / (2 * s);
        const double numeric = stiffness_entry(rad, d, h, cfg) + correction;
        CAPTURE(s);
        CAPTURE(h);
        CAPTURE(d);
        CHECK(closed == doctest::Approx(numeric).epsilon(1e-7));
      }
      // scaling in h
      CHECK(stiffness_entry(frac, 1, h, cfg) ==
            doctest::Approx(std::pow(h, 1 - 2 * s) * stiffness_entry(frac, 1, 1.0, cfg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("far entries equal the disjoint-support interaction") {
  QuadConfig cfg;
  for (const auto& k : {fx::fractional(0.25), fx::asym_example()}) {
    const double h = 0.1;
    for (int d : {3, -3, 10, -25}) {
      // -h int j(z) M(d - z/h) dz over the overlap window
      const double z0 = h * (std::abs(d) - 2), z1 = h * (std::abs(d) + 2);
      const double sgn = d > 0 ? 1.0 : -1.0;
      double ref = 0.0;
      for (int c = 0; c < 4; ++c)
        ref -= h * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                       [&](double t) { return eval_density(k, sgn * t) * hat_correlation(d - sgn * t / h); },
                       z0 + c * h, z0 + (c + 1) * h, 0);
      CHECK(z1 > z0);
      CHECK(stiffness_entry(k, d, h, cfg) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("Toeplitz structure and positivity") {
  QuadConfig cfg;
  for (const auto& k : {fx::fractional(0.25), fx::asym_example(), fx::one_minus_sin()}) {
    const auto sys = assemble(fx::ti(k), build_mesh(-1, 1, 0.5, 1.0 / 16), constant_field(0.0), cfg);
    const auto n = sys.S.rows();
    for (Eigen::Index i = 1; i < n; ++i)
      for (Eigen::Index j = 1; j < n; ++j) CHECK(sys.S(i, j) == sys.S(i - 1, j - 1));
    CHECK(sys.toeplitz_at(0) > 0);
    // power kernels couple neighbours negatively; log-type kernels need not
    if (k.family != Family::radial)
      for (int d = 1; d < 10; ++d) CHECK(sys.toeplitz_at(d) + sys.toeplitz_at(-d) < 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.even_part());
    CHECK(es.eigenvalues()(0) > 0);
  }
}

TEST_CASE("constant exterior data reproduces the constant") {
  QuadConfig cfg;
  for (const auto& k : {fx::fractional(0.25), fx::asym_example(), fx::one_minus_sin()}) {
    const auto sys = assemble(fx::ti(k), build_mesh(-1, 1, 0.5, 1.0 / 16), constant_field(0.0), cfg);
    const auto u = solve(sys, constant_field(0.0), ExteriorData::constant(2.5));
    CAPTURE(k.describe());
    CHECK((u.interior_values().array() - 2.5).abs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("fractional Poisson problem against the closed form") {
  // 2s = 1: L = pi (-Delta)^{1/2}, and (-Delta)^{1/2} sqrt(1 - x^2)_+ = 1
  QuadConfig cfg;
  const auto sys = assemble(fx::ti(fx::fractional(0.5)), build_mesh(-1, 1, 1, 1.0 / 256), constant_field(0.0), cfg);
  const auto u = solve(sys, constant_field(1.0), ExteriorData{});
  auto exact = [](double x) { return std::abs(x) < 1 ? std::sqrt(1 - x * x) / M_PI : 0.0; };
  double norm = 0.0;
  const double err = l2_error(u, exact, -1, 1, &norm);
  CHECK(err / norm < 0.05);
  CHECK(u(0.0) == doctest::Approx(1 / M_PI).epsilon(0.02));
  CHECK(u.rcond > 0);
  CHECK(residual(sys, u, constant_field(1.0)).max_abs < 1e-8);
}

TEST_CASE("linearity and zero data") {
  QuadConfig cfg;
  TwoPointKernel K = fx::ti(fx::asym_example());
  const auto sys = assemble(K, build_mesh(-1, 1, 0.5, 1.0 / 32), [](double x) { return 0.3 * x; }, cfg);
  auto f1 = [](double x) { return std::cos(x); };
  auto f2 = [](double x) { return x * x - 0.2; };
  ExteriorData g;
  g.collar = [](double x) { return std::sin(3 * x); };
  g.far_left = std::sin(-4.5);
  g.far_right = std::sin(4.5);
  const auto a = solve(sys, f1, g);
  const auto b = solve(sys, f2, ExteriorData{});
  const auto c = solve(sys, [&](double x) { return f1(x) + f2(x); }, g);
  CHECK((c.values - a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
  const auto z = solve(sys, constant_field(0.0), ExteriorData{});
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
  const auto r = residual(sys, a, f1);
  CHECK(r.max_abs < 1e-8);
  CHECK(r.max_abs == std::max(r.max_pos, r.max_neg));
}

TEST_CASE("Garding constant and first eigenvalue") {
  QuadConfig cfg;
  for (const auto& k : {fx::fractional(0.25), fx::asym_example()}) {
    const auto sys = assemble(fx::ti(k), build_mesh(-1, 1, 0.5, 1.0 / 16), constant_field(0.0), cfg);
    const auto est = garding_check(sys, 200, 7);
    CHECK(est.c_hat == 0.0);
    CHECK(est.trials == 200);
  }
  auto k2 = fx::fractional(0.25);
  k2.lambda = 2.0;
  TwoPointKernel K = fx::ti(k2);
  K.mode = KernelMode::x_modulated;
  K.weight_delta = 0.5;
  K.weight_omega = 3.0;
  K.validate();
  const auto sys = assemble(K, build_mesh(-1, 1, 0.5, 1.0 / 16), constant_field(0.0), cfg);
  const auto e1 = garding_check(sys, 200, 7), e2 = garding_check(sys, 200, 7);
  CHECK(e1.c_hat == e2.c_hat);
  CHECK(e1.c_hat >= 0.0);
  CHECK_THROWS_AS(garding_check(sys, 10, 7), ArgumentError);

  const auto big = assemble(fx::ti(fx::fractional(0.25)), build_mesh(-1, 1, 0.5, 1.0 / 16), constant_field(0.0), cfg);
  const auto small =
      assemble(fx::ti(fx::fractional(0.25)), build_mesh(-0.5, 0.5, 0.5, 1.0 / 16), constant_field(0.0), cfg);
  const double l_big = poincare_lambda1(big), l_small = poincare_lambda1(small);
  CHECK(l_big > 0);
  CHECK(l_small > l_big);
}

TEST_CASE("resonance is reported") {
  QuadConfig cfg;
  const auto mesh = build_mesh(-1, 1, 0.5, 1.0 / 16);
  const auto base = assemble(fx::ti(fx::fractional(0.25)), mesh, constant_field(0.0), cfg);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(base.S, base.mass, Eigen::EigenvaluesOnly);
  const double mu = es.eigenvalues()(0);
  const auto sys = assemble(fx::ti(fx::fractional(0.25)), mesh, constant_field(mu), cfg);
  CHECK_THROWS_AS(solve(sys, constant_field(1.0), ExteriorData{}), NumericalError);
}

TEST_CASE("solution csv") {
  QuadConfig cfg;
  const auto sys = assemble(fx::ti(fx::fractional(0.25)), build_mesh(-1, 1, 1, 0.5), constant_field(0.0), cfg);
  const auto u = solve(sys, constant_field(1.0), ExteriorData{});
  const auto csv = solution_csv(u);
  CHECK(csv.rfind("x,u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}
