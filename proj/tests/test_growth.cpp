#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/growth.hpp"

#include <cmath>

using namespace nlreg;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ConditionSuite fractional_suite(const QuadConfig& cfg) {
  auto s = run_all(fx::ti(fx::fractional(0.25)), 0.5, cfg, 1);
  s.A3_1.constants["c0"] = std::pow(3.0, -1.5);
  s.A3_1.constants["sigma"] = 0.5;
  return s;
}

// closed forms for 2s = 0.5, N = 1
double frac_L(double r, double R) { return 4.0 * (std::pow(r, -0.5) - (std::isinf(R) ? 0.0 : std::pow(R, -0.5))); }

}  // namespace

TEST_CASE("bump constants") {
  const auto b = bump_constants();
  CHECK(b(0.0) == 1.0);
  CHECK(b(0.5) == doctest::Approx(0.8));
  CHECK(b(1.0) == doctest::Approx(0.5));
  CHECK(b.sup_grad == doctest::Approx(3 * std::sqrt(3.0) / 8));
  CHECK(b.c_b == doctest::Approx(2.0));
}

TEST_CASE("dyadic radii for the fractional kernel") {
  QuadConfig cfg;
  const auto radii = find_radii(fx::fractional(0.25), 85.0, 12, cfg);
  REQUIRE(radii.size() == 12);
  for (int k = 0; k < 12; ++k) CHECK(radii[k] == std::ldexp(1.0, -(k + 1)));
}

TEST_CASE("radii re-verify with independent quadrature") {
  QuadConfig cfg;
  const QuadConfig check = cfg.tightened(0.5);
  for (const auto& k : {fx::fractional(0.25), fx::one_minus_sin()}) {
    const double K0 = 16.0 / (std::sqrt(2.0) - 1.0);
    const auto radii = find_radii(k, K0, 12, cfg);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (i > 0) CHECK(radii[i] < radii[i - 1]);
      const double m = first_moment(k, radii[i], check).value;
      const double L = annulus_integral(k, radii[i], 2 * radii[i], check).value;
      CHECK(m <= K0 * radii[i] * L * (1 + 1e-6));
    }
  }
}

TEST_CASE("radii need a non-integrable kernel") {
  QuadConfig cfg;
  CHECK_THROWS_AS(find_radii(fx::indicator(), 85.0, 4, cfg), UnsupportedKernelError);
}

TEST_CASE("k0 for the dyadic sequence") {
  QuadConfig cfg;
  const auto k = fx::fractional(0.25);
  const auto radii = find_radii(k, 85.0, 8, cfg);
  CHECK(k0_for(0.5, 85.0, radii, {1.0, 0.5, 0.25}, k, cfg) == 1);
  CHECK(k0_for(0.9, 85.0, radii, {1.0}, k, cfg) == 0);
  CHECK_THROWS_AS(k0_for(1e-9, 85.0, radii, {1.0}, k, cfg), SearchError);
}

TEST_CASE("theta0") {
  const double t = theta0_for(85.0, 0.5);
  CHECK(t == doctest::Approx(2.9e-3).epsilon(0.02));
  CHECK(theta0_lhs(t, 85.0, 0.5) <= 0.25);
  CHECK(0.25 - theta0_lhs(t, 85.0, 0.5) < 1e-10 * 1e3);
  CHECK(theta0_lhs(t + 2e-10, 85.0, 0.5) > 0.25);
  CHECK(theta0_for(85.0, 1e-9) == 0.5);
  CHECK(theta0_for(85.0, 0.0) == 0.5);
  const double t1 = theta0_for(1e4, 1.0), t2 = theta0_for(1e4, 2.0);
  CHECK(t2 / t1 == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("doubling case constants") {
  QuadConfig cfg;
  const auto k = fx::fractional(0.25);
  const auto p = growth_params(k, fractional_suite(cfg), 0.5, cfg);
  CHECK(p.growth_case == GrowthCase::doubling);
  CHECK(p.K0 == doctest::Approx(16 / (std::sqrt(2.0) - 1)));
  CHECK(p.vartheta == 0.5);
  CHECK(p.eta == 0.25);
  CHECK(p.a == doctest::Approx(32 * std::pow(3.0, 1.5) * (2 * p.K0 + 1)));
  CHECK(p.a == doctest::Approx(1.297e4).epsilon(1e-2));
  CHECK(p.theta == doctest::Approx(0.3 / p.a));
  CHECK(p.theta == doctest::Approx(2.31e-5).epsilon(1e-3));
  CHECK(p.d_a == doctest::Approx(1 + 0.5 / p.a));
  for (double v : {p.theta, p.eta, p.vartheta}) CHECK((v > 0 && v < 1));
  CHECK((p.d_a > 0 && p.d_a < 2));
  // h proportional to L
  REQUIRE(p.h_table.size() > 2);
  const auto [r1, h1] = p.h_table[0];
  const auto [r2, h2] = p.h_table[3];
  CHECK(h2 / h1 == doctest::Approx(L_total(k, r2, cfg).value / L_total(k, r1, cfg).value));
  for (std::size_t i = 1; i < p.h_table.size(); ++i) CHECK(p.h_table[i].second > p.h_table[i - 1].second);
  double prev = 0.0;
  for (double r : p.radii) {
    const double h = eval_h(p, k, r, cfg);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("bounded variation case") {
  QuadConfig cfg;
  GrowthOptions o;
  o.force_case = GrowthCase::bounded_variation;
  const auto p = growth_params(fx::fractional(0.25), fractional_suite(cfg), 0.5, cfg, o);
  CHECK(p.vartheta == p.vartheta0);
  CHECK(p.eta == p.vartheta0 / 2);
  CHECK(theta0_lhs(p.vartheta0, p.K0, p.M) <= 0.25);
  CHECK(p.a > 32 * p.c_b * (p.K0 / p.vartheta + 1));
  CHECK((p.theta > 0 && p.theta < 1));

  const auto cone = run_all(fx::ti(fx::cone_example()), 0.9, cfg, 1);
  const auto pc = growth_params(fx::cone_example(), cone, 0.9, cfg);
  CHECK(pc.growth_case == GrowthCase::bounded_variation);
}

TEST_CASE("unsupported kernels") {
  QuadConfig cfg;
  auto s = fractional_suite(cfg);
  s.A3_1.verdict = Verdict::fail;
  s.A3_2.verdict = Verdict::fail;
  CHECK_THROWS_AS(growth_params(fx::fractional(0.25), s, 0.5, cfg), UnsupportedKernelError);
}

TEST_CASE("radius selection") {
  QuadConfig cfg;
  const auto k = fx::fractional(0.25);
  const auto p = growth_params(k, fractional_suite(cfg), 0.9, cfg);
  const double R = 0.5, v = 10.0;
  const auto pick = pick_r(R, v, p, k, cfg);
  // closed-form scan from k0
  const std::size_t k0 = k0_for(R, p.K0, p.radii, {1.0, 0.5, 0.25, p.vartheta}, k, cfg);
  std::size_t expect = p.radii.size();
  for (std::size_t i = k0; i < p.radii.size(); ++i) {
    const double r = p.radii[i];
    if (frac_L(R - r, kInf) < p.c0 / (4 * (v + 2)) * frac_L(r, R)) {
      expect = i;
      break;
    }
  }
  CHECK(pick.index == expect);
  CHECK(pick_r(R, 40.0, p, k, cfg).r < pick.r);
  CHECK_THROWS_AS(pick_r(R, v, p, k, cfg, 1e9), SearchError);
}
