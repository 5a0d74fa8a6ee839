#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "nlreg/errors.hpp"

#include <random>

using namespace nlreg;

TEST_CASE("density values") {
  CHECK(eval_density(fx::fractional(0.25), 0.5) == doctest::Approx(std::pow(0.5, -1.5)).epsilon(1e-14));
  CHECK(eval_density(fx::one_minus_sin(), 1.0) == doctest::Approx(1.0));
  CHECK(eval_density(fx::fractional(0.5), -2.0) == doctest::Approx(0.25));

  const auto cone = fx::cone_example();
  CHECK(eval_density(cone, Point{0.0, 0.5}) == 0.0);
  CHECK(eval_density(cone, Point{-0.0, -0.5}) == 0.0);
  const double a = 0.3 + M_PI / 8;
  CHECK(eval_density(cone, Point{0.5 * std::cos(a), 0.5 * std::sin(a)}) == doctest::Approx(4.0));
  CHECK(eval_density(cone, Point{-0.5 * std::cos(a), -0.5 * std::sin(a)}) == doctest::Approx(4.0));
  CHECK(eval_density(cone, Point{2 * std::cos(a), 2 * std::sin(a)}) == 0.0);

  CHECK_THROWS_AS(eval_density(fx::fractional(0.25), 0.0), SingularPointError);
}

TEST_CASE("tabulated densities refuse extrapolation") {
  KernelSpec k;
  k.family = Family::custom;
  k.custom.kind = CustomKind::tabulated;
  k.custom.table.radii = {0.01, 0.1, 1.0};
  k.custom.table.values = {1e3, 1e1, 1.0};
  k.validate();
  CHECK(eval_density(k, 0.1) == doctest::Approx(10.0));
  // log-log interpolation reproduces a power between nodes
  CHECK(eval_density(k, std::sqrt(0.1)) == doctest::Approx(1.0 / std::sqrt(0.1)));
  CHECK(eval_density(k, std::sqrt(0.001)) == doctest::Approx(100.0));
  CHECK_THROWS_AS(eval_density(k, 0.001), ExtrapolationError);
}

TEST_CASE("decompose") {
  const auto K = fx::ti(fx::asym_example());
  const double h = 0.3;
  auto d = decompose(K, Point{0.0, 0.0}, Point{h, 0.0});
  CHECK(d.sym == doctest::Approx(1.5 * std::pow(h, -1.5)));
  CHECK(d.anti == doctest::Approx(-0.5 * std::pow(h, -1.5)));
  auto e = decompose(K, Point{h, 0.0}, Point{0.0, 0.0});
  CHECK(e.sym == d.sym);
  CHECK(e.anti == -d.anti);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& spec : {fx::fractional(0.3), fx::one_minus_sin(), fx::oscillating_example()}) {
    const auto Ks = fx::ti(spec);
    for (int i = 0; i < 200; ++i) {
      Point x{u(rng), 0}, y{u(rng), 0};
      if (x[0] == y[0]) continue;
      auto p = decompose(Ks, x, y);
      CHECK(p.sym >= std::abs(p.anti));
      CHECK(p.sym + p.anti == doctest::Approx(Ks(x, y)).epsilon(1e-14));
      if (spec.is_even()) CHECK(p.anti == 0.0);
    }
  }
}

TEST_CASE("densities are nonnegative and comparable") {
  std::vector<KernelSpec> all{fx::fractional(0.25), fx::asym_example(), fx::oscillating_example(),
                              fx::one_minus_sin(), fx::cone_example(), fx::indicator(2)};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const auto& k : all) {
    for (int i = 0; i < 2000; ++i) {
      Point z{u(rng), k.dim == 2 ? u(rng) : 0.0};
      if (z[0] == 0.0 && z[1] == 0.0) continue;
      CHECK(eval_density(k, z) >= 0.0);
    }
    CHECK(comparability_violation(fx::ti(k), 10000, 3) == 0.0);
  }
  TwoPointKernel w;
  w.base = fx::fractional(0.25);
  w.base.lambda = 2.0;
  w.mode = KernelMode::x_modulated;
  w.weight_delta = 0.5;
  w.weight_omega = 3.0;
  w.validate();
  CHECK(comparability_violation(w, 10000, 3) == 0.0);
  CHECK_FALSE(w.is_symmetric());
}

TEST_CASE("builder validation") {
  auto build = [](const std::string& text) { return build_kernel(Config::from_string(text)); };
  CHECK_THROWS_AS(build("[kernel]\nfamily=fractional\ns=1.2\n"), ValidationError);
  CHECK_THROWS_AS(build("[kernel]\nfamily=fractional\ns=0.5\ngamma_hint=1.5\n"), ValidationError);
  CHECK_NOTHROW(build("[kernel]\nfamily=fractional\ns=0.5\ngamma_hint=0.99\n"));
  CHECK_THROWS_AS(build("[kernel]\nfamily=fractional\ns=0.25\nlambda=0.5\n"), ValidationError);
  CHECK_THROWS_AS(build("[other]\nx=1\n"), ValidationError);
  try {
    build("[kernel]\nfamily=fractional\ns=1.2\n");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "kernel.s");
  }
  const auto cone = build(
      "[kernel]\nfamily=cone\ndimension=2\narcs=0.3,1.08,3.441592653589793,4.221592653589793\n"
      "[kernel.ell]\nkind=constant\ncutoff=1\n");
  CHECK(cone.arcs.size() == 2);
  CHECK_THROWS_AS(build("[kernel]\nfamily=cone\ndimension=2\narcs=0.3,1.08\n[kernel.ell]\nkind=constant\n"),
                  ValidationError);
  CHECK_THROWS_AS(build("[kernel]\nfamily=cone\ndimension=2\narcs=\n[kernel.ell]\nkind=constant\n"),
                  ValidationError);
  // fractional defaults gamma_hint to 2s when 2s < 1
  CHECK(*build("[kernel]\nfamily=fractional\ns=0.25\n").gamma_hint == doctest::Approx(0.5));
}

TEST_CASE("config round trip") {
  for (const auto& k : {fx::fractional(0.25), fx::asym_example(), fx::oscillating_example(), fx::one_minus_sin(),
                        fx::cone_example(), fx::indicator(2)}) {
    Config c;
    write_kernel(k, c);
    const auto back = build_kernel(Config::from_string(c.to_string()));
    CHECK(back.describe() == k.describe());
    Config c2;
    write_kernel(back, c2);
    CHECK(c2.to_string() == c.to_string());
  }
}

TEST_CASE("radial reductions") {
  CHECK(radial_mass(fx::fractional(0.25), 0.5) == doctest::Approx(2 * std::pow(0.5, -1.5)));
  CHECK(radial_mass(fx::cone_example(), 0.5) == doctest::Approx(M_PI / 2 / 0.5));
  CHECK(radial_mass(fx::cone_example(), 1.5) == 0.0);
  CHECK(arc_boundary_count(fx::cone_example()) == 4);
  CHECK(antisym_ratio(fx::asym_example(), 0.2) == doctest::Approx(std::pow(0.2, -1.5) / 3.0));
  CHECK(antisym_ratio(fx::fractional(0.25), 0.2) == 0.0);
}
