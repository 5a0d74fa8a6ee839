#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "nlreg/conditions.hpp"

#include <cmath>

using namespace nlreg;

TEST_CASE("A1 power counting") {
  QuadConfig cfg;
  const auto k = fx::fractional(0.25);
  CHECK(check_A1(k, 0.75, cfg).verdict == Verdict::pass);
  CHECK(check_A1(k, 0.25, cfg).verdict == Verdict::fail);
  for (double g : {0.05, 0.5, 1.0}) CHECK(check_A1(fx::indicator(), g, cfg).passed());
  CHECK(scan_A1(k, cfg).constant("gamma") == doctest::Approx(0.55));
  // threshold 5/6 for the oscillating example
  CHECK(scan_A1(fx::oscillating_example(), cfg).constant("gamma") == doctest::Approx(0.85));
}

TEST_CASE("A2 growth of L(r,1)") {
  QuadConfig cfg;
  CHECK(check_A2(fx::fractional(0.25), cfg).passed());
  CHECK(check_A2(fx::one_minus_sin(), cfg).passed());
  const auto rep = check_A2(fx::indicator(), cfg);
  CHECK(rep.verdict == Verdict::fail);
  REQUIRE(!rep.evidence.empty());
  CHECK(rep.evidence.back().second == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("A3_1 fractional constant per sigma") {
  QuadConfig cfg;
  const auto k = fx::fractional(0.25);
  for (double s : {0.5, 0.4, 0.3, 0.2, 0.1, 0.05}) {
    A31Options o;
    o.sigmas = {s};
    const auto rep = check_A3_1(k, 0.5, cfg, o);
    REQUIRE(rep.passed());
    CHECK(rep.sampled);
    const double sharp = std::min(std::pow(1 - s, 1.5), std::pow(1 + s, -1.5));
    CHECK(std::abs(rep.constant("c0") - sharp) <= 0.05 * sharp);
  }
}

TEST_CASE("A3_1 verdicts") {
  QuadConfig cfg;
  const auto ex1 = check_A3_1(fx::asym_example(), 0.5, cfg);
  CHECK(ex1.passed());
  CHECK(ex1.constant("sigma") == doctest::Approx(0.5));
  CHECK(check_A3_1(fx::one_minus_sin(), 0.5, cfg).verdict == Verdict::fail);
  CHECK(check_A3_1(fx::oscillating_example(), 0.5, cfg).verdict == Verdict::fail);
  CHECK(check_A3_1(fx::cone_example(), 0.9, cfg).verdict == Verdict::fail);
}

TEST_CASE("A3_1 is deterministic per seed") {
  QuadConfig cfg;
  A31Options o;
  o.seed = 7;
  const auto a = check_A3_1(fx::asym_example(), 0.5, cfg, o);
  const auto b = check_A3_1(fx::asym_example(), 0.5, cfg, o);
  CHECK(to_text(a) == to_text(b));
}

TEST_CASE("A3_2 constants") {
  QuadConfig cfg;
  const auto frac = check_A3_2(fx::fractional(0.25), 0.5, cfg);
  REQUIRE(frac.passed());
  CHECK(frac.constant("M") <= 0.5 + 1e-6);
  CHECK(frac.constant("M") >= 0.45);
  CHECK(bv_ratio(fx::fractional(0.25), 0.01, 0.3, cfg) ==
        doctest::Approx(0.01 * 2 * (std::pow(0.01, -1.5) - std::pow(0.3, -1.5)) / (4 / std::sqrt(0.01))));
  CHECK(check_A3_2(fx::one_minus_sin(), 0.5, cfg).passed());
  const auto cone = check_A3_2(fx::cone_example(), 0.9, cfg);
  REQUIRE(cone.passed());
  CHECK(cone.constant("M") <= 8 / M_PI + 2);
}

TEST_CASE("Kas") {
  QuadConfig cfg;
  for (const auto& k : {fx::fractional(0.25), fx::one_minus_sin(), fx::cone_example()}) {
    const auto rep = check_Kas(fx::ti(k), cfg);
    CHECK(rep.passed());
    CHECK(rep.constant("A") == 0.0);
  }
  CHECK(check_Kas(fx::ti(fx::asym_example()), cfg).verdict == Verdict::fail);
  const auto osc = check_Kas(fx::ti(fx::oscillating_example()), cfg);
  REQUIRE(osc.passed());
  CHECK(std::isfinite(osc.constant("A")));
}

TEST_CASE("alpha estimate") {
  QuadConfig cfg;
  CHECK(estimate_alpha(fx::fractional(0.25), cfg).constant("alpha") == doctest::Approx(0.5).epsilon(1e-6));
  auto ind = fx::indicator();
  const auto free = estimate_alpha(ind, cfg);
  CHECK(free.constant("slope") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(free.constant("alpha") == doctest::Approx(1.0));
  ind.gamma_hint = 0.75;
  CHECK(estimate_alpha(ind, cfg).constant("alpha") <= 0.25 + 1e-15);
}

TEST_CASE("example matrix") {
  QuadConfig cfg;
  struct Row {
    KernelSpec k;
    double R0;
    bool a31, a32, kas;
  };
  const std::vector<Row> rows{{fx::asym_example(), 0.5, true, true, false},
                              {fx::one_minus_sin(), 0.5, false, true, true},
                              {fx::cone_example(), 0.9, false, true, true},
                              {fx::fractional(0.25), 0.5, true, true, true}};
  for (const auto& r : rows) {
    const auto s = run_all(fx::ti(r.k), r.R0, cfg, 1);
    CHECK(s.A1.passed());
    CHECK(s.A2.passed());
    CHECK(s.A3_1.passed() == r.a31);
    CHECK(s.A3_2.passed() == r.a32);
    CHECK(s.Kas.passed() == r.kas);
    CHECK(s.B.passed());
    for (const auto* rep : s.all())
      if (rep->verdict != Verdict::inconclusive) CHECK(!rep->constants.empty());
  }
}

TEST_CASE("csv rows") {
  QuadConfig cfg;
  const auto rep = check_A2(fx::fractional(0.25), cfg);
  const auto rows = to_csv_rows(rep);
  CHECK(rows.rfind("A2,pass,", 0) == 0);
  CHECK(csv_header() == "condition,verdict,key,value\n");
}
