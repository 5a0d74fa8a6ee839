#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlreg/cli.hpp"
#include "nlreg/errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nlreg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nlreg_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.ini";
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd, const std::string& config, const fs::path& out, std::string* err = nullptr,
        std::optional<std::uint64_t> seed = std::nullopt) {
  RunOptions o;
  o.config_path = config;
  o.out_dir = out.string();
  o.seed = seed;
  std::ostringstream so, se;
  const int code = run_command(cmd, o, so, se);
  if (err) *err = se.str();
  return code;
}

const std::string kFractional = "[kernel]\nfamily=fractional\ns=0.25\n";

}  // namespace

TEST_CASE("closed-form fractional Poisson solution") {
  CHECK(fractional_poisson_exact(0.5, 1.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0 / M_PI));
  CHECK(fractional_poisson_exact(0.5, 1.0, 0.0, 1.0, 0.6) == doctest::Approx(0.8 / M_PI));
  CHECK(fractional_poisson_exact(0.25, 2.0, 1.0, 0.5, 1.0) == doctest::Approx(2 * std::sin(M_PI / 4) / M_PI *
                                                                              std::pow(0.25, 0.25)));
  CHECK(fractional_poisson_exact(0.5, 1.0, 0.0, 1.0, 1.5) == 0.0);
  CHECK_THROWS_AS(fractional_poisson_exact(1.0, 1.0, 0.0, 1.0, 0.0), ArgumentError);
}

TEST_CASE("run config defaults and overrides") {
  const auto c = Config::from_string(kFractional + "[run]\nseed=5\nout=o\n[quadrature]\nrel_tol=1e-6\n");
  auto r = load_run_config(c, {});
  CHECK(r.seed == 5);
  CHECK(r.out_dir == "o");
  CHECK(r.quad.rel_tol == 1e-6);
  CHECK(r.R0 == 0.5);
  RunOptions o;
  o.seed = 9;
  o.tol = 1e-5;
  o.out_dir = "p";
  r = load_run_config(c, o);
  CHECK(r.seed == 9);
  CHECK(r.quad.rel_tol == 1e-5);
  CHECK(r.out_dir == "p");
  CHECK_THROWS_AS(load_run_config(Config::from_string("[run]\nseed=-3\n"), {}), ValidationError);
  CHECK_THROWS_AS(load_run_config(Config::from_string("[quadrature]\nrel_tol=0\n"), {}), ValidationError);
  CHECK_THROWS_AS(load_run_config(Config::from_string("[run]\n"), {}).kernel(), ValidationError);
}

TEST_CASE("exit codes") {
  const auto d = scratch("exit");
  std::string err;
  CHECK(run("check", write_config(d, "[run]\nseed=1\n"), d / "o", &err) == exit_config);
  CHECK(err.find("kernel") != std::string::npos);
  CHECK(run("check", write_config(d, "[kernel\nfamily=fractional\n"), d / "o", &err) == exit_config);
  CHECK(err.find("line 1") != std::string::npos);
  CHECK(run("check", (d / "absent.ini").string(), d / "o") == exit_config);
  CHECK(run("nope", write_config(d, kFractional), d / "o") == exit_config);
  CHECK(run("verify", write_config(d, kFractional + "[experiment]\ntheorem=other\n"), d / "o") == exit_config);
  const std::string osc = "[kernel]\nfamily=custom\nlambda=2\n[kernel.custom]\nkind=oscillating_power\n";
  CHECK(run("growth", write_config(d, osc), d / "o", &err) == exit_unsupported);
  CHECK(run("solve", write_config(d, kFractional + "[mesh]\nh=0.3\n"), d / "o", &err) == exit_numeric);
  // fail verdicts are not errors
  CHECK(run("check", write_config(d, osc), d / "o") == exit_ok);
  CHECK(slurp(d / "o" / "conditions.csv").find("A3_2,fail") != std::string::npos);
}

TEST_CASE("solve reports the benchmark error") {
  const auto d = scratch("solve");
  const auto cfg = write_config(d,
                                "[kernel]\nfamily=fractional\ns=0.5\n[mesh]\nh=0.0078125\n[data]\nf=1\ng=0\n"
                                "[benchmark]\nexact=fractional_poisson\n");
  REQUIRE(run("solve", cfg, d / "o") == exit_ok);
  const auto sum = slurp(d / "o" / "summary.csv");
  const auto at = sum.find("rel_l2_error,");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(sum.substr(at + 13)) < 0.05);
  CHECK(slurp(d / "o" / "solution.csv").rfind("x,u\n", 0) == 0);
  CHECK(slurp(d / "o" / "solution.svg").find("<svg") == 0);
  const auto bad = write_config(d, kFractional + "[data]\nf=random\n[benchmark]\nexact=fractional_poisson\n");
  CHECK(run("solve", bad, d / "o") == exit_config);
}

TEST_CASE("seed reaches the random sources") {
  const auto d = scratch("seed");
  const auto cfg = write_config(d, kFractional + "[mesh]\nh=0.03125\n[data]\nf=random\n");
  REQUIRE(run("solve", cfg, d / "a", nullptr, 1) == exit_ok);
  REQUIRE(run("solve", cfg, d / "b", nullptr, 1) == exit_ok);
  REQUIRE(run("solve", cfg, d / "c", nullptr, 2) == exit_ok);
  CHECK(slurp(d / "a" / "solution.csv") == slurp(d / "b" / "solution.csv"));
  CHECK(slurp(d / "a" / "solution.csv") != slurp(d / "c" / "solution.csv"));
}
