#pragma once

#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nlreg {

enum class Condition { A1, A2, A3_1, A3_2, Kas, B };
enum class Verdict { pass, fail, inconclusive };

std::string condition_name(Condition c);
std::string verdict_name(Verdict v);

struct ConditionReport {
  Condition condition = Condition::A1;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, double> constants;
  /// (scale, measured value) samples backing the verdict
  std::vector<std::pair<double, double>> evidence;
  std::string diagnostics;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  /// The verdict rests on sampling rather than on an integral bound.
  bool sampled = false;

  bool passed() const { return verdict == Verdict::pass; }
  double constant(const std::string& key) const;
};

/// Integrability of min{1,|z|^gamma} j.
ConditionReport check_A1(const KernelSpec& spec, double gamma, const QuadConfig& cfg);
/// Smallest gamma on {0.05, 0.1, ..., 0.95, 0.99} for which check_A1 passes.
ConditionReport scan_A1(const KernelSpec& spec, const QuadConfig& cfg);
/// Non-integrability of j near 0, from L(r,1) on dyadic r.
ConditionReport check_A2(const KernelSpec& spec, const QuadConfig& cfg);

struct A31Options {
  std::vector<double> sigmas{0.5, 0.4, 0.3, 0.2, 0.1, 0.05};
  int samples = 1 << 14;
  /// radial sampling range is [R0 * depth, R0)
  double depth = 1e-8;
  std::uint64_t seed = 0;
};
/// Sampled search for (sigma, c0) in the scaling doubling condition.
ConditionReport check_A3_1(const KernelSpec& spec, double R0, const QuadConfig& cfg, const A31Options& opt = {});

struct A32Options {
  int decades = 4;
  int r_per_decade = 4;
  int R_per_r = 5;
};
/// sup of r * |Dj|(B_R \ B_r) / L(r,inf) over a log grid of r < R < R0.
ConditionReport check_A3_2(const KernelSpec& spec, double R0, const QuadConfig& cfg, const A32Options& opt = {});
/// Evaluate M(r,R) = r * |Dj|(B_R \ B_r) / L(r,inf) at one pair.
double bv_ratio(const KernelSpec& spec, double r, double R, const QuadConfig& cfg);

/// A(K) = sup_x of the integral of K_a^2 / K_s.
ConditionReport check_Kas(const TwoPointKernel& K, const QuadConfig& cfg);

/// Slope of log m(r) against log r, capped by 1 and by 1 - gamma_hint.
ConditionReport estimate_alpha(const KernelSpec& spec, const QuadConfig& cfg);

struct ConditionSuite {
  ConditionReport A1, A2, A3_1, A3_2, Kas, B;
  std::vector<const ConditionReport*> all() const { return {&A1, &A2, &A3_1, &A3_2, &Kas, &B}; }
};
ConditionSuite run_all(const TwoPointKernel& K, double R0, const QuadConfig& cfg, std::uint64_t seed = 0);

std::string to_text(const ConditionReport& r);
/// condition,verdict,key,value rows (one per constant; a bare row when there are none)
std::string to_csv_rows(const ConditionReport& r);
std::string csv_header();

}  // namespace nlreg
