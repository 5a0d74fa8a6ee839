#pragma once

#include "nlreg/continuity.hpp"
#include "nlreg/growth.hpp"
#include "nlreg/solver.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nlreg {

struct Quantity {
  std::string name;
  double value = 0.0;
};

enum class ReportVerdict { pass, fail, refused };
std::string report_verdict_name(ReportVerdict v);

struct VerificationReport {
  std::string theorem;
  /// hash of the inputs that determine the report
  std::string digest;
  std::vector<Quantity> measured;
  std::vector<Quantity> predicted;
  double margin = 0.0;
  double slack = 0.0;
  ReportVerdict verdict = ReportVerdict::refused;
  std::string diagnostic;

  bool passed() const { return verdict == ReportVerdict::pass; }
  /// Value of a measured or predicted quantity; throws ArgumentError when absent.
  double get(const std::string& name) const;
  std::string to_text() const;
  /// section,quantity,value rows with header
  std::string to_csv() const;
};

/// Hex digest of a text description of the inputs.
std::string digest(const std::string& text);

/// Closed interval [lo, hi] on the line.
struct Interval {
  double lo = 0.0, hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// ---------------------------------------------------------------- boundedness

struct BoundednessRatio {
  double u_sup = 0.0, f_sup = 0.0, g_sup = 0.0, u_l2 = 0.0;
  /// |u|_inf / (|f|_inf + |g|_inf + |u|_2)
  double full = 0.0;
  /// |u|_inf / (|f|_inf + |g|_inf)
  double reduced = 0.0;
};
/// Ratios for one discrete solution; 0/0 counts as 0.
BoundednessRatio boundedness_ratio(const DiscreteFunction& u, double f_sup);
/// sup of |f| sampled at cell Gauss points and nodes of the mesh inside [a,b]
double sampled_sup(const ScalarField& f, double a, double b, int samples = 4097);
/// P1 L2 norm over the domain (a,b) of the mesh
double l2_norm(const DiscreteFunction& u);

/// Random bounded sources: a constant plus four random cosines.
std::vector<ScalarField> random_sources(int count, std::uint64_t seed);

/// Lower bound for the total mass of j; +inf when it diverges.
double total_mass(const KernelSpec& spec, const QuadConfig& cfg);

struct BoundednessSetup {
  TwoPointKernel K;
  double a = -1.0, b = 1.0, collar = 1.0;
  std::vector<double> h{1.0 / 64, 1.0 / 128, 1.0 / 256};
  /// constant potential W
  double W = 0.0;
  int random_f = 20;
  std::uint64_t seed = 0;
  ExteriorData g;
  /// fractions t of the first resonance used for the W = t * mu_1 sweep; empty skips it
  std::vector<double> sweep{0.5, 0.9, 0.99, 0.999};
  /// allowed relative spread of the measured constant across h
  double stability = 0.10;
};
/// Empirical constant of the L-infinity bound across meshes and random sources.
VerificationReport verify_boundedness(const BoundednessSetup& s, const QuadConfig& cfg);

// ---------------------------------------------------------------- oscillation

struct OscillationTrace {
  double x0 = 0.0;
  /// (r, O(r)) with O(r) = (max - min)/2 over the closed ball
  std::vector<std::pair<double, double>> pairs;
  std::string to_csv() const;
};
OscillationTrace measure_oscillation(const DiscreteFunction& u, double x0, const std::vector<double>& radii);

// ---------------------------------------------------------------- continuity

struct PairCheck {
  long pairs = 0;
  long violations = 0;
  /// min over pairs of 1 - |u_i - u_j| / (omega(|x_i - x_j|) c); 1 when there are no pairs
  double worst_margin = 1.0;
  double worst_x = 0.0, worst_y = 0.0;
};
/// Checks |u_i - u_j| <= omega(|x_i - x_j|) c over all node pairs in A.
PairCheck check_pairs(const DiscreteFunction& u, const Interval& A, const Modulus& omega, double c);

/// sup over x in B_* of the integral of |u(y)| j(y - x) over y outside B.
double tail_term(const DiscreteFunction& u, const KernelSpec& spec, const Interval& Bs, const Interval& B,
                 const QuadConfig& cfg, int samples = 65);

struct ContinuityFactor {
  double u_sup_B = 0.0, f_sup_Bs = 0.0, tail = 0.0;
  double value() const { return u_sup_B + f_sup_Bs + tail; }
};
ContinuityFactor continuity_factor(const DiscreteFunction& u, const ScalarField& f, const KernelSpec& spec,
                                   const Interval& Bs, const Interval& B, const QuadConfig& cfg);

struct ContinuitySetup {
  Interval A{-0.25, 0.25}, Bs{-0.5, 0.5}, B{-0.75, 0.75};
  double R_star = 0.25;
  int n_max = 24;
  /// sup of |W| over B
  double w_sup = 0.0;
};
/// Builds omega for the kernel and checks every node pair of A against omega * c(f,u).
VerificationReport verify_continuity(const DiscreteFunction& u, const ScalarField& f, const TwoPointKernel& K,
                                     const GrowthParams& p, const ContinuitySetup& s, const QuadConfig& cfg,
                                     ModulusResult* modulus = nullptr);

// ---------------------------------------------------------------- growth

struct GrowthScenario {
  double R = 0.4375;
  double v_inf = 1.0;
  /// the inner solve domain is (-rho, rho), rho = rho_factor * r rounded up to the mesh
  double rho_factor = 1.5;
  /// exterior data on rho <= |x| <= R and beyond R
  double annulus_value = -1.0;
  double far_value = 1.0;
  /// constant source in the inner domain
  double source = 0.0;
  /// collar kept outside B_R for the residual check, in cells
  int outer_cells = 16;
  double residual_tol = 1e-8;
};
/// Builds v from the scenario, gates the three hypotheses, then checks max v on B_{eta r}
/// against 1 - theta + slack. The report margin is 1 - theta - max v - slack.
VerificationReport verify_growth(const TwoPointKernel& K, const GrowthParams& p, const GrowthScenario& sc, double h,
                                 const QuadConfig& cfg);

/// mu_j of the part of {v <= 0} in r < |x| < R, with P1 sign attribution.
double sign_set_measure(const DiscreteFunction& v, const KernelSpec& spec, double r, double R,
                        const QuadConfig& cfg);

// ---------------------------------------------------------------- output

struct Series {
  std::string name;
  std::vector<double> x, y;
};
/// Plain SVG line chart; log_x plots against log10 x.
std::string svg_line_chart(const std::string& title, const std::vector<Series>& series, bool log_x = false);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlreg
