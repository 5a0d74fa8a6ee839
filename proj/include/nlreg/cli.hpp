#pragma once

#include "nlreg/config.hpp"
#include "nlreg/growth.hpp"
#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nlreg {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_unsupported = 3, exit_numeric = 4 };

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::string config_path;
  /// empty keeps [run] out, default "out"
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  /// overrides [quadrature] rel_tol
  std::optional<double> tol;
};

/// Parsed run: the raw config plus the pieces every subcommand shares.
struct RunConfig {
  Config raw;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  QuadConfig quad;
  /// [conditions] R0
  double R0 = 0.5;
  GrowthOptions growth;

  /// Kernel from the [kernel] section; throws ValidationError when missing.
  TwoPointKernel kernel() const;
};

RunConfig load_run_config(const Config& raw, const RunOptions& opt);

const std::vector<std::string>& command_names();

/// Runs one subcommand and maps library errors onto exit codes; messages go to err.
int run_command(const std::string& command, const RunOptions& opt, std::ostream& out, std::ostream& err);

/// Closed-form solution of L u = f on (c - rho, c + rho) for the 1D fractional kernel
/// with constant f and zero exterior data.
double fractional_poisson_exact(double s, double f, double center, double rho, double x);

}  // namespace nlreg
