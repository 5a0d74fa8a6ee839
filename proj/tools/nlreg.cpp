#include "nlreg/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Regularity toolkit for nonlocal operators with singular kernels"};
  app.require_subcommand(1, 1);

  nlreg::RunOptions opt;
  std::uint64_t seed = 0;
  double tol = 0.0;
  for (const auto& name : nlreg::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "run configuration file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for all sampling");
    sub->add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? nlreg::exit_ok : nlreg::exit_config;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--tol")) opt.tol = tol;
  return nlreg::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
