#include "mtf/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

using mtf::cli::Command;
using mtf::cli::McChoice;
using mtf::cli::OutFormat;
using mtf::cli::RunConfig;

struct RawArgs {
  std::string gamma;
  std::string n;
  std::string format = "csv";
  std::string method = "both";
  std::string out;
};

void attach_common(CLI::App* cmd, RunConfig& config, RawArgs& raw,
                   bool with_mc) {
  cmd->add_option("--gamma", raw.gamma,
                  "gamma grid: comma list or start:stop:step");
  cmd->add_option("--n", raw.n, "list sizes: comma list or start:stop:step");
  cmd->add_option("--kmax", config.k_max, "highest moment order");
  cmd->add_option("--seed", config.seed, "base RNG seed");
  cmd->add_option("--format", raw.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", raw.out, "write the table to this file");
  cmd->add_option("--tol", config.tol,
                  "relative tolerance for verification comparisons");
  if (with_mc) {
    cmd->add_option("--samples", config.samples, "cost draws per weight draw");
    cmd->add_option("--burn-in", config.burn_in,
                    "chain burn-in steps (default 50 n)");
    cmd->add_option("--replicates", config.replicates,
                    "independent weight draws");
    cmd->add_option("--method", raw.method, "stationary sampler")
        ->check(CLI::IsMember({"chain", "exact", "both"}));
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments of the stationary move-to-front search cost under "
               "normalized stable weights"};
  app.require_subcommand(1);

  RunConfig config;
  RawArgs raw;

  auto* limits = app.add_subcommand(
      "limits", "limiting moments with divergence thresholds");
  attach_common(limits, config, raw, false);
  auto* finite_n = app.add_subcommand(
      "finite-n", "exact finite-n moments via the hypergeometric identity");
  attach_common(finite_n, config, raw, false);
  auto* quad = app.add_subcommand(
      "quadrature-check", "finite-n moments by analytic formula and by "
                          "numerical quadrature, side by side");
  attach_common(quad, config, raw, false);
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo moment estimates with standard errors");
  attach_common(simulate, config, raw, true);
  auto* verify = app.add_subcommand(
      "verify", "cross-validate analytic, quadrature, and Monte Carlo routes");
  attach_common(verify, config, raw, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (limits->parsed()) config.command = Command::Limits;
  if (finite_n->parsed()) config.command = Command::FiniteN;
  if (quad->parsed()) config.command = Command::QuadratureCheck;
  if (simulate->parsed()) config.command = Command::Simulate;
  if (verify->parsed()) config.command = Command::Verify;

  try {
    if (!raw.gamma.empty()) config.gammas = mtf::cli::parse_real_grid(raw.gamma);
    if (!raw.n.empty()) config.ns = mtf::cli::parse_int_grid(raw.n);
  } catch (const mtf::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  config.format = raw.format == "json" ? OutFormat::Json : OutFormat::Csv;
  config.method = raw.method == "chain"   ? McChoice::Chain
                  : raw.method == "exact" ? McChoice::Exact
                                          : McChoice::Both;
  if (!raw.out.empty()) config.out_path = raw.out;

  std::ofstream out_file;
  if (config.out_path) {
    out_file.open(*config.out_path);
    if (!out_file) {
      std::cerr << "error: cannot open output file " << *config.out_path
                << "\n";
      return 2;
    }
  }
  std::ostream& out = config.out_path ? out_file : std::cout;

  try {
    return mtf::cli::run_command(config, out, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
