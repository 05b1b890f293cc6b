// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "dominance/cli.hpp"
#include "dominance/parallel.hpp"

namespace {

using dominance::IndexKind;
using dominance::TestMethod;
namespace cli = dominance::cli;

void add_common(CLI::App* sub, cli::RunConfig& config, std::string& format, int& threads) {
  sub->add_option("--seed", config.seed, "Random seed");
  sub->add_option("--threads", threads, "Worker threads (default: $DOMINANCE_LAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("-o,--output", config.output, "Write the document to this file");
}

void add_index_kind(CLI::App* sub, cli::RunConfig& config) {
  const std::map<std::string, IndexKind> kinds{{"pi", IndexKind::kPi}, {"gamma", IndexKind::kGamma}};
  sub->add_option("--index", config.index, "Dominance index")->transform(CLI::CheckedTransformer(kinds));
}

void add_test_options(CLI::App* sub, cli::RunConfig& config) {
  const std::map<std::string, TestMethod> methods{
      {"lf", TestMethod::kLeastFavorable}, {"boot", TestMethod::kBootstrap}, {"plugin", TestMethod::kPluginNormal}};
  sub->add_option("--alpha", config.alpha, "Nominal level");
  sub->add_option("--method", config.method, "Test method")->transform(CLI::CheckedTransformer(methods));
  sub->add_option("--B", config.replicates, "Bootstrap replicates");
  sub->add_flag("--bias-correct-gamma", config.bias_correct_gamma, "Bias-correct the gamma estimate");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominance indices for two samples: estimation, tests and simulation"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string format = "json";
  int threads = 0;
  std::string mu_range;
  std::string sigma_range;

  auto* index = app.add_subcommand("index", "Empirical pi and gamma for two samples");
  index->add_option("inputs", config.inputs, "One grouped file (group,value) or two column files")
      ->required()
      ->expected(1, 2);
  index->add_flag("--assume-normal", config.assume_normal, "Add normal plug-in values");
  add_common(index, config, format, threads);

  auto* test = app.add_subcommand("test", "Test H0: index >= delta0 against H1: index < delta0");
  test->add_option("inputs", config.inputs, "One grouped file (group,value) or two column files")
      ->required()
      ->expected(1, 2);
  add_index_kind(test, config);
  test->add_option("--delta0", config.delta0, "Tolerance under the null")->expected(1);
  add_test_options(test, config);
  add_common(test, config, format, threads);

  auto* simulate = app.add_subcommand("simulate", "Rejection rates with F = N(0,1), G = N(mu, sigma^2)");
  add_index_kind(simulate, config);
  simulate->add_option("--delta0", config.delta0, "Tolerances (one or more)")->delimiter(',');
  add_test_options(simulate, config);
  simulate->add_option("--reps", config.reps, "Monte Carlo replications per cell");
  simulate->add_option("--preset", config.preset, "Reference design grid")->check(CLI::IsMember({"pi-grid", "gamma-grid"}));
  simulate->add_option("--mu", config.mu, "Means of G")->delimiter(',');
  simulate->add_option("--sigma", config.sigma, "Scales of G")->delimiter(',');
  simulate->add_option("--n", config.n, "Sizes of the x sample")->delimiter(',');
  simulate->add_option("--m", config.m, "Sizes of the y sample (default: n)")->delimiter(',');
  simulate->add_flag("--timing", config.timing, "Append wall time per cell");
  add_common(simulate, config, format, threads);

  auto* contour = app.add_subcommand("contour", "Population index over a (mu, sigma) grid");
  add_index_kind(contour, config);
  contour->add_option("--mu-range", mu_range, "a:b:n")->required();
  contour->add_option("--sigma-range", sigma_range, "a:b:n")->required();
  add_common(contour, config, format, threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  std::string document;
  try {
    if (index->parsed()) config.command = cli::Command::kIndex;
    if (test->parsed()) config.command = cli::Command::kTest;
    if (simulate->parsed()) config.command = cli::Command::kSimulate;
    if (contour->parsed()) {
      config.command = cli::Command::kContour;
      config.mu_range = cli::parse_range(mu_range);
      config.sigma_range = cli::parse_range(sigma_range);
    }
    config.format = format == "csv" ? cli::OutputFormat::kCsv : cli::OutputFormat::kJson;
    config.threads = threads > 0 ? static_cast<unsigned>(threads) : dominance::default_thread_count();
    document = cli::run(config);
  } catch (const std::exception& error) {
    std::cerr << "dominance_lab: " << error.what() << '\n';
    return cli::exit_code_for(error);
  }

  if (config.output.empty()) {
    std::cout << document;
    std::cout.flush();
    return std::cout ? cli::kExitOk : cli::kExitNumerical;
  }
  std::ofstream out(config.output, std::ios::binary);
  out << document;
  if (!out) {
    std::cerr << "dominance_lab: cannot write " << config.output << '\n';
    return cli::kExitUsage;
  }
  return cli::kExitOk;
}
