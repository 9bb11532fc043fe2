// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cryptorisk/cli/commands.hpp"
#include "cryptorisk/cli/config.hpp"
#include "cryptorisk/error.hpp"

namespace {

using cryptorisk::cli::RunConfig;
using cryptorisk::cli::Written;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> model;
  std::optional<double> alpha;
  std::optional<std::size_t> window;
  std::optional<std::size_t> scenarios;
  std::optional<unsigned> threads;
};

RunConfig effective_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : cryptorisk::cli::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out_dir = *o.out;
  if (o.model) c.models = {*o.model};
  if (o.alpha) c.alpha = *o.alpha;
  if (o.window) c.window = *o.window;
  if (o.scenarios) c.scenarios = *o.scenarios;
  if (o.threads) c.threads = *o.threads;
  return c;
}

void print_error(const std::string& command, const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"command", command}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crypto-portfolio risk toolkit"};
  app.require_subcommand(1);
  Overrides o;

  const std::map<std::string, std::pair<std::string, std::function<Written(const RunConfig&)>>> commands{
      {"ingest", {"Align price files into a return panel and summary statistics", cryptorisk::cli::cmd_ingest}},
      {"backtest", {"Rolling VaR/CVaR backtest across the model grid", cryptorisk::cli::cmd_backtest}},
      {"optimize", {"Rolling min-variance and min-CVaR portfolios", cryptorisk::cli::cmd_optimize}},
      {"riskbudget", {"Euler risk contributions of the equal-weight portfolio", cryptorisk::cli::cmd_riskbudget}},
      {"ratios", {"Risk-adjusted return measures of the optimized portfolios", cryptorisk::cli::cmd_ratios}},
      {"price", {"Esscher NIG-GARCH option surfaces for both portfolios", cryptorisk::cli::cmd_price}},
      {"synth", {"Write a synthetic sample data set", cryptorisk::cli::cmd_synth}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Top-level random seed");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--model", o.model, "Single backtest model, e.g. mvt_nu5, tcopula_ws0.8, mvg");
    sub->add_option("--alpha", o.alpha, "Tail probability");
    sub->add_option("--window", o.window, "In-sample window length");
    sub->add_option("--scenarios", o.scenarios, "Monte Carlo scenarios per day");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("", "usage", e.what());
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = effective_config(o);
    for (const auto& path : commands.at(name).second(config)) std::cout << path.string() << '\n';
    return 0;
  } catch (const cryptorisk::Error& e) {
    print_error(name, std::string(cryptorisk::to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    print_error(name, "internal", e.what());
  }
  return 1;
}
