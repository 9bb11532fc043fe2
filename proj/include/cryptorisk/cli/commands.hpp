// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Subcommand bodies. Each is a pure function of the input files and the
// RunConfig and returns the files it wrote under config.out_dir.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cryptorisk/cli/config.hpp"
#include "cryptorisk/marketdata.hpp"
#include "cryptorisk/optimize.hpp"

namespace cryptorisk::cli {

using Written = std::vector<std::filesystem::path>;

/// Aligned returns from `window` rows before out_of_sample_start through end_date.
struct StudyData {
  marketdata::ReturnPanel cryptos;
  std::string benchmark_name;
  std::vector<double> benchmark;  // empty without a benchmark
  std::size_t window = 0;         // in-sample rows; row `window` is the first out-of-sample day
};

StudyData load_study(const RunConfig& config);

/// Daily rates (from annual percent yields) carried forward onto `dates`.
std::vector<double> risk_free_on(const std::filesystem::path& yields, std::span<const marketdata::Date> dates);

optimize::RollingConfig rolling_config(const RunConfig& config);

Written cmd_ingest(const RunConfig& config);
Written cmd_backtest(const RunConfig& config);
Written cmd_optimize(const RunConfig& config);
Written cmd_riskbudget(const RunConfig& config);
Written cmd_ratios(const RunConfig& config);
Written cmd_price(const RunConfig& config);
Written cmd_synth(const RunConfig& config);

}  // namespace cryptorisk::cli
