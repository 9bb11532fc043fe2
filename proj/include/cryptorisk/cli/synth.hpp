// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cryptorisk/marketdata.hpp"

namespace cryptorisk::cli {

struct SynthAsset {
  std::string name;
  double initial_price = 1.0;
  double daily_vol = 0.05;
  double drift = 0.0;
};

struct SynthOptions {
  std::string start = "2017-07-25";
  std::string end = "2019-07-02";
  std::vector<SynthAsset> cryptos{{"BTC", 2750.0, 0.042, 0.0005}, {"ETH", 225.0, 0.055, 0.0003},
                                  {"XRP", 0.19, 0.068, 0.0004},   {"LTC", 45.0, 0.060, 0.0003},
                                  {"BCH", 420.0, 0.075, 0.0001},  {"EOS", 1.6, 0.072, 0.0008},
                                  {"BNB", 0.17, 0.070, 0.0015}};
  SynthAsset benchmark{"SPY", 245.0, 0.009, 0.0003};
  /// Pairwise correlation of the crypto innovations.
  double correlation = 0.6;
  double nu = 5.0;
  std::uint64_t seed = 7;
};

/// Gaussian-GARCH(1,1) price paths driven by multivariate-t innovations
/// for the cryptos (every calendar day) and an independent weekday-only
/// benchmark, as price series in the order cryptos..., benchmark.
std::vector<marketdata::PriceSeries> synth_prices(const SynthOptions& options);

/// Weekday yield curve (annual percent) around `level`.
marketdata::PriceSeries synth_yields(const SynthOptions& options, const std::string& name, double level);

/// Writes <name>.csv for every series plus treasury_10y.csv and treasury_6m.csv;
/// returns the written paths. `header` becomes the leading comment line.
std::vector<std::filesystem::path> write_sample_data(const SynthOptions& options, const std::filesystem::path& dir,
                                                     const std::string& header);

}  // namespace cryptorisk::cli
