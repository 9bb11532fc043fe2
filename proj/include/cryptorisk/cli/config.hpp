// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cryptorisk::cli {

struct AssetSource {
  std::string name;
  std::filesystem::path path;
};

/// Effective configuration of one CLI run. Relative data paths are resolved
/// against `base_dir` (the directory of the config file) when files are read.
struct RunConfig {
  std::vector<AssetSource> assets;
  std::optional<AssetSource> benchmark;
  /// date,yield CSVs in annual percent.
  std::filesystem::path risk_free_ratios;
  std::filesystem::path risk_free_option;

  /// First out-of-sample return date; the in-sample window ends the day before.
  std::string out_of_sample_start = "2018-04-04";
  std::string end_date = "2019-07-02";

  std::vector<std::string> models{"mvt_nu5", "mvt_nu6", "mvt_nu7", "mvg", "tcopula_ws0", "tcopula_ws0.8",
                                  "tcopula_ws1"};
  double alpha = 0.01;
  std::size_t window = 252;
  std::size_t scenarios = 10000;
  double nu = 5.0;
  double lower = 0.0;
  double upper = 1.0;
  std::size_t refit_stride = 1;
  /// Caps the out-of-sample days (0 = all).
  std::size_t max_days = 0;
  std::size_t subsample = 0;

  std::size_t maturity = 126;
  std::vector<std::size_t> maturities{21, 42, 63, 126};
  std::vector<double> strikes{70, 75, 80, 85, 90, 95, 100, 105, 110, 115, 120, 125, 130};
  std::size_t n_paths = 10000;
  std::string tilt_scale = "sqrt_sigma";

  std::uint64_t seed = 20190702;

  // Not part of the hash: they do not change any output byte.
  std::filesystem::path out_dir = "out";
  std::filesystem::path base_dir = ".";
  unsigned threads = 0;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are a config error.
  static RunConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

  /// FNV-1a of the canonical JSON of every output-affecting field.
  std::uint64_t hash() const;
  /// "seed=<n> config_hash=<16 hex digits>".
  std::string provenance() const;

  std::filesystem::path resolve(const std::filesystem::path& p) const;

  /// Throws Error(config) for out-of-range values or unordered dates.
  void validate() const;
};

RunConfig load_config(const std::filesystem::path& path);

}  // namespace cryptorisk::cli
