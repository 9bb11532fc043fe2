// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/cli/config.hpp"

#include <set>

#include <fmt/format.h>

#include "cryptorisk/backtest.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/json_io.hpp"
#include "cryptorisk/marketdata.hpp"
#include "cryptorisk/option.hpp"
#include "cryptorisk/rng.hpp"

namespace cryptorisk::cli {

namespace {

nlohmann::json source_json(const AssetSource& s) { return {{"name", s.name}, {"path", s.path.generic_string()}}; }

AssetSource source_from(const nlohmann::json& j) {
  return {j.at("name").get<std::string>(), std::filesystem::path(j.at("path").get<std::string>())};
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "assets",  "benchmark", "risk_free_ratios", "risk_free_option", "out_of_sample_start", "end_date",
      "models",  "alpha",     "window",           "scenarios",        "nu",                  "lower",
      "upper",   "refit_stride", "max_days",      "subsample",        "maturity",            "maturities",
      "strikes", "n_paths",   "tilt_scale",       "seed",             "out_dir",             "threads"};
  return keys;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json assets_json = nlohmann::json::array();
  for (const auto& a : assets) assets_json.push_back(source_json(a));
  nlohmann::json j{{"assets", assets_json},
                   {"benchmark", benchmark ? source_json(*benchmark) : nlohmann::json(nullptr)},
                   {"risk_free_ratios", risk_free_ratios.generic_string()},
                   {"risk_free_option", risk_free_option.generic_string()},
                   {"out_of_sample_start", out_of_sample_start},
                   {"end_date", end_date},
                   {"models", models},
                   {"alpha", alpha},
                   {"window", window},
                   {"scenarios", scenarios},
                   {"nu", nu},
                   {"lower", lower},
                   {"upper", upper},
                   {"refit_stride", refit_stride},
                   {"max_days", max_days},
                   {"subsample", subsample},
                   {"maturity", maturity},
                   {"maturities", maturities},
                   {"strikes", strikes},
                   {"n_paths", n_paths},
                   {"tilt_scale", tilt_scale},
                   {"seed", seed}};
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail(ErrorKind::config, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) fail(ErrorKind::config, fmt::format("unknown config key '{}'", key));
  }
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (doc.contains("assets")) {
      c.assets.clear();
      for (const auto& a : doc.at("assets")) c.assets.push_back(source_from(a));
    }
    if (doc.contains("benchmark")) {
      if (doc.at("benchmark").is_null()) c.benchmark.reset();
      else c.benchmark = source_from(doc.at("benchmark"));
    }
    auto path_field = [&](const char* key, std::filesystem::path& out) {
      if (doc.contains(key)) out = doc.at(key).get<std::string>();
    };
    path_field("risk_free_ratios", c.risk_free_ratios);
    path_field("risk_free_option", c.risk_free_option);
    path_field("out_dir", c.out_dir);
    auto field = [&](const char* key, auto& out) {
      if (doc.contains(key)) doc.at(key).get_to(out);
    };
    field("out_of_sample_start", c.out_of_sample_start);
    field("end_date", c.end_date);
    field("models", c.models);
    field("alpha", c.alpha);
    field("window", c.window);
    field("scenarios", c.scenarios);
    field("nu", c.nu);
    field("lower", c.lower);
    field("upper", c.upper);
    field("refit_stride", c.refit_stride);
    field("max_days", c.max_days);
    field("subsample", c.subsample);
    field("maturity", c.maturity);
    field("maturities", c.maturities);
    field("strikes", c.strikes);
    field("n_paths", c.n_paths);
    field("tilt_scale", c.tilt_scale);
    field("seed", c.seed);
    field("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, fmt::format("malformed config: {}", e.what()));
  }
  if (c.out_dir.is_relative()) c.out_dir = base_dir / c.out_dir;
  return c;
}

std::uint64_t RunConfig::hash() const { return rng::hash_name(to_json().dump()); }

std::string RunConfig::provenance() const { return fmt::format("seed={} config_hash={:016x}", seed, hash()); }

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

void RunConfig::validate() const {
  require(!assets.empty(), ErrorKind::config, "config lists no assets");
  std::set<std::string> names;
  for (const auto& a : assets) {
    require(!a.name.empty(), ErrorKind::config, "asset without a name");
    if (!names.insert(a.name).second) fail(ErrorKind::config, fmt::format("asset '{}' listed twice", a.name));
  }
  const auto start = marketdata::parse_date(out_of_sample_start);
  const auto end = marketdata::parse_date(end_date);
  require(start <= end, ErrorKind::config, "out_of_sample_start is after end_date");
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::config, "alpha must lie in (0, 1)");
  require(window >= 100, ErrorKind::config, "window must be at least 100");
  require(scenarios >= 1000, ErrorKind::config, "scenarios must be at least 1000");
  require(nu > 4.0, ErrorKind::config, "nu must exceed 4");
  require(lower <= upper, ErrorKind::config, "lower bound exceeds upper bound");
  require(refit_stride >= 1, ErrorKind::config, "refit_stride must be at least 1");
  require(!models.empty(), ErrorKind::config, "model grid is empty");
  for (const auto& m : models) (void)backtest::ModelSpec::parse(m);
  require(maturity >= 1, ErrorKind::config, "maturity must be at least one day");
  require(!maturities.empty() && !strikes.empty(), ErrorKind::config, "option grids must be non-empty");
  for (auto m : maturities) require(m >= 1, ErrorKind::config, "maturities must be at least one day");
  for (auto k : strikes) require(k > 0.0, ErrorKind::config, "strikes must be positive");
  require(n_paths >= 1000, ErrorKind::config, "n_paths must be at least 1000");
  (void)option::parse_tilt_scale(tilt_scale);
}

RunConfig load_config(const std::filesystem::path& path) {
  const nlohmann::json doc = json_io::read_file(path);
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return RunConfig::from_json(doc, base);
}

}  // namespace cryptorisk::cli
