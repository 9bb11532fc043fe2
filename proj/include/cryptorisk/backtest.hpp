// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cryptorisk/garch.hpp"
#include "cryptorisk/marketdata.hpp"
#include "cryptorisk/risk.hpp"

namespace cryptorisk::backtest {

enum class Zone { green, yellow, red };
enum class Verdict { accept, reject };

std::string to_string(Zone zone);
std::string to_string(Verdict verdict);

/// Binomial-CDF zones on P(X <= failures) with X ~ Bin(observations, alpha).
inline constexpr double kGreenBound = 0.95;
inline constexpr double kYellowBound = 0.99999;

Zone traffic_light(std::size_t observations, double alpha, std::size_t failures);

struct BinomialResult {
  Verdict verdict = Verdict::accept;
  double p_value = 1.0;  // P(X >= failures)
};

/// Exact one-sided test for too many failures; rejects when P(X >= f) < significance.
BinomialResult binomial_test(std::size_t observations, double alpha, std::size_t failures,
                             double significance = 0.05);

enum class JointModel { mvt, tcopula, mvg, independent };

struct ModelSpec {
  JointModel kind = JointModel::mvt;
  double nu = 5.0;
  double bandwidth = 0.0;
  garch::InnovationFamily family = garch::InnovationFamily::gaussian;

  static ModelSpec multivariate_t(double nu);
  static ModelSpec t_copula(double bandwidth, double nu = 5.0);
  static ModelSpec variance_gamma();
  static ModelSpec independent_gaussian();

  /// Short column label, e.g. "mvt_nu5", "tcopula_ws0.8", "mvg".
  std::string label() const;
  /// Inverse of label(); also accepts "mvt" and "tcopula".
  static ModelSpec parse(const std::string& label);
};

struct RiskForecast {
  double var = 0.0;
  double cvar = 0.0;
};

/// Optional replacement for the GARCH + joint-model forecast of one roll.
/// Receives the in-sample window, the portfolio weights and the roll seed.
using Forecaster = std::function<RiskForecast(const marketdata::ReturnPanel& window,
                                              const Eigen::VectorXd& weights, std::uint64_t seed)>;

struct BacktestConfig {
  std::size_t window = 252;
  std::size_t scenarios = 10000;
  risk::RiskLevel level{0.01};
  ModelSpec model;
  /// Portfolio weights; equal weights when empty.
  Eigen::VectorXd weights;
  /// Refit the GARCH parameters every `refit_stride` days; in between the
  /// last parameters are re-filtered on the moving window.
  std::size_t refit_stride = 1;
  /// Limit on out-of-sample days (0 = all available).
  std::size_t max_days = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  garch::FitOptions garch_options;
};

struct TraceRow {
  marketdata::Date date;
  double realized = 0.0;
  double neg_var = 0.0;   // -VaR forecast
  double neg_cvar = 0.0;  // -CVaR forecast
  bool var_failure = false;
  bool cvar_failure = false;
  bool missing = false;
};

struct BacktestReport {
  std::string label;
  std::size_t observations = 0;
  std::size_t failures_var = 0;
  std::size_t failures_cvar = 0;
  double expected_var = 0.0;   // alpha * observations
  double expected_cvar = 0.0;  // alpha / 2 * observations
  double ratio_var = 0.0;
  double ratio_cvar = 0.0;
  Zone traffic_light_var = Zone::green;
  Zone traffic_light_cvar = Zone::green;
  BinomialResult binomial_var;
  BinomialResult binomial_cvar;
  std::size_t missing = 0;
  std::vector<TraceRow> trace;
};

/// Aggregates counts into a report (expected counts, ratios, zones, tests).
BacktestReport summarize(std::string label, std::size_t observations, std::size_t failures_var,
                         std::size_t failures_cvar, std::size_t missing, double alpha);

/// Rolling one-step VaR/CVaR backtest. Day t (t >= window) is forecast from
/// rows [t - window, t) and compared with the realized portfolio return of row t.
/// Throws Error(insufficient_data) when the panel has fewer than window + 1 rows.
BacktestReport run_backtest(const marketdata::ReturnPanel& panel, const BacktestConfig& config,
                            const Forecaster& forecaster = {});

/// Runs several joint models over the same rolls, sharing the per-family
/// GARCH fits. `config.model` is ignored.
std::vector<BacktestReport> run_backtest_grid(const marketdata::ReturnPanel& panel,
                                              const BacktestConfig& config,
                                              std::span<const ModelSpec> models);

/// Table-2-shaped CSV: measure,variable,<one column per report>.
void write_report_csv(std::span<const BacktestReport> reports, const std::filesystem::path& path,
                      std::span<const std::string> header_comment = {});
void write_trace_csv(const BacktestReport& report, const std::filesystem::path& path,
                     std::span<const std::string> header_comment = {});

/// Formats an expected count with up to four decimals, trailing zeros trimmed.
std::string format_expected(double value);
std::string format_ratio(double value);

/// Simulates one-step joint innovations (n x d) for a model fitted on `innovations`.
Eigen::MatrixXd simulate_joint_innovations(const ModelSpec& model, const Eigen::MatrixXd& innovations,
                                           std::size_t n, std::uint64_t seed);

}  // namespace cryptorisk::backtest
