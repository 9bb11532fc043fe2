// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cryptorisk/garch.hpp"
#include "cryptorisk/marketdata.hpp"
#include "cryptorisk/risk.hpp"

namespace cryptorisk::optimize {

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;
};

enum class Objective { variance, cvar };
std::string to_string(Objective objective);

struct FrontierPoint {
  Eigen::VectorXd weights;
  double expected_return = 0.0;
  /// Volatility for the variance objective, CVaR for the CVaR objective.
  double risk = 0.0;
  /// KKT residual (variance) or |LP objective - reported CVaR| (CVaR).
  double residual = 0.0;
};

/// Throws Error(infeasible) unless lower * d <= 1 <= upper * d.
void check_bounds(Bounds bounds, Eigen::Index d);

/// Minimizes w' S w over {sum w = 1, L <= w <= U} (and mean >= target when
/// given), S the scenario covariance. Active-set QP.
FrontierPoint min_variance_weights(const Eigen::MatrixXd& scenarios, Bounds bounds = {},
                                   std::optional<double> target_return = std::nullopt);

/// Minimizes scenario CVaR through the dual of the auxiliary linear program
/// zeta + 1/(alpha N) sum max(-w'r_s - zeta, 0); `risk` is risk::cvar of the
/// optimal outcomes.
FrontierPoint min_cvar_weights(const Eigen::MatrixXd& scenarios, risk::RiskLevel level = 0.01,
                               Bounds bounds = {}, std::optional<double> target_return = std::nullopt);

/// Largest scenario-mean return attainable under the bounds.
double max_attainable_return(const Eigen::VectorXd& mean, Bounds bounds);

/// n_points targets from the min-risk point's return to the largest attainable
/// return; a single point when that range is degenerate.
std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& scenarios, Objective objective,
                                              Bounds bounds, std::size_t n_points,
                                              risk::RiskLevel level = 0.01);

struct PortfolioTrack {
  std::string name;
  std::vector<std::string> assets;
  std::vector<marketdata::Date> dates;
  Eigen::MatrixXd weights;  // one row per date
  std::vector<double> returns;
  /// exp(cumulative log return) - 1.
  std::vector<double> cumulative;
};

struct RollingConfig {
  std::size_t window = 252;
  std::size_t scenarios = 10000;
  risk::RiskLevel level{0.01};
  Bounds bounds;
  double nu = 5.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  /// Out-of-sample days to run (0 = all remaining rows).
  std::size_t max_days = 0;
  /// When non-zero, the CVaR program sees only this many scenarios.
  std::size_t subsample = 0;
  garch::FitOptions garch_options;
};

struct RollingResult {
  PortfolioTrack min_variance;
  PortfolioTrack min_cvar;
  /// One line per roll whose solve failed and carried weights forward.
  std::vector<std::string> log;
};

/// Per out-of-sample day: Gaussian GARCH per asset on the trailing window,
/// multivariate t (nu) on the filtered innovations, N one-step scenarios,
/// both minimum-risk portfolios on the same scenarios, realized next-day
/// return sum_i w_i r_i.
RollingResult rolling_optimize(const marketdata::ReturnPanel& panel, const RollingConfig& config);

/// Same rolling pipeline for a single objective.
PortfolioTrack rolling_optimize(const marketdata::ReturnPanel& panel, Objective objective,
                                const RollingConfig& config);

std::vector<double> cumulative_returns(std::span<const double> log_returns);

void write_track_csv(const PortfolioTrack& track, const std::filesystem::path& path,
                     std::span<const std::string> header_comment = {});

/// date,<one cumulative-return column per track>[,benchmark].
void write_horse_race_csv(std::span<const PortfolioTrack> tracks,
                          std::optional<std::span<const double>> benchmark_returns,
                          const std::string& benchmark_name, const std::filesystem::path& path,
                          std::span<const std::string> header_comment = {});

}  // namespace cryptorisk::optimize
