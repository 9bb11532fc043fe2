// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Losses are reported as positive numbers; returns stay signed.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cryptorisk::risk {

/// Tail probability alpha in (0, 1).
class RiskLevel {
 public:
  RiskLevel(double alpha = 0.01);  // NOLINT(google-explicit-constructor)
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// Index of the VaR order statistic, ceil(alpha N) (1-based).
std::size_t var_rank(std::size_t n, RiskLevel level);
/// Number of outcomes averaged by CVaR, floor(alpha N).
std::size_t tail_count(std::size_t n, RiskLevel level);

/// Negated k-th smallest outcome, k = ceil(alpha N).
double var(std::span<const double> outcomes, RiskLevel level);

/// Mean of the negated floor(alpha N) worst outcomes. The average is taken
/// relative to the largest tail outcome so rounding cannot push it past VaR.
/// Throws Error(insufficient_data) when alpha N < 1.
double cvar(std::span<const double> outcomes, RiskLevel level);

/// Indices of the floor(alpha N) worst outcomes, ties broken by index, in
/// ascending outcome order.
std::vector<std::size_t> tail_indices(std::span<const double> outcomes, RiskLevel level);

/// Largest fractional decline from a running peak of a positive wealth curve.
double mdd(std::span<const double> values);

/// Wealth curve exp(cumulative log return), starting at `initial`.
std::vector<double> wealth_curve(std::span<const double> log_returns, double initial = 1.0);

/// (mean R - mean Rf) / sd(R). `annualize` multiplies by sqrt(252).
double sharpe(std::span<const double> returns, std::span<const double> risk_free,
              bool annualize = false);
double sharpe(std::span<const double> returns, double risk_free, bool annualize = false);

/// Sharpe * sigma_m + mean Rf.
double m2(std::span<const double> returns, std::span<const double> risk_free, double benchmark_vol);

/// CVaR_beta(Rf - R) / CVaR_alpha(R - Rf).
double rachev(std::span<const double> returns, std::span<const double> risk_free,
              RiskLevel alpha = 0.01, RiskLevel beta = 0.01);

/// Annual yield in percent to a daily simple rate.
inline double daily_rate_from_annual_percent(double percent) { return percent / 252.0 / 100.0; }

enum class ContributionMeasure { volatility, cvar };
std::string to_string(ContributionMeasure measure);

struct RiskContributionReport {
  ContributionMeasure measure = ContributionMeasure::volatility;
  Eigen::VectorXd per_asset;
  Eigen::VectorXd per_asset_pct;
  double total = 0.0;
};

/// RC_i = w_i (Sigma w)_i / sqrt(w' Sigma w). Throws Error(singular_matrix)
/// when cov is not positive definite.
RiskContributionReport vol_risk_contributions(const Eigen::VectorXd& weights,
                                              const Eigen::MatrixXd& cov);

/// RC_i = w_i * mean(-X_si) over the floor(alpha N) scenarios with the worst
/// portfolio outcomes; `total` is cvar of the portfolio outcomes.
RiskContributionReport cvar_risk_contributions(const Eigen::VectorXd& weights,
                                               const Eigen::MatrixXd& scenarios, RiskLevel level);

/// Scenario -> portfolio outcomes through the dispatched projection kernel.
Eigen::VectorXd portfolio_outcomes(const Eigen::MatrixXd& scenarios, const Eigen::VectorXd& weights);

}  // namespace cryptorisk::risk
