// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/kernels.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::risk {

namespace {

// Absorbs representation error in alpha * N (0.07 * 100 = 7.000000000000001).
constexpr double kCountSlack = 1e-9;

double mean_of(std::span<const double> x) {
  require(!x.empty(), ErrorKind::insufficient_data, "empty series");
  return stats::mean(x);
}

}  // namespace

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorKind::domain, fmt::format("risk level must lie in (0, 1) (got {})", alpha));
  }
}

std::size_t var_rank(std::size_t n, RiskLevel level) {
  const double k = std::ceil(level.alpha() * static_cast<double>(n) - kCountSlack);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 1.0)), 1, n);
}

std::size_t tail_count(std::size_t n, RiskLevel level) {
  return static_cast<std::size_t>(std::floor(level.alpha() * static_cast<double>(n) + kCountSlack));
}

double var(std::span<const double> outcomes, RiskLevel level) {
  require(!outcomes.empty(), ErrorKind::insufficient_data, "VaR of an empty sample");
  std::vector<double> x(outcomes.begin(), outcomes.end());
  const std::size_t k = var_rank(x.size(), level);
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k - 1), x.end());
  return -x[k - 1];
}

double cvar(std::span<const double> outcomes, RiskLevel level) {
  const std::size_t m = tail_count(outcomes.size(), level);
  require(m >= 1, ErrorKind::insufficient_data, "CVaR tail is empty (alpha * N < 1)");
  std::vector<double> x(outcomes.begin(), outcomes.end());
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m - 1), x.end());
  std::sort(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
  const double edge = x[m - 1];
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += x[i] - edge;
  return -(sum / static_cast<double>(m) + edge);
}

std::vector<std::size_t> tail_indices(std::span<const double> outcomes, RiskLevel level) {
  const std::size_t m = tail_count(outcomes.size(), level);
  require(m >= 1, ErrorKind::insufficient_data, "CVaR tail is empty (alpha * N < 1)");
  std::vector<std::size_t> idx(outcomes.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto worse = [&](std::size_t a, std::size_t b) {
    return outcomes[a] < outcomes[b] || (outcomes[a] == outcomes[b] && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m - 1), idx.end(), worse);
  idx.resize(m);
  std::sort(idx.begin(), idx.end(), worse);
  return idx;
}

double mdd(std::span<const double> values) {
  require(!values.empty(), ErrorKind::insufficient_data, "drawdown of an empty curve");
  double peak = values.front();
  double worst = 0.0;
  for (double v : values) {
    require(v > 0.0, ErrorKind::domain, "wealth curve must stay positive");
    peak = std::max(peak, v);
    worst = std::max(worst, (peak - v) / peak);
  }
  return worst;
}

std::vector<double> wealth_curve(std::span<const double> log_returns, double initial) {
  std::vector<double> out;
  out.reserve(log_returns.size() + 1);
  out.push_back(initial);
  double cum = 0.0;
  for (double r : log_returns) {
    cum += r;
    out.push_back(initial * std::exp(cum));
  }
  return out;
}

double sharpe(std::span<const double> returns, std::span<const double> risk_free, bool annualize) {
  require(returns.size() == risk_free.size(), ErrorKind::shape,
          "returns and risk-free series differ in length");
  require(returns.size() >= 2, ErrorKind::insufficient_data, "Sharpe ratio needs two returns");
  const double sd = stats::stddev(returns);
  if (!(sd > 0.0)) fail(ErrorKind::degenerate_data, "Sharpe ratio of a zero-volatility series");
  const double ratio = (mean_of(returns) - mean_of(risk_free)) / sd;
  return annualize ? ratio * std::sqrt(252.0) : ratio;
}

double sharpe(std::span<const double> returns, double risk_free, bool annualize) {
  const std::vector<double> rf(returns.size(), risk_free);
  return sharpe(returns, rf, annualize);
}

double m2(std::span<const double> returns, std::span<const double> risk_free, double benchmark_vol) {
  return sharpe(returns, risk_free) * benchmark_vol + mean_of(risk_free);
}

double rachev(std::span<const double> returns, std::span<const double> risk_free, RiskLevel alpha,
              RiskLevel beta) {
  require(returns.size() == risk_free.size(), ErrorKind::shape,
          "returns and risk-free series differ in length");
  std::vector<double> excess(returns.size()), shortfall(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) {
    excess[t] = returns[t] - risk_free[t];
    shortfall[t] = -excess[t];
  }
  const double denominator = cvar(excess, alpha);
  if (denominator == 0.0 || !std::isfinite(denominator)) {
    fail(ErrorKind::degenerate_data, "Rachev ratio has a zero lower-tail CVaR");
  }
  return cvar(shortfall, beta) / denominator;
}

std::string to_string(ContributionMeasure measure) {
  return measure == ContributionMeasure::volatility ? "volatility" : "cvar";
}

RiskContributionReport vol_risk_contributions(const Eigen::VectorXd& weights,
                                              const Eigen::MatrixXd& cov) {
  require(cov.rows() == weights.size() && cov.cols() == weights.size(), ErrorKind::shape,
          "covariance does not match the weight vector");
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) fail(ErrorKind::singular_matrix, "covariance is not positive definite");
  const Eigen::VectorXd marginal = cov * weights;
  const double sigma = std::sqrt(weights.dot(marginal));
  RiskContributionReport r;
  r.measure = ContributionMeasure::volatility;
  r.per_asset = weights.cwiseProduct(marginal) / sigma;
  r.total = sigma;
  r.per_asset_pct = r.per_asset * (100.0 / r.per_asset.sum());
  return r;
}

Eigen::VectorXd portfolio_outcomes(const Eigen::MatrixXd& scenarios, const Eigen::VectorXd& weights) {
  require(scenarios.cols() == weights.size(), ErrorKind::shape,
          "scenario columns do not match the weight vector");
  Eigen::VectorXd out(scenarios.rows());
  kernels::project({scenarios.data(), static_cast<std::size_t>(scenarios.size())},
                   static_cast<std::size_t>(scenarios.rows()),
                   {weights.data(), static_cast<std::size_t>(weights.size())},
                   {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

RiskContributionReport cvar_risk_contributions(const Eigen::VectorXd& weights,
                                               const Eigen::MatrixXd& scenarios, RiskLevel level) {
  const Eigen::VectorXd outcomes = portfolio_outcomes(scenarios, weights);
  const std::span<const double> view(outcomes.data(), static_cast<std::size_t>(outcomes.size()));
  const auto tail = tail_indices(view, level);
  Eigen::VectorXd loss = Eigen::VectorXd::Zero(weights.size());
  for (std::size_t s : tail) loss -= scenarios.row(static_cast<Eigen::Index>(s)).transpose();
  loss /= static_cast<double>(tail.size());

  RiskContributionReport r;
  r.measure = ContributionMeasure::cvar;
  r.per_asset = weights.cwiseProduct(loss);
  r.total = cvar(view, level);
  r.per_asset_pct = r.per_asset * (100.0 / r.per_asset.sum());
  return r;
}

}  // namespace cryptorisk::risk
