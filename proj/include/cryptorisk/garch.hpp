// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Per-asset ARMA(1,1)-GARCH(1,1):
//   r_t = mu_t + a_t,   mu_t = phi0 + phi1 r_{t-1} + theta1 a_{t-1}
//   a_t = sigma_t eps_t, sigma_t^2 = alpha0 + alpha1 a_{t-1}^2 + beta1 sigma_{t-1}^2
//
// Recursions start from presample values: r_0 = sample mean, a_0 = 0 and
// a_0^2 = sigma_0^2 = sample variance (see Presample).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cryptorisk::garch {

enum class InnovationFamily { gaussian, student_t };

std::string to_string(InnovationFamily family);
InnovationFamily parse_family(const std::string& name);

/// Floor applied to every conditional variance.
inline constexpr double kVarianceFloor = 1e-12;
/// Lowest Student-t degrees of freedom the fit may return.
inline constexpr double kMinStudentNu = 4.01;

struct GarchParams {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double theta1 = 0.0;
  double alpha0 = 1e-6;
  double alpha1 = 0.0;
  double beta1 = 0.0;
  InnovationFamily family = InnovationFamily::gaussian;
  /// Student-t degrees of freedom; ignored for Gaussian innovations.
  double nu = 0.0;

  /// Throws Error(domain) unless alpha0 > 0, alpha1, beta1 >= 0,
  /// alpha1 + beta1 < 1 and |phi1| < 1.
  void validate() const;
  double unconditional_variance() const { return alpha0 / (1.0 - alpha1 - beta1); }

  friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

/// Values standing in for t = 0.
struct Presample {
  double ret = 0.0;
  double residual = 0.0;
  double residual_sq = 0.0;
  double variance = 0.0;
};

Presample default_presample(std::span<const double> returns);

struct GarchState {
  GarchParams params;
  std::vector<double> returns;
  std::vector<double> residuals;       // a_t
  std::vector<double> cond_variances;  // sigma_t^2
  std::vector<double> innovations;     // eps_t = a_t / sigma_t
  double log_likelihood = 0.0;
  /// Set when the fit ends next to the stationarity or invertibility boundary.
  std::optional<std::string> boundary_warning;

  std::size_t size() const noexcept { return returns.size(); }
};

struct Forecast {
  double mu_next = 0.0;
  double sigma_next = 0.0;
};

/// Deterministic recursion through `returns` under `params`.
GarchState filter_innovations(const GarchParams& params, std::span<const double> returns,
                              std::optional<Presample> presample = std::nullopt);

/// Conditional log-likelihood of the filtered state under its family.
double log_likelihood(const GarchParams& params, std::span<const double> returns);

struct FitOptions {
  std::size_t min_length = 100;
  double tolerance = 1e-8;
  std::size_t max_evaluations = 6000;
  /// Extra simplex restarts from the incumbent after the first convergence.
  std::size_t restarts = 1;
};

/// Maximum-likelihood fit in a reparameterized space that keeps
/// alpha1 + beta1 < 1, |phi1| < 1 and |theta1| < 1.
/// Throws Error(insufficient_data) below the length floor, Error(degenerate_data)
/// for a constant series and ConvergenceError<GarchParams> when the simplex
/// does not settle within the evaluation budget.
GarchState fit_arma_garch(std::span<const double> returns, InnovationFamily family,
                          const FitOptions& options = {});

Forecast forecast_one_step(const GarchState& state);

/// Evolves every row of `innovations` (N x H) forward from the state's last
/// values; returns the N x H simulated returns.
Eigen::MatrixXd simulate_paths(const GarchState& state, const Eigen::MatrixXd& innovations);

}  // namespace cryptorisk::garch
