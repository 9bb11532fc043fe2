// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/garch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/kernels.hpp"
#include "cryptorisk/numerics.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::garch {

std::string to_string(InnovationFamily family) {
  return family == InnovationFamily::gaussian ? "gaussian" : "student_t";
}

InnovationFamily parse_family(const std::string& name) {
  if (name == "gaussian" || name == "normal") return InnovationFamily::gaussian;
  if (name == "student_t" || name == "t") return InnovationFamily::student_t;
  fail(ErrorKind::config, fmt::format("unknown innovation family '{}'", name));
}

void GarchParams::validate() const {
  const bool ok = std::isfinite(phi0) && std::isfinite(phi1) && std::isfinite(theta1) &&
                  alpha0 > 0.0 && alpha1 >= 0.0 && beta1 >= 0.0 && alpha1 + beta1 < 1.0 &&
                  std::abs(phi1) < 1.0;
  if (!ok) {
    fail(ErrorKind::domain,
         fmt::format("invalid GARCH parameters (alpha0={}, alpha1={}, beta1={}, phi1={})", alpha0,
                     alpha1, beta1, phi1));
  }
  if (family == InnovationFamily::student_t && !(nu > 2.0)) {
    fail(ErrorKind::domain, "Student-t innovations need nu > 2");
  }
}

Presample default_presample(std::span<const double> returns) {
  Presample p;
  p.ret = stats::mean(returns);
  p.residual = 0.0;
  p.variance = returns.size() >= 2 ? stats::variance(returns) : kVarianceFloor;
  p.variance = std::max(p.variance, kVarianceFloor);
  p.residual_sq = p.variance;
  return p;
}

namespace {

// Shared by filtering and likelihood evaluation. Calls sink(t, a_t, var_t).
template <class Sink>
void run_recursion(const GarchParams& p, std::span<const double> returns, const Presample& pre,
                   Sink&& sink) {
  double prev_r = pre.ret, prev_a = pre.residual, prev_a2 = pre.residual_sq, prev_v = pre.variance;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    const double mu = (p.phi0 + p.phi1 * prev_r) + p.theta1 * prev_a;
    const double v = std::max((p.alpha0 + p.alpha1 * prev_a2) + p.beta1 * prev_v, kVarianceFloor);
    const double a = returns[t] - mu;
    sink(t, a, v);
    prev_r = returns[t];
    prev_a = a;
    prev_a2 = a * a;
    prev_v = v;
  }
}

double gaussian_ll(const GarchParams& p, std::span<const double> returns, const Presample& pre) {
  constexpr double kLog2Pi = 1.8378770664093453;
  double ll = 0.0;
  run_recursion(p, returns, pre, [&](std::size_t, double a, double v) {
    ll -= 0.5 * (kLog2Pi + std::log(v) + a * a / v);
  });
  return ll;
}

double student_ll(const GarchParams& p, std::span<const double> returns, const Presample& pre) {
  const double nu = p.nu;
  const double c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log(std::numbers::pi * (nu - 2.0));
  double ll = 0.0;
  run_recursion(p, returns, pre, [&](std::size_t, double a, double v) {
    ll += c - 0.5 * std::log(v) - 0.5 * (nu + 1.0) * std::log1p(a * a / (v * (nu - 2.0)));
  });
  return ll;
}

double ll_with(const GarchParams& p, std::span<const double> returns, const Presample& pre) {
  return p.family == InnovationFamily::gaussian ? gaussian_ll(p, returns, pre)
                                                : student_ll(p, returns, pre);
}

// Unconstrained coordinates <-> feasible parameters.
constexpr double kCoefBound = 0.999;
constexpr double kPersistenceBound = 0.9999;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Transform {
  double mean;
  double sd;
  InnovationFamily family;

  std::size_t dims() const { return family == InnovationFamily::gaussian ? 6 : 7; }

  GarchParams to_params(const Eigen::VectorXd& x) const {
    GarchParams p;
    p.family = family;
    p.phi0 = 0.1 * sd * x[0];
    p.phi1 = kCoefBound * std::tanh(x[1]);
    p.theta1 = kCoefBound * std::tanh(x[2]);
    p.alpha0 = sd * sd * std::exp(x[3]);
    const double persistence = kPersistenceBound * logistic(x[4]);
    p.alpha1 = persistence * logistic(x[5]);
    p.beta1 = persistence - p.alpha1;
    p.nu = family == InnovationFamily::student_t ? kMinStudentNu + std::exp(x[6]) : 0.0;
    return p;
  }

  Eigen::VectorXd from_params(const GarchParams& p) const {
    Eigen::VectorXd x(dims());
    x[0] = p.phi0 / (0.1 * sd);
    x[1] = std::atanh(std::clamp(p.phi1 / kCoefBound, -0.999999, 0.999999));
    x[2] = std::atanh(std::clamp(p.theta1 / kCoefBound, -0.999999, 0.999999));
    x[3] = std::log(p.alpha0 / (sd * sd));
    const double persistence = std::clamp((p.alpha1 + p.beta1) / kPersistenceBound, 1e-6, 1.0 - 1e-6);
    x[4] = logit(persistence);
    const double share = std::clamp(p.alpha1 / (p.alpha1 + p.beta1), 1e-6, 1.0 - 1e-6);
    x[5] = logit(share);
    if (family == InnovationFamily::student_t) x[6] = std::log(std::max(p.nu - kMinStudentNu, 1e-6));
    return x;
  }
};

std::optional<std::string> boundary_check(const GarchParams& p) {
  if (p.alpha1 + p.beta1 > 0.999 * kPersistenceBound) {
    return fmt::format("alpha1 + beta1 = {:.6f} is at the stationarity boundary", p.alpha1 + p.beta1);
  }
  if (std::abs(p.phi1) > 0.995 * kCoefBound || std::abs(p.theta1) > 0.995 * kCoefBound) {
    return std::string("ARMA coefficient is at the stationarity/invertibility boundary");
  }
  return std::nullopt;
}

}  // namespace

double log_likelihood(const GarchParams& params, std::span<const double> returns) {
  return ll_with(params, returns, default_presample(returns));
}

GarchState filter_innovations(const GarchParams& params, std::span<const double> returns,
                              std::optional<Presample> presample) {
  params.validate();
  require(!returns.empty(), ErrorKind::insufficient_data, "no returns to filter");
  const Presample pre = presample ? *presample : default_presample(returns);

  GarchState state;
  state.params = params;
  state.returns.assign(returns.begin(), returns.end());
  state.residuals.resize(returns.size());
  state.cond_variances.resize(returns.size());
  state.innovations.resize(returns.size());
  run_recursion(params, returns, pre, [&](std::size_t t, double a, double v) {
    state.residuals[t] = a;
    state.cond_variances[t] = v;
    state.innovations[t] = a / std::sqrt(v);
  });
  state.log_likelihood = ll_with(params, returns, pre);
  return state;
}

GarchState fit_arma_garch(std::span<const double> returns, InnovationFamily family,
                          const FitOptions& options) {
  require(returns.size() >= options.min_length, ErrorKind::insufficient_data,
          "series is shorter than the GARCH fitting floor");
  for (double r : returns) require(std::isfinite(r), ErrorKind::domain, "non-finite return");
  const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
  const double var = stats::variance(returns);
  if (*lo == *hi || !(var > 1e-24)) fail(ErrorKind::degenerate_data, "constant return series");

  const Presample pre = default_presample(returns);
  const Transform tf{stats::mean(returns), std::sqrt(var), family};

  auto objective = [&](const Eigen::VectorXd& x) {
    const GarchParams p = tf.to_params(x);
    return -ll_with(p, returns, pre);
  };

  // Coarse grid for a starting point.
  constexpr std::array<std::pair<double, double>, 6> kVolGrid{
      {{0.05, 0.90}, {0.10, 0.85}, {0.10, 0.60}, {0.20, 0.70}, {0.05, 0.50}, {0.30, 0.40}}};
  constexpr std::array<double, 3> kArGrid{-0.3, 0.0, 0.3};
  GarchParams seed_params;
  double seed_value = std::numeric_limits<double>::infinity();
  for (double ar : kArGrid) {
    for (const auto& [a1, b1] : kVolGrid) {
      GarchParams p;
      p.family = family;
      p.phi1 = ar;
      p.theta1 = 0.0;
      p.phi0 = tf.mean * (1.0 - ar);
      p.alpha1 = a1;
      p.beta1 = b1;
      p.alpha0 = var * (1.0 - a1 - b1);
      p.nu = family == InnovationFamily::student_t ? 8.0 : 0.0;
      const double v = -ll_with(p, returns, pre);
      if (v < seed_value) {
        seed_value = v;
        seed_params = p;
      }
    }
  }

  numerics::NelderMeadOptions nm;
  nm.tolerance = options.tolerance;
  nm.max_evaluations = options.max_evaluations;
  nm.initial_step = 0.5;
  numerics::NelderMeadResult best = numerics::nelder_mead(objective, tf.from_params(seed_params), nm);
  bool converged = best.converged;
  for (std::size_t k = 0; k < options.restarts; ++k) {
    nm.initial_step = 0.1;
    auto next = numerics::nelder_mead(objective, best.x, nm);
    converged = next.converged;
    if (next.value <= best.value) best = std::move(next);
  }

  const GarchParams fitted = tf.to_params(best.x);
  if (!converged) {
    throw ConvergenceError<GarchParams>(
        fmt::format("GARCH likelihood did not converge within {} evaluations", nm.max_evaluations),
        fitted);
  }
  GarchState state = filter_innovations(fitted, returns, pre);
  state.boundary_warning = boundary_check(fitted);
  return state;
}

Forecast forecast_one_step(const GarchState& state) {
  require(state.size() > 0, ErrorKind::insufficient_data, "empty GARCH state");
  const GarchParams& p = state.params;
  const double r = state.returns.back();
  const double a = state.residuals.back();
  const double v_prev = state.cond_variances.back();
  Forecast f;
  f.mu_next = (p.phi0 + p.phi1 * r) + p.theta1 * a;
  const double v = std::max((p.alpha0 + p.alpha1 * (a * a)) + p.beta1 * v_prev, kVarianceFloor);
  f.sigma_next = std::sqrt(v);
  return f;
}

Eigen::MatrixXd simulate_paths(const GarchState& state, const Eigen::MatrixXd& innovations) {
  require(state.size() > 0, ErrorKind::insufficient_data, "empty GARCH state");
  const Eigen::Index n = innovations.rows();
  const Eigen::Index h = innovations.cols();
  require(n > 0 && h > 0, ErrorKind::shape, "innovation matrix must be non-empty");

  const GarchParams& p = state.params;
  const kernels::GarchStepCoefficients coef{p.phi0, p.phi1,  p.theta1,      p.alpha0,
                                            p.alpha1, p.beta1, kVarianceFloor};
  std::vector<double> ret(static_cast<std::size_t>(n), state.returns.back());
  std::vector<double> resid(static_cast<std::size_t>(n), state.residuals.back());
  std::vector<double> var(static_cast<std::size_t>(n), state.cond_variances.back());

  Eigen::MatrixXd out(n, h);
  for (Eigen::Index step = 0; step < h; ++step) {
    const std::span<const double> eps(innovations.data() + step * n, static_cast<std::size_t>(n));
    kernels::garch_step(coef, ret, resid, var, eps);
    std::copy(ret.begin(), ret.end(), out.data() + step * n);
  }
  return out;
}

}  // namespace cryptorisk::garch
