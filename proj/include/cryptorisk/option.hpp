// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Risk-neutral Monte Carlo under GARCH(1,1) dynamics with NIG innovations and
// a per-step Esscher tilt. Rates are daily and maturities are trading days.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cryptorisk/dist/nig.hpp"
#include "cryptorisk/garch.hpp"

namespace cryptorisk::option {

/// Which power of the conditional volatility multiplies theta in the tilt.
enum class TiltScale { sqrt_sigma, sigma };
std::string to_string(TiltScale scale);
TiltScale parse_tilt_scale(const std::string& name);

struct PricerConfig {
  std::size_t maturity = 126;
  double rate = 0.0;
  std::size_t n_paths = 10000;
  double initial_capital = 100.0;
  std::uint64_t seed = 0;
  TiltScale tilt = TiltScale::sqrt_sigma;
  /// sigma_1^2; the unconditional variance of the GARCH parameters when empty.
  std::optional<double> initial_variance;
  unsigned threads = 0;
  double annualization = 252.0;
};

/// Solves sqrt(a^2 - (b + theta)^2) - sqrt(a^2 - (b + 1 + theta)^2) = (r - m) / d
/// for the NIG of scale * epsilon, i.e. a = alpha/scale, b = beta/scale,
/// d = scale * delta, m = scale * mu, by bisection on the open bracket.
/// Throws Error(no_martingale_measure) when the bracket is empty or holds no root.
double esscher_theta(const dist::NigParams& nig, double rate, double scale = 1.0);

/// Left side minus right side of the theta equation.
double esscher_residual(const dist::NigParams& nig, double rate, double scale, double theta);

/// Tilt parameters along one simulated path.
struct EsscherState {
  dist::NigParams nig;
  std::vector<double> theta;
  std::vector<double> sigma;
  std::vector<double> tilted_beta;
};

/// Replays path `path` of the pricer and records theta_t, sigma_t and the tilted beta.
EsscherState trace_path(const garch::GarchParams& garch, const dist::NigParams& nig,
                        const PricerConfig& config, std::size_t path);

/// Terminal values S_T for every path (length n_paths).
std::vector<double> simulate_risk_neutral_paths(const garch::GarchParams& garch,
                                                const dist::NigParams& nig, const PricerConfig& config);

/// n_paths x maturities.size() terminal values read off the same paths.
Eigen::MatrixXd simulate_terminals(const garch::GarchParams& garch, const dist::NigParams& nig,
                                   const PricerConfig& config, std::span<const std::size_t> maturities);

struct OptionPrice {
  double price = 0.0;
  double std_error = 0.0;
};

OptionPrice price_call(std::span<const double> terminals, double strike, double rate, double maturity);
OptionPrice price_put(std::span<const double> terminals, double strike, double rate, double maturity);

enum class OptionKind { call, put };

/// Black-Scholes price; rate daily, maturity in days, vol annualized.
double black_scholes(double spot, double strike, double rate, double maturity, double vol, OptionKind kind,
                     double annualization = 252.0);

/// Inverts black_scholes by bisection. Prices at the lower no-arbitrage bound
/// map to 0; prices outside the bounds throw Error(domain).
double implied_vol(double price, double spot, double strike, double rate, double maturity, OptionKind kind,
                   double annualization = 252.0);

struct PriceSurface {
  std::vector<double> strikes;
  std::vector<std::size_t> maturities;
  /// maturities x strikes.
  Eigen::MatrixXd calls, puts, call_se, put_se, implied_vols;
};

/// Prices every (T, K) on common paths; the implied vol comes from the
/// out-of-the-money side (call when K >= forward). NaN where no vol exists.
PriceSurface build_surface(const garch::GarchParams& garch, const dist::NigParams& nig,
                           std::span<const double> strikes, std::span<const std::size_t> maturities,
                           const PricerConfig& config);

/// Long form: T,K,call,put,call_se,put_se,implied_vol.
void write_surface_csv(const PriceSurface& surface, const std::filesystem::path& path,
                       std::span<const std::string> header_comment = {});

/// NIG cumulative distribution by quadrature of the density.
double nig_cdf(const dist::NigParams& nig, double x);

/// Kolmogorov-Smirnov distance between a sample and a fitted NIG.
double nig_ks_statistic(const dist::NigParams& nig, std::span<const double> sample);

}  // namespace cryptorisk::option
