// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/option.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/kernels.hpp"
#include "cryptorisk/parallel.hpp"
#include "cryptorisk/rng.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::option {

namespace {

constexpr double kBracketInset = 1e-9;
constexpr double kThetaTolerance = 1e-12;

// sqrt(a^2 - x^2) - sqrt(a^2 - y^2) without cancellation.
double sqrt_gap(double a, double x, double y) {
  const double sx = std::sqrt((a - x) * (a + x));
  const double sy = std::sqrt((a - y) * (a + y));
  return (y - x) * (y + x) / (sx + sy);
}

struct Scaled {
  double alpha, beta, delta, mu;
};

Scaled scaled(const dist::NigParams& nig, double scale) {
  return {nig.alpha / scale, nig.beta / scale, nig.delta * scale, nig.mu * scale};
}

}  // namespace

std::string to_string(TiltScale scale) { return scale == TiltScale::sqrt_sigma ? "sqrt_sigma" : "sigma"; }

TiltScale parse_tilt_scale(const std::string& name) {
  if (name == "sqrt_sigma") return TiltScale::sqrt_sigma;
  if (name == "sigma") return TiltScale::sigma;
  fail(ErrorKind::config, fmt::format("unknown tilt scale '{}'", name));
}

double esscher_residual(const dist::NigParams& nig, double rate, double scale, double theta) {
  const Scaled s = scaled(nig, scale);
  const double x = s.beta + theta;
  return sqrt_gap(s.alpha, x, x + 1.0) - (rate - s.mu) / s.delta;
}

double esscher_theta(const dist::NigParams& nig, double rate, double scale) {
  nig.validate();
  require(scale > 0.0, ErrorKind::domain, "Esscher scale must be positive");
  const Scaled s = scaled(nig, scale);
  double lo = -s.alpha - s.beta + kBracketInset;
  double hi = s.alpha - s.beta - 1.0 - kBracketInset;
  if (!(lo < hi)) {
    fail(ErrorKind::no_martingale_measure,
         fmt::format("Esscher bracket is empty (scaled alpha = {:.6g} <= 1/2)", s.alpha));
  }
  double f_lo = esscher_residual(nig, rate, scale, lo);
  const double f_hi = esscher_residual(nig, rate, scale, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    fail(ErrorKind::no_martingale_measure, "Esscher equation has no root in its bracket");
  }
  // Bisect until the bracket stops shrinking and keep the smallest residual.
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = esscher_residual(nig, rate, scale, mid);
    if (std::abs(f_mid) < best_f) {
      best = mid;
      best_f = std::abs(f_mid);
    }
    if (f_mid == 0.0) break;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (!(best_f < kThetaTolerance)) {
    fail(ErrorKind::no_martingale_measure,
         fmt::format("Esscher equation residual {:.3g} above tolerance at the bisection limit", best_f));
  }
  return best;
}

namespace {

// Walks one path; calls on_step(step, sigma, theta, tilted_beta, log_sum).
template <class OnStep>
void walk_path(const garch::GarchParams& g, const dist::NigParams& nig, const PricerConfig& config,
               std::size_t path, std::size_t steps, OnStep&& on_step) {
  rng::Engine engine = rng::substream(config.seed, path);
  double variance = config.initial_variance ? *config.initial_variance : g.unconditional_variance();
  double log_sum = 0.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double sigma = std::sqrt(variance);
    const double scale = config.tilt == TiltScale::sqrt_sigma ? std::sqrt(sigma) : sigma;
    const double theta = esscher_theta(nig, config.rate, scale);
    const double tilted = nig.beta + scale * theta;
    if (!(std::abs(tilted) < nig.alpha) || !(std::abs(tilted + sigma) < nig.alpha)) {
      fail(ErrorKind::no_martingale_measure,
           fmt::format("tilted beta {:.6g} leaves (-alpha, alpha) at step {} (sigma {:.6g})", tilted, t, sigma));
    }
    const dist::NigParams q{nig.alpha, tilted, nig.delta, nig.mu};
    const double eps = dist::draw_nig(q, engine);
    const double convexity = nig.mu * sigma + nig.delta * sqrt_gap(nig.alpha, tilted, tilted + sigma);
    const double a = sigma * eps;
    log_sum += config.rate + a - convexity;
    on_step(t, sigma, theta, tilted, log_sum);
    variance = std::max((g.alpha0 + g.alpha1 * (a * a)) + g.beta1 * variance, garch::kVarianceFloor);
  }
}

void check_inputs(const garch::GarchParams& g, const dist::NigParams& nig, const PricerConfig& config) {
  g.validate();
  nig.validate();
  require(config.maturity >= 1, ErrorKind::config, "maturity must be at least one day");
  require(config.n_paths >= 1000, ErrorKind::config, "need at least 1000 paths");
  require(std::isfinite(config.rate), ErrorKind::config, "rate must be finite");
  if (config.initial_variance) require(*config.initial_variance > 0.0, ErrorKind::config, "initial variance must be positive");
}

}  // namespace

EsscherState trace_path(const garch::GarchParams& garch, const dist::NigParams& nig,
                        const PricerConfig& config, std::size_t path) {
  check_inputs(garch, nig, config);
  EsscherState state;
  state.nig = nig;
  walk_path(garch, nig, config, path, config.maturity, [&](std::size_t, double sigma, double theta, double tilted, double) {
    state.sigma.push_back(sigma);
    state.theta.push_back(theta);
    state.tilted_beta.push_back(tilted);
  });
  return state;
}

Eigen::MatrixXd simulate_terminals(const garch::GarchParams& garch, const dist::NigParams& nig,
                                   const PricerConfig& config, std::span<const std::size_t> maturities) {
  check_inputs(garch, nig, config);
  require(!maturities.empty(), ErrorKind::config, "no maturities requested");
  for (std::size_t m : maturities) require(m >= 1, ErrorKind::config, "maturity must be at least one day");
  const std::size_t horizon = *std::max_element(maturities.begin(), maturities.end());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(config.n_paths), static_cast<Eigen::Index>(maturities.size()));
  parallel_for(config.n_paths, config.threads, [&](std::size_t path) {
    walk_path(garch, nig, config, path, horizon, [&](std::size_t t, double, double, double, double log_sum) {
      for (std::size_t k = 0; k < maturities.size(); ++k) {
        if (maturities[k] == t) {
          out(static_cast<Eigen::Index>(path), static_cast<Eigen::Index>(k)) =
              config.initial_capital * std::exp(log_sum);
        }
      }
    });
  });
  return out;
}

std::vector<double> simulate_risk_neutral_paths(const garch::GarchParams& garch, const dist::NigParams& nig,
                                                const PricerConfig& config) {
  const std::size_t maturities[] = {config.maturity};
  const Eigen::MatrixXd t = simulate_terminals(garch, nig, config, maturities);
  return {t.data(), t.data() + t.rows()};
}

namespace {

OptionPrice price_from(double sum, double sum_sq, std::size_t n, double rate, double maturity) {
  const double nn = static_cast<double>(n);
  const double discount = std::exp(-rate * maturity);
  const double mean = sum / nn;
  OptionPrice p;
  p.price = discount * mean;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    p.std_error = discount * std::sqrt(var / nn);
  }
  return p;
}

}  // namespace

OptionPrice price_call(std::span<const double> terminals, double strike, double rate, double maturity) {
  require(!terminals.empty(), ErrorKind::insufficient_data, "no terminal values to price");
  const auto sums = kernels::payoff_sums(terminals, strike);
  return price_from(sums.call, sums.call_sq, terminals.size(), rate, maturity);
}

OptionPrice price_put(std::span<const double> terminals, double strike, double rate, double maturity) {
  require(!terminals.empty(), ErrorKind::insufficient_data, "no terminal values to price");
  const auto sums = kernels::payoff_sums(terminals, strike);
  return price_from(sums.put, sums.put_sq, terminals.size(), rate, maturity);
}

double black_scholes(double spot, double strike, double rate, double maturity, double vol, OptionKind kind,
                     double annualization) {
  const double discounted_strike = strike * std::exp(-rate * maturity);
  const double years = maturity / annualization;
  const double sd = vol * std::sqrt(years);
  if (!(sd > 0.0) || strike <= 0.0) {
    return kind == OptionKind::call ? std::max(spot - discounted_strike, 0.0)
                                    : std::max(discounted_strike - spot, 0.0);
  }
  const double d1 = (std::log(spot / discounted_strike) + 0.5 * sd * sd) / sd;
  const double d2 = d1 - sd;
  if (kind == OptionKind::call) return spot * stats::normal_cdf(d1) - discounted_strike * stats::normal_cdf(d2);
  return discounted_strike * stats::normal_cdf(-d2) - spot * stats::normal_cdf(-d1);
}

double implied_vol(double price, double spot, double strike, double rate, double maturity, OptionKind kind,
                   double annualization) {
  const double discounted_strike = strike * std::exp(-rate * maturity);
  const double lower = kind == OptionKind::call ? std::max(spot - discounted_strike, 0.0)
                                                : std::max(discounted_strike - spot, 0.0);
  const double upper = kind == OptionKind::call ? spot : discounted_strike;
  if (!(price >= lower - 1e-12) || !(price < upper)) {
    fail(ErrorKind::domain, fmt::format("option price {} lies outside the no-arbitrage bounds [{}, {})",
                                        price, lower, upper));
  }
  if (price <= lower + 1e-14 * std::max(1.0, upper)) return 0.0;
  auto residual = [&](double v) {
    return black_scholes(spot, strike, rate, maturity, v, kind, annualization) - price;
  };
  double lo = 0.0, hi = 1.0;
  while (residual(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e4) fail(ErrorKind::domain, "implied volatility exceeds the search range");
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) < 1e-12 || mid <= lo || mid >= hi) break;
    (r < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

PriceSurface build_surface(const garch::GarchParams& garch, const dist::NigParams& nig,
                           std::span<const double> strikes, std::span<const std::size_t> maturities,
                           const PricerConfig& config) {
  require(!strikes.empty(), ErrorKind::config, "no strikes requested");
  const Eigen::MatrixXd terminals = simulate_terminals(garch, nig, config, maturities);
  const auto nt = static_cast<Eigen::Index>(maturities.size());
  const auto nk = static_cast<Eigen::Index>(strikes.size());
  PriceSurface s;
  s.strikes.assign(strikes.begin(), strikes.end());
  s.maturities.assign(maturities.begin(), maturities.end());
  s.calls.resize(nt, nk);
  s.puts.resize(nt, nk);
  s.call_se.resize(nt, nk);
  s.put_se.resize(nt, nk);
  s.implied_vols.resize(nt, nk);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const std::span<const double> col(terminals.data() + i * terminals.rows(),
                                      static_cast<std::size_t>(terminals.rows()));
    const double t = static_cast<double>(maturities[static_cast<std::size_t>(i)]);
    const double forward = config.initial_capital * std::exp(config.rate * t);
    for (Eigen::Index k = 0; k < nk; ++k) {
      const double strike = strikes[static_cast<std::size_t>(k)];
      const OptionPrice c = price_call(col, strike, config.rate, t);
      const OptionPrice p = price_put(col, strike, config.rate, t);
      s.calls(i, k) = c.price;
      s.puts(i, k) = p.price;
      s.call_se(i, k) = c.std_error;
      s.put_se(i, k) = p.std_error;
      const bool use_call = strike >= forward;
      try {
        s.implied_vols(i, k) = implied_vol(use_call ? c.price : p.price, config.initial_capital, strike,
                                           config.rate, t, use_call ? OptionKind::call : OptionKind::put,
                                           config.annualization);
      } catch (const Error&) {
        s.implied_vols(i, k) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return s;
}

void write_surface_csv(const PriceSurface& surface, const std::filesystem::path& path,
                       std::span<const std::string> header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  for (const auto& line : header_comment) out << "# " << line << '\n';
  out << "T,K,call,put,call_se,put_se,implied_vol\n";
  for (std::size_t i = 0; i < surface.maturities.size(); ++i) {
    for (std::size_t k = 0; k < surface.strikes.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(k);
      const double iv = surface.implied_vols(r, c);
      out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},", surface.maturities[i], surface.strikes[k],
                         surface.calls(r, c), surface.puts(r, c), surface.call_se(r, c), surface.put_se(r, c));
      if (std::isfinite(iv)) out << fmt::format("{:.17g}", iv);
      out << '\n';
    }
  }
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

double nig_cdf(const dist::NigParams& nig, double x) {
  nig.validate();
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double v) { return dist::nig_density(nig, v); };
  const double centre = nig.mean();
  const double spread = std::sqrt(nig.variance());
  // Split at the mean so the peak sits on an interval edge.
  if (x <= centre) {
    return gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), x, 15, 1e-12);
  }
  const double left =
      gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), centre, 15, 1e-12);
  const double right = gauss_kronrod<double, 61>::integrate(f, centre, x, 15, 1e-12 * std::max(1.0, spread));
  return std::min(1.0, left + right);
}

double nig_ks_statistic(const dist::NigParams& nig, std::span<const double> sample) {
  require(!sample.empty(), ErrorKind::insufficient_data, "KS statistic of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = nig_cdf(nig, x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace cryptorisk::option
