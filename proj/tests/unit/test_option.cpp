// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "cryptorisk/dist/nig.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/option.hpp"
#include "support/oracles.hpp"

using namespace cryptorisk;
using namespace cryptorisk::option;

namespace {

garch::GarchParams daily_garch() {
  garch::GarchParams g;
  g.alpha0 = 2e-5;
  g.alpha1 = 0.1;
  g.beta1 = 0.85;
  return g;
}

const dist::NigParams kNig{1.8, -0.2, 1.7, 0.19};

}  // namespace

TEST_CASE("Esscher parameter for a symmetric NIG at zero rate") {
  const dist::NigParams sym{2.0, 0.0, 1.0, 0.0};
  CHECK(esscher_theta(sym, 0.0) == doctest::Approx(-0.5).epsilon(1e-12));
  for (double scale : {0.05, 0.2, 1.0}) {
    for (double r : {0.0, 1e-4}) {
      const double theta = esscher_theta(kNig, r, scale);
      CHECK(std::abs(esscher_residual(kNig, r, scale, theta)) < 1e-12);
      // ln M(theta + 1) - ln M(theta) equals the rate.
      const long double a = kNig.alpha / scale, b = kNig.beta / scale, d = kNig.delta * scale, m = kNig.mu * scale;
      const long double mgf = oracle::nig_log_mgf(a, b, d, m, theta + 1.0L) - oracle::nig_log_mgf(a, b, d, m, theta);
      CHECK(std::abs(static_cast<double>(mgf) - r) < 1e-12);
    }
  }
}

TEST_CASE("no martingale measure for a narrow NIG") {
  const dist::NigParams narrow{0.4, 0.0, 1.0, 0.0};
  try {
    esscher_theta(narrow, 0.0);
    FAIL("expected no martingale measure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_martingale_measure);
  }
}

TEST_CASE("Black-Scholes and implied volatility") {
  const double r = 1e-4;
  for (double k : {80.0, 100.0, 125.0}) {
    const double c = black_scholes(100.0, k, r, 63.0, 0.2, OptionKind::call);
    CHECK(c == doctest::Approx(oracle::bs_call(100.0, k, r, 63.0, 0.2)).epsilon(1e-12));
    const double p = black_scholes(100.0, k, r, 63.0, 0.2, OptionKind::put);
    CHECK(c - p == doctest::Approx(100.0 - k * std::exp(-r * 63.0)).epsilon(1e-10));
    CHECK(implied_vol(c, 100.0, k, r, 63.0, OptionKind::call) == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(implied_vol(p, 100.0, k, r, 63.0, OptionKind::put) == doctest::Approx(0.2).epsilon(1e-8));
  }
  CHECK(implied_vol(100.0 - 90.0 * std::exp(-r * 21.0), 100.0, 90.0, r, 21.0, OptionKind::call) == 0.0);
  CHECK_THROWS_AS(implied_vol(101.0, 100.0, 90.0, r, 21.0, OptionKind::call), Error);
  CHECK_THROWS_AS(implied_vol(1.0, 100.0, 90.0, r, 21.0, OptionKind::call), Error);
}

TEST_CASE("Monte Carlo prices from terminals") {
  const std::vector<double> s{90.0, 100.0, 110.0, 130.0};
  const auto c = price_call(s, 100.0, 0.0, 10.0);
  CHECK(c.price == doctest::Approx(10.0));
  const auto p = price_put(s, 100.0, 0.0, 10.0);
  CHECK(p.price == doctest::Approx(2.5));
  CHECK(price_call(s, 0.0, 0.0, 10.0).price == doctest::Approx(107.5));
  CHECK(price_call(s, 1000.0, 0.0, 10.0).price == 0.0);
  CHECK(price_call(s, 1000.0, 0.0, 10.0).std_error == 0.0);
  double sd = 0.0;
  for (double v : {0.0, 0.0, 10.0, 30.0}) sd += (v - 10.0) * (v - 10.0);
  CHECK(c.std_error == doctest::Approx(std::sqrt(sd / 3.0 / 4.0)));
}

TEST_CASE("risk-neutral paths are martingales after discounting") {
  PricerConfig config;
  config.maturity = 63;
  config.rate = 1e-4;
  config.n_paths = 4000;
  config.seed = 5;
  const auto s = simulate_risk_neutral_paths(daily_garch(), kNig, config);
  REQUIRE(s.size() == 4000);
  double m = 0.0, m2 = 0.0;
  for (double v : s) {
    m += v;
    m2 += v * v;
  }
  m /= 4000.0;
  const double se = std::sqrt((m2 / 4000.0 - m * m) / 4000.0);
  CHECK(std::abs(m * std::exp(-1e-4 * 63) - 100.0) < 4.0 * se);

  const auto call = price_call(s, 100.0, config.rate, 63.0);
  const auto put = price_put(s, 100.0, config.rate, 63.0);
  CHECK(call.price - put.price == doctest::Approx((m - 100.0) * std::exp(-1e-4 * 63)).epsilon(1e-9));
}

TEST_CASE("vanishing volatility grows at the rate") {
  garch::GarchParams g;
  g.alpha0 = 1e-12;
  PricerConfig config;
  config.maturity = 21;
  config.rate = 2e-4;
  config.n_paths = 1000;
  config.initial_variance = 1e-12;
  for (double v : simulate_risk_neutral_paths(g, kNig, config)) {
    CHECK(v == doctest::Approx(100.0 * std::exp(2e-4 * 21)).epsilon(1e-4));
  }
}

TEST_CASE("tilted parameters stay inside the NIG domain") {
  PricerConfig config;
  config.maturity = 40;
  config.n_paths = 1000;
  config.seed = 9;
  for (auto tilt : {TiltScale::sqrt_sigma, TiltScale::sigma}) {
    config.tilt = tilt;
    const auto trace = trace_path(daily_garch(), kNig, config, 7);
    REQUIRE(trace.theta.size() == 40);
    for (std::size_t t = 0; t < 40; ++t) {
      CHECK(std::abs(trace.tilted_beta[t]) < kNig.alpha);
      CHECK(std::abs(trace.tilted_beta[t] + trace.sigma[t]) < kNig.alpha);
      const double s = tilt == TiltScale::sigma ? trace.sigma[t] : std::sqrt(trace.sigma[t]);
      CHECK(trace.tilted_beta[t] == doctest::Approx(kNig.beta + s * trace.theta[t]));
    }
  }
  CHECK(parse_tilt_scale(to_string(TiltScale::sigma)) == TiltScale::sigma);
  CHECK_THROWS_AS(parse_tilt_scale("cube"), Error);
}

TEST_CASE("simulation is deterministic and thread invariant") {
  PricerConfig config;
  config.maturity = 30;
  config.n_paths = 1500;
  config.seed = 77;
  const std::size_t mats[] = {10, 30};
  config.threads = 1;
  const Eigen::MatrixXd a = simulate_terminals(daily_garch(), kNig, config, mats);
  config.threads = 3;
  const Eigen::MatrixXd b = simulate_terminals(daily_garch(), kNig, config, mats);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const auto last = simulate_risk_neutral_paths(daily_garch(), kNig, config);
  for (std::size_t i = 0; i < last.size(); ++i) CHECK(last[i] == a(static_cast<Eigen::Index>(i), 1));
  config.n_paths = 999;
  CHECK_THROWS_AS(simulate_risk_neutral_paths(daily_garch(), kNig, config), Error);
}

TEST_CASE("price surface and CSV") {
  PricerConfig config;
  config.n_paths = 2000;
  config.seed = 3;
  config.rate = 1e-4;
  const double strikes[] = {90.0, 100.0, 110.0};
  const std::size_t mats[] = {21, 63};
  const auto surface = build_surface(daily_garch(), kNig, strikes, mats, config);
  CHECK(surface.calls.rows() == 2);
  CHECK(surface.calls.cols() == 3);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 1; j < 3; ++j) CHECK(surface.calls(i, j) <= surface.calls(i, j - 1));
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(surface.implied_vols(i, j) > 0.05);
      CHECK(surface.implied_vols(i, j) < 2.0);
    }
  }
  const auto dir = oracle::scratch_dir("surface_csv");
  write_surface_csv(surface, dir / "s.csv", std::vector<std::string>{"seed=3"});
  const auto text = oracle::read_text(dir / "s.csv");
  CHECK(text.rfind("# seed=3\nT,K,call,put,call_se,put_se,implied_vol\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 6);
}

TEST_CASE("NIG distribution function and KS distance") {
  CHECK(nig_cdf(kNig, -50.0) < 1e-12);
  CHECK(nig_cdf(kNig, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
  const dist::NigParams sym{2.0, 0.0, 1.0, 0.3};
  CHECK(nig_cdf(sym, 0.3) == doctest::Approx(0.5).epsilon(1e-10));
  const auto sample = dist::sample_nig(kNig, 3000, 12);
  CHECK(nig_ks_statistic(kNig, sample) < 0.035);
  CHECK(nig_ks_statistic(dist::NigParams{1.8, 0.5, 1.7, 0.5}, sample) > 0.05);
}
