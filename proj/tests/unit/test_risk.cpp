// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/risk.hpp"
#include "support/oracles.hpp"

using namespace cryptorisk;
using namespace cryptorisk::risk;

TEST_CASE("VaR and CVaR on a ladder") {
  std::vector<double> x;
  for (int i = 1; i <= 100; ++i) x.push_back(static_cast<double>(i) - 50.5);
  CHECK(var(x, 0.05) == doctest::Approx(45.5));
  CHECK(cvar(x, 0.05) == doctest::Approx(47.5));
  CHECK(var(x, 0.07) == doctest::Approx(43.5));
  CHECK(tail_count(100, 0.07) == 7);
  CHECK(var_rank(100, 0.07) == 7);
  CHECK(var_rank(100, 0.001) == 1);
}

TEST_CASE("VaR and CVaR match sorting oracles") {
  std::mt19937_64 engine(5);
  std::student_t_distribution<double> t(4.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(137 + trial * 13);
    for (double& v : x) v = t(engine);
    for (double a : {0.01, 0.05, 0.1}) {
      if (std::floor(a * x.size()) < 1) continue;
      CHECK(var(x, a) == oracle::sorted_var(x, a));
      CHECK(cvar(x, a) == doctest::Approx(oracle::sorted_cvar(x, a)).epsilon(1e-13));
      CHECK(cvar(x, a) >= var(x, a));
    }
  }
}

TEST_CASE("risk level and empty tail errors") {
  CHECK_THROWS_AS(RiskLevel(0.0), Error);
  CHECK_THROWS_AS(RiskLevel(1.0), Error);
  const std::vector<double> x{1.0, 2.0};
  try {
    cvar(x, 0.01);
    FAIL("expected empty tail");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_data);
  }
}

TEST_CASE("tail indices break ties by position") {
  const std::vector<double> x{-1.0, 3.0, -1.0, -5.0, 0.0, 2.0, 1.0, 4.0, 5.0, 6.0};
  const auto idx = tail_indices(x, 0.3);
  REQUIRE(idx.size() == 3);
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 0);
  CHECK(idx[2] == 2);
}

TEST_CASE("drawdown") {
  CHECK(mdd(std::vector<double>{1, 2, 3, 4}) == 0.0);
  CHECK(mdd(std::vector<double>{1, 2, 1, 3, 1.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mdd(std::vector<double>{1, 0, 2}), Error);
  const auto w = wealth_curve(std::vector<double>{0.1, -0.1}, 2.0);
  REQUIRE(w.size() == 3);
  CHECK(w[1] == doctest::Approx(2.0 * std::exp(0.1)));
  CHECK(w[2] == doctest::Approx(2.0));
}

TEST_CASE("Sharpe, M2 and Rachev ratios") {
  const std::vector<double> r{0.01, -0.02, 0.03, 0.0, 0.015};
  const std::vector<double> rf(r.size(), 0.001);
  double m = 0.0;
  for (double v : r) m += v;
  m /= 5.0;
  double ss = 0.0;
  for (double v : r) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / 4.0);
  CHECK(sharpe(r, rf) == doctest::Approx((m - 0.001) / sd));
  CHECK(sharpe(r, 0.001, true) == doctest::Approx((m - 0.001) / sd * std::sqrt(252.0)));
  CHECK(m2(r, rf, 0.02) == doctest::Approx((m - 0.001) / sd * 0.02 + 0.001));
  CHECK_THROWS_AS(sharpe(std::vector<double>{0.1, 0.1}, 0.0), Error);

  std::vector<double> big;
  for (int i = 0; i < 200; ++i) big.push_back(std::sin(i * 0.37) * 0.02 + 0.001);
  const std::vector<double> rf0(big.size(), 0.0);
  std::vector<double> neg(big.size());
  for (std::size_t i = 0; i < big.size(); ++i) neg[i] = -big[i];
  CHECK(rachev(big, rf0, 0.05, 0.05) == doctest::Approx(cvar(neg, 0.05) / cvar(big, 0.05)));
}

TEST_CASE("volatility contributions are an Euler allocation") {
  std::mt19937_64 engine(3);
  const Eigen::MatrixXd cov = oracle::random_spd(4, engine);
  const Eigen::VectorXd w = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  const auto rc = vol_risk_contributions(w, cov);
  CHECK(rc.per_asset.sum() == doctest::Approx(std::sqrt(w.dot(cov * w))));
  CHECK(rc.per_asset_pct.sum() == doctest::Approx(100.0));
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd up = w, dn = w;
    up(i) += h;
    dn(i) -= h;
    const double grad = (std::sqrt(up.dot(cov * up)) - std::sqrt(dn.dot(cov * dn))) / (2 * h);
    CHECK(rc.per_asset(i) == doctest::Approx(w(i) * grad).epsilon(1e-6));
  }
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(4, 4);
  CHECK_THROWS_AS(vol_risk_contributions(w, singular), Error);
}

TEST_CASE("CVaR contributions sum to the portfolio CVaR") {
  std::mt19937_64 engine(8);
  std::normal_distribution<double> z;
  Eigen::MatrixXd s(1000, 3);
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = z(engine);
  const Eigen::VectorXd w = Eigen::Vector3d(0.5, 0.3, 0.2);
  const auto rc = cvar_risk_contributions(w, s, 0.05);
  CHECK(rc.per_asset.sum() == doctest::Approx(rc.total).epsilon(1e-12));
  CHECK(rc.total == doctest::Approx(oracle::portfolio_cvar(s, w, 0.05)).epsilon(1e-12));
  CHECK(rc.per_asset_pct.sum() == doctest::Approx(100.0));
  const Eigen::VectorXd out = portfolio_outcomes(s, w);
  CHECK((out - s * w).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("annual percent to daily rate") {
  CHECK(daily_rate_from_annual_percent(2.52) == doctest::Approx(0.0001));
}
