// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/optimize.hpp"
#include "cryptorisk/stats.hpp"
#include "support/oracles.hpp"

using namespace cryptorisk;
using namespace cryptorisk::optimize;

namespace {

Eigen::MatrixXd normal_scenarios(Eigen::Index n, Eigen::Index d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd s(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) s(i, j) = scale * (1.0 + 0.5 * j) * z(engine) + 0.001 * j;
  }
  return s;
}

Eigen::VectorXd random_feasible(Eigen::Index d, Bounds b, std::mt19937_64& engine) {
  // Rejection sample from the bounded simplex.
  std::exponential_distribution<double> e;
  for (;;) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w(i) = e(engine);
    w = Eigen::VectorXd::Constant(d, b.lower) + w / w.sum() * (1.0 - b.lower * d);
    if (w.maxCoeff() <= b.upper) return w;
  }
}

}  // namespace

TEST_CASE("exchangeable two-asset portfolio splits evenly") {
  const Eigen::MatrixXd s = normal_scenarios(1000, 2, 1);
  Eigen::MatrixXd both(2000, 2);
  both << s, s.rowwise().reverse();
  const auto mv = min_variance_weights(both);
  CHECK(mv.weights(0) == doctest::Approx(0.5).epsilon(1e-9));
  const auto mc = min_cvar_weights(both, 0.05);
  CHECK(mc.risk <= oracle::portfolio_cvar(both, Eigen::Vector2d(0.5, 0.5), 0.05) + 1e-12);
}

TEST_CASE("minimum-risk portfolios beat random feasible portfolios") {
  const auto s = normal_scenarios(2000, 4, 2);
  const Bounds b{0.05, 0.6};
  const auto mv = min_variance_weights(s, b);
  const auto mc = min_cvar_weights(s, 0.05, b);
  const Eigen::MatrixXd cov = stats::covariance(s);
  std::mt19937_64 engine(3);
  for (int i = 0; i < 200; ++i) {
    const auto w = random_feasible(4, b, engine);
    CHECK(mv.weights.dot(cov * mv.weights) <= w.dot(cov * w) + 1e-14);
    CHECK(mc.risk <= oracle::portfolio_cvar(s, w, 0.05) + 1e-12);
  }
  for (const auto* p : {&mv, &mc}) {
    CHECK(p->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p->weights.minCoeff() >= b.lower - 1e-12);
    CHECK(p->weights.maxCoeff() <= b.upper + 1e-12);
  }
  CHECK(mc.risk == doctest::Approx(oracle::portfolio_cvar(s, mc.weights, 0.05)).epsilon(1e-12));
  CHECK(mc.residual < 1e-9);
  CHECK(mv.residual < 1e-9);
}

TEST_CASE("unconstrained minimum variance matches the closed form") {
  const auto s = normal_scenarios(500, 3, 5);
  const auto mv = min_variance_weights(s, Bounds{-10.0, 10.0});
  CHECK((mv.weights - oracle::closed_form_min_variance(stats::covariance(s))).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("degenerate shapes") {
  const auto one = normal_scenarios(300, 1, 6);
  CHECK(min_variance_weights(one).weights(0) == doctest::Approx(1.0));
  CHECK(min_cvar_weights(one, 0.05).weights(0) == doctest::Approx(1.0));

  Eigen::MatrixXd dup(300, 2);
  dup << one, one;
  const auto mv = min_variance_weights(dup);
  CHECK(mv.weights.sum() == doctest::Approx(1.0));
  CHECK(mv.weights.minCoeff() >= -1e-12);

  try {
    check_bounds(Bounds{0.3, 1.0}, 4);
    FAIL("expected infeasible bounds");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infeasible);
  }
  CHECK_THROWS_AS(check_bounds(Bounds{0.0, 0.2}, 4), Error);
  CHECK_NOTHROW(check_bounds(Bounds{0.25, 0.25}, 4));
}

TEST_CASE("scaling scenarios scales risk and keeps weights") {
  const auto s = normal_scenarios(1000, 3, 7);
  const auto a = min_cvar_weights(s, 0.05);
  const auto b = min_cvar_weights(s * 4.0, 0.05);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(b.risk == doctest::Approx(4.0 * a.risk).epsilon(1e-9));
  const auto va = min_variance_weights(s);
  const auto vb = min_variance_weights(s * 4.0);
  CHECK((va.weights - vb.weights).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("efficient frontiers are monotone") {
  const auto s = normal_scenarios(1000, 3, 8, 0.01);
  for (auto objective : {Objective::variance, Objective::cvar}) {
    const auto f = efficient_frontier(s, objective, Bounds{}, 6, 0.05);
    REQUIRE(f.size() == 6);
    for (std::size_t i = 1; i < f.size(); ++i) {
      CHECK(f[i].expected_return >= f[i - 1].expected_return - 1e-12);
      CHECK(f[i].risk >= f[i - 1].risk - 1e-9);
    }
  }
  const auto fixed = efficient_frontier(s, Objective::variance, Bounds{1.0 / 3.0, 1.0 / 3.0}, 6);
  CHECK(fixed.size() == 1);
  CHECK(max_attainable_return(Eigen::Vector3d(0.1, 0.3, 0.2), Bounds{0.0, 0.5}) == doctest::Approx(0.25));
}

TEST_CASE("rolling optimization with one asset reproduces its returns") {
  marketdata::ReturnPanel panel;
  panel.assets = {"X"};
  const auto r = oracle::simulate_garch({0.0, 0.1, 0.0, 2e-5, 0.1, 0.85}, 140, 9);
  panel.returns = Eigen::Map<const Eigen::VectorXd>(r.data(), 140);
  const auto start = marketdata::parse_date("2019-01-01");
  for (int t = 0; t < 140; ++t) panel.dates.push_back(start + std::chrono::days(t));
  RollingConfig config;
  config.window = 120;
  config.scenarios = 500;
  config.seed = 1;
  const auto res = rolling_optimize(panel, config);
  REQUIRE(res.min_cvar.returns.size() == 20);
  for (std::size_t t = 0; t < 20; ++t) {
    CHECK(res.min_cvar.returns[t] == doctest::Approx(r[120 + t]).epsilon(1e-14));
    CHECK(res.min_variance.returns[t] == doctest::Approx(r[120 + t]).epsilon(1e-14));
  }
  const auto cum = cumulative_returns(res.min_cvar.returns);
  double total = 0.0;
  for (std::size_t t = 120; t < 140; ++t) total += r[t];
  CHECK(cum.back() == doctest::Approx(std::exp(total) - 1.0));
}

TEST_CASE("rolling optimization is thread invariant") {
  marketdata::ReturnPanel panel;
  panel.assets = {"X", "Y", "Z"};
  panel.returns.resize(130, 3);
  for (int j = 0; j < 3; ++j) {
    const auto r = oracle::simulate_garch({0.0, 0.1, 0.0, 2e-5, 0.1, 0.85}, 130, 20 + j);
    panel.returns.col(j) = Eigen::Map<const Eigen::VectorXd>(r.data(), 130);
  }
  const auto start = marketdata::parse_date("2019-01-01");
  for (int t = 0; t < 130; ++t) panel.dates.push_back(start + std::chrono::days(t));
  RollingConfig config;
  config.window = 120;
  config.scenarios = 1000;
  config.seed = 2;
  config.threads = 1;
  const auto a = rolling_optimize(panel, config);
  config.threads = 3;
  const auto b = rolling_optimize(panel, config);
  CHECK((a.min_cvar.weights - b.min_cvar.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.min_variance.weights - b.min_variance.weights).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index t = 0; t < a.min_cvar.weights.rows(); ++t) {
    CHECK(a.min_cvar.weights.row(t).sum() == doctest::Approx(1.0));
  }
}
