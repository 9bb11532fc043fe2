// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <limits>
#include <random>

#include <doctest.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/lp.hpp"
#include "cryptorisk/qp.hpp"

using namespace cryptorisk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("LP with a known vertex") {
  // max 3x + 2y s.t. x + y + s1 = 4, x + 3y + s2 = 6, x <= 3.
  lp::LinearProgram p;
  p.c = Eigen::Vector4d(-3, -2, 0, 0);
  p.a.resize(2, 4);
  p.a << 1, 1, 1, 0, 1, 3, 0, 1;
  p.b = Eigen::Vector2d(4, 6);
  p.lower = Eigen::Vector4d::Zero();
  p.upper = Eigen::Vector4d(3, kInf, kInf, kInf);
  const auto r = lp::solve_lp(p);
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-11.0));
  // Strong duality: c'x = b'y + bound terms; only x0 sits at a finite upper bound.
  const Eigen::VectorXd reduced = p.c - p.a.transpose() * r.duals;
  CHECK(r.objective == doctest::Approx(p.b.dot(r.duals) + reduced(0) * 3.0));
}

TEST_CASE("LP with free variables and equality rows") {
  // min |x - 2| written as x - 2 = u - v, u, v >= 0, min u + v.
  lp::LinearProgram p;
  p.c = Eigen::Vector3d(0, 1, 1);
  p.a.resize(1, 3);
  p.a << 1, -1, 1;
  p.b = Eigen::VectorXd::Constant(1, 2.0);
  p.lower = Eigen::Vector3d(-kInf, 0, 0);
  p.upper = Eigen::Vector3d(kInf, kInf, kInf);
  const auto r = lp::solve_lp(p);
  CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.x(0) == doctest::Approx(2.0));
}

TEST_CASE("LP infeasible and unbounded") {
  lp::LinearProgram p;
  p.c = Eigen::Vector2d(1, 1);
  p.a.resize(1, 2);
  p.a << 1, 1;
  p.b = Eigen::VectorXd::Constant(1, 5.0);
  p.lower = Eigen::Vector2d::Zero();
  p.upper = Eigen::Vector2d(1, 1);
  try {
    lp::solve_lp(p);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infeasible);
  }
  p.c = Eigen::Vector2d(-1, 0);
  p.upper = Eigen::Vector2d(kInf, kInf);
  p.a << 1, -1;
  p.b(0) = 0.0;
  try {
    lp::solve_lp(p);
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unbounded);
  }
}

TEST_CASE("random LPs agree with vertex enumeration on the box") {
  // min c'x over {sum x = 1, 0 <= x <= u}: greedy fill in order of cost.
  std::mt19937_64 engine(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), cap(0.2, 0.6);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 6;
    lp::LinearProgram p;
    p.c.resize(d);
    p.upper.resize(d);
    for (int i = 0; i < d; ++i) {
      p.c(i) = u(engine);
      p.upper(i) = cap(engine);
    }
    p.lower = Eigen::VectorXd::Zero(d);
    p.a = Eigen::MatrixXd::Ones(1, d);
    p.b = Eigen::VectorXd::Ones(1);
    if (p.upper.sum() < 1.0) continue;
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return p.c(a) < p.c(b); });
    double left = 1.0, best = 0.0;
    for (int i : order) {
      const double take = std::min(left, p.upper(i));
      best += take * p.c(i);
      left -= take;
    }
    CHECK(lp::solve_lp(p).objective == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("QP satisfies KKT") {
  std::mt19937_64 engine(4);
  std::normal_distribution<double> z;
  const int d = 5;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d * d; ++i) m.data()[i] = z(engine);
  qp::QuadraticProgram p;
  p.q = m * m.transpose() + Eigen::MatrixXd::Identity(d, d) * 0.1;
  p.c = Eigen::VectorXd::NullaryExpr(d, [&] { return z(engine); });
  p.a_eq = Eigen::MatrixXd::Ones(1, d);
  p.b_eq = Eigen::VectorXd::Ones(1);
  p.a_in = Eigen::MatrixXd::Identity(d, d);
  p.b_in = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(d, 1.0 / d);
  const auto r = qp::solve_qp(p, x0);
  CHECK(r.kkt_residual < 1e-10);
  CHECK(r.x.sum() == doctest::Approx(1.0));
  CHECK(r.x.minCoeff() >= -1e-12);
  CHECK(r.in_multipliers.minCoeff() >= -1e-10);
  for (int i = 0; i < d; ++i) CHECK(std::abs(r.in_multipliers(i) * r.x(i)) < 1e-10);
  const Eigen::VectorXd g = p.q * r.x + p.c;
  CHECK((g - p.a_eq.transpose() * r.eq_multipliers - r.in_multipliers).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::VectorXd bad = x0;
  bad(0) = -0.5;
  bad(1) += 0.5;
  CHECK_THROWS_AS(qp::solve_qp(p, bad), Error);
}

TEST_CASE("unconstrained QP solves the linear system") {
  qp::QuadraticProgram p;
  p.q = Eigen::Matrix2d{{2.0, 0.5}, {0.5, 1.0}};
  p.c = Eigen::Vector2d(-1.0, 1.0);
  p.a_eq.resize(0, 2);
  p.b_eq.resize(0);
  p.a_in.resize(0, 2);
  p.b_in.resize(0);
  const auto r = qp::solve_qp(p, Eigen::Vector2d::Zero());
  CHECK((r.x - p.q.ldlt().solve(-p.c)).cwiseAbs().maxCoeff() < 1e-12);
}
