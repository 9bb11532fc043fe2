// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "cryptorisk/error.hpp"

namespace cryptorisk::qp {

namespace {

constexpr double kFeasibilitySlack = 1e-9;

struct EqpSolution {
  Eigen::VectorXd step;
  Eigen::VectorXd multipliers;  // one per working-set row
};

// min 1/2 p'Qp + g'p  s.t.  W p = 0, through the KKT system
// [Q -W'; W 0] [p; lambda] = [-g; 0].
EqpSolution solve_eqp(const Eigen::MatrixXd& q, const Eigen::VectorXd& g, const Eigen::MatrixXd& w) {
  const Eigen::Index n = q.rows();
  const Eigen::Index k = w.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
  kkt.topLeftCorner(n, n) = q;
  kkt.topRightCorner(n, k) = -w.transpose();
  kkt.bottomLeftCorner(k, n) = w;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
  rhs.head(n) = -g;
  const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return {sol.head(n), sol.tail(k)};
}

}  // namespace

QpResult solve_qp(const QuadraticProgram& qp, const Eigen::VectorXd& x0, const QpOptions& options) {
  const Eigen::Index n = qp.q.rows();
  const Eigen::Index me = qp.a_eq.rows();
  const Eigen::Index mi = qp.a_in.rows();
  require(qp.q.cols() == n && qp.c.size() == n && x0.size() == n, ErrorKind::shape,
          "quadratic program dimensions disagree");
  require((me == 0 || qp.a_eq.cols() == n) && qp.b_eq.size() == me && (mi == 0 || qp.a_in.cols() == n) &&
              qp.b_in.size() == mi,
          ErrorKind::shape, "constraint dimensions disagree");

  const double scale = 1.0 + x0.cwiseAbs().maxCoeff();
  if (me > 0 && (qp.a_eq * x0 - qp.b_eq).cwiseAbs().maxCoeff() > kFeasibilitySlack * scale) {
    fail(ErrorKind::infeasible, "starting point violates an equality constraint");
  }
  if (mi > 0 && (qp.a_in * x0 - qp.b_in).minCoeff() < -kFeasibilitySlack * scale) {
    fail(ErrorKind::infeasible, "starting point violates an inequality constraint");
  }

  Eigen::VectorXd x = x0;
  std::vector<bool> active(static_cast<std::size_t>(mi), false);
  for (Eigen::Index i = 0; i < mi; ++i) {
    active[static_cast<std::size_t>(i)] = std::abs(qp.a_in.row(i).dot(x) - qp.b_in[i]) <= kFeasibilitySlack * scale;
  }

  auto working_rows = [&](std::vector<Eigen::Index>& ids) {
    ids.clear();
    for (Eigen::Index i = 0; i < mi; ++i) {
      if (active[static_cast<std::size_t>(i)]) ids.push_back(i);
    }
    Eigen::MatrixXd w(me + static_cast<Eigen::Index>(ids.size()), n);
    if (me > 0) w.topRows(me) = qp.a_eq;
    for (std::size_t r = 0; r < ids.size(); ++r) w.row(me + static_cast<Eigen::Index>(r)) = qp.a_in.row(ids[r]);
    return w;
  };

  QpResult result;
  std::vector<Eigen::Index> ids;
  const double step_tol = options.tolerance * scale;
  for (std::size_t iter = 0;; ++iter) {
    if (iter >= options.max_iterations) fail(ErrorKind::convergence, "active-set iteration limit reached");
    const Eigen::MatrixXd w = working_rows(ids);
    const Eigen::VectorXd g = qp.q * x + qp.c;
    const EqpSolution eqp = solve_eqp(qp.q, g, w);

    if (eqp.step.cwiseAbs().maxCoeff() <= step_tol) {
      // Stationary on the working set; drop the most negative inequality multiplier.
      Eigen::Index drop = -1;
      double most_negative = -1e-12 * (1.0 + g.cwiseAbs().maxCoeff());
      for (std::size_t r = 0; r < ids.size(); ++r) {
        const double lambda = eqp.multipliers[me + static_cast<Eigen::Index>(r)];
        if (lambda < most_negative) {
          most_negative = lambda;
          drop = ids[r];
        }
      }
      if (drop < 0) {
        result.x = x;
        result.eq_multipliers = eqp.multipliers.head(me);
        result.in_multipliers = Eigen::VectorXd::Zero(mi);
        for (std::size_t r = 0; r < ids.size(); ++r) {
          result.in_multipliers[ids[r]] = eqp.multipliers[me + static_cast<Eigen::Index>(r)];
        }
        result.iterations = iter;
        break;
      }
      active[static_cast<std::size_t>(drop)] = false;
      continue;
    }

    // Longest step along p that keeps every inactive constraint satisfied.
    double step = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < mi; ++i) {
      if (active[static_cast<std::size_t>(i)]) continue;
      const double slope = qp.a_in.row(i).dot(eqp.step);
      if (slope >= 0.0) continue;
      const double limit = std::max(0.0, (qp.b_in[i] - qp.a_in.row(i).dot(x)) / slope);
      if (limit < step) {
        step = limit;
        blocking = i;
      }
    }
    x += step * eqp.step;
    if (blocking >= 0) active[static_cast<std::size_t>(blocking)] = true;
  }

  const Eigen::VectorXd gradient = qp.q * result.x + qp.c;
  Eigen::VectorXd residual = gradient;
  if (me > 0) residual -= qp.a_eq.transpose() * result.eq_multipliers;
  if (mi > 0) residual -= qp.a_in.transpose() * result.in_multipliers;
  result.kkt_residual = residual.cwiseAbs().maxCoeff();
  result.objective = 0.5 * result.x.dot(qp.q * result.x) + qp.c.dot(result.x);
  return result;
}

}  // namespace cryptorisk::qp
