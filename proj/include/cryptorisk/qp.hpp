// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace cryptorisk::qp {

/// min 1/2 x'Qx + c'x  s.t.  A_eq x = b_eq,  A_in x >= b_in.  Q is symmetric
/// positive semidefinite.
struct QuadraticProgram {
  Eigen::MatrixXd q;
  Eigen::VectorXd c;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_in;
  Eigen::VectorXd b_in;
};

struct QpOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 1000;
};

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd in_multipliers;  // zero for inactive constraints
  double objective = 0.0;
  /// max |Qx + c - A_eq' y - A_in' z| over the final multipliers.
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
};

/// Primal active-set method from a feasible starting point x0.
/// Throws Error(infeasible) when x0 violates a constraint and
/// Error(convergence) when the iteration limit is reached.
QpResult solve_qp(const QuadraticProgram& qp, const Eigen::VectorXd& x0, const QpOptions& options = {});

}  // namespace cryptorisk::qp
