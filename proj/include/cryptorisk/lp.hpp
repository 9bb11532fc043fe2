// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace cryptorisk::lp {

/// min c'x  s.t.  A x = b,  lower <= x <= upper (entries may be +-infinity).
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LpOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-10;
  std::size_t max_iterations = 200000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
  /// Columns that start nonbasic at their upper bound (empty = all at lower).
  Eigen::VectorX<bool> start_at_upper;
};

struct LpResult {
  Eigen::VectorXd x;
  /// Row multipliers y with c_B = B' y at the optimal basis.
  Eigen::VectorXd duals;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Two-phase bounded-variable revised simplex with a dense basis inverse.
/// Throws Error(infeasible), Error(unbounded) or Error(convergence).
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace cryptorisk::lp
