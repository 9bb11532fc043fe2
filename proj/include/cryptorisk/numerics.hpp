// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace cryptorisk::numerics {

struct NelderMeadOptions {
  /// Stop when the spread of simplex values drops below
  /// tolerance * (1 + |best value|).
  double tolerance = 1e-8;
  std::size_t max_evaluations = 20000;
  /// Edge length of the initial simplex along each coordinate.
  double initial_step = 0.25;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Gradient-free simplex minimization. Non-finite objective values are
/// treated as +infinity so the objective can signal infeasible regions.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace cryptorisk::numerics
