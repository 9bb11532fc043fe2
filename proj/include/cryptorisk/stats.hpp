// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include <Eigen/Dense>

namespace cryptorisk::stats {

double mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
double skewness(std::span<const double> x);
double excess_kurtosis(std::span<const double> x);

/// Column means of a T x d sample.
Eigen::VectorXd column_means(const Eigen::MatrixXd& x);
/// Unbiased covariance of the columns of a T x d sample.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& x);
Eigen::MatrixXd correlation(const Eigen::MatrixXd& x);

double normal_cdf(double x);
double normal_quantile(double p);

inline std::span<const double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.data() + j * m.rows(), static_cast<std::size_t>(m.rows())};
}

}  // namespace cryptorisk::stats
