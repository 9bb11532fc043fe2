// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/stats.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "cryptorisk/error.hpp"

namespace cryptorisk::stats {

double mean(std::span<const double> x) {
  require(!x.empty(), ErrorKind::insufficient_data, "mean of an empty sample");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  require(x.size() >= 2, ErrorKind::insufficient_data, "variance needs at least two points");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

namespace {

// Central moments 2..4 with divisor n.
void central_moments(std::span<const double> x, double& m2, double& m3, double& m4) {
  const double m = mean(x);
  m2 = m3 = m4 = 0.0;
  for (double v : x) {
    const double y = v - m;
    const double y2 = y * y;
    m2 += y2;
    m3 += y2 * y;
    m4 += y2 * y2;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
}

}  // namespace

double skewness(std::span<const double> x) {
  double m2, m3, m4;
  central_moments(x, m2, m3, m4);
  require(m2 > 0.0, ErrorKind::degenerate_data, "skewness of a constant sample");
  return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(std::span<const double> x) {
  double m2, m3, m4;
  central_moments(x, m2, m3, m4);
  require(m2 > 0.0, ErrorKind::degenerate_data, "kurtosis of a constant sample");
  return m4 / (m2 * m2) - 3.0;
}

Eigen::VectorXd column_means(const Eigen::MatrixXd& x) {
  require(x.rows() > 0, ErrorKind::insufficient_data, "column means of an empty sample");
  return x.colwise().mean().transpose();
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  require(x.rows() >= 2, ErrorKind::insufficient_data, "covariance needs at least two rows");
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  return (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
}

Eigen::MatrixXd correlation(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd cov = covariance(x);
  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  require((sd.array() > 0.0).all(), ErrorKind::degenerate_data,
          "correlation of a constant column");
  return sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::domain, "normal quantile needs p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace cryptorisk::stats
