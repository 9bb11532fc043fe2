// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cryptorisk/kernels.hpp"

namespace cryptorisk::kernels::scalar {

void project(const double* columns, std::size_t rows, const double* weights, std::size_t d,
             double* out) {
  if (d == 0) {
    std::fill(out, out + rows, 0.0);
    return;
  }
  const double w0 = weights[0];
  for (std::size_t s = 0; s < rows; ++s) out[s] = w0 * columns[s];
  for (std::size_t j = 1; j < d; ++j) {
    const double w = weights[j];
    const double* col = columns + j * rows;
    for (std::size_t s = 0; s < rows; ++s) out[s] = out[s] + w * col[s];
  }
}

void garch_step(const GarchStepCoefficients& c, double* ret, double* resid, double* var,
                const double* eps, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = (c.phi0 + c.phi1 * ret[i]) + c.theta1 * resid[i];
    double v = (c.alpha0 + c.alpha1 * (resid[i] * resid[i])) + c.beta1 * var[i];
    v = std::max(v, c.variance_floor);
    const double a = std::sqrt(v) * eps[i];
    var[i] = v;
    resid[i] = a;
    ret[i] = mu + a;
  }
}

PayoffSums payoff_sums(const double* terminals, std::size_t n, double strike) {
  PayoffSums sums;
  for (std::size_t i = 0; i < n; ++i) {
    const double call = std::max(terminals[i] - strike, 0.0);
    const double put = std::max(strike - terminals[i], 0.0);
    sums.call += call;
    sums.call_sq += call * call;
    sums.put += put;
    sums.put_sq += put * put;
  }
  return sums;
}

MomentSums moment_sums(const double* x, std::size_t n, double shift) {
  MomentSums sums;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x[i] - shift;
    sums.sum += y;
    sums.sum_sq += y * y;
  }
  return sums;
}

}  // namespace cryptorisk::kernels::scalar
