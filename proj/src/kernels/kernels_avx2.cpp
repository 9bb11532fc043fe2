// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 (and never -mfma). Nothing in here may be called
// before the dispatcher has confirmed AVX2 support.

#include "cryptorisk/kernels.hpp"

#if defined(CRYPTORISK_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace cryptorisk::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

void project(const double* columns, std::size_t rows, const double* weights, std::size_t d,
             double* out) {
  if (d == 0) {
    std::fill(out, out + rows, 0.0);
    return;
  }
  const std::size_t body = rows - rows % 4;
  const __m256d w0 = _mm256_set1_pd(weights[0]);
  std::size_t s = 0;
  for (; s < body; s += 4) {
    _mm256_storeu_pd(out + s, _mm256_mul_pd(w0, _mm256_loadu_pd(columns + s)));
  }
  for (; s < rows; ++s) out[s] = weights[0] * columns[s];

  for (std::size_t j = 1; j < d; ++j) {
    const double* col = columns + j * rows;
    const __m256d w = _mm256_set1_pd(weights[j]);
    s = 0;
    for (; s < body; s += 4) {
      const __m256d acc = _mm256_loadu_pd(out + s);
      const __m256d term = _mm256_mul_pd(w, _mm256_loadu_pd(col + s));
      _mm256_storeu_pd(out + s, _mm256_add_pd(acc, term));
    }
    for (; s < rows; ++s) out[s] = out[s] + weights[j] * col[s];
  }
}

void garch_step(const GarchStepCoefficients& c, double* ret, double* resid, double* var,
                const double* eps, std::size_t n) {
  const __m256d phi0 = _mm256_set1_pd(c.phi0);
  const __m256d phi1 = _mm256_set1_pd(c.phi1);
  const __m256d theta1 = _mm256_set1_pd(c.theta1);
  const __m256d alpha0 = _mm256_set1_pd(c.alpha0);
  const __m256d alpha1 = _mm256_set1_pd(c.alpha1);
  const __m256d beta1 = _mm256_set1_pd(c.beta1);
  const __m256d floor = _mm256_set1_pd(c.variance_floor);

  const std::size_t body = n - n % 4;
  std::size_t i = 0;
  for (; i < body; i += 4) {
    const __m256d r = _mm256_loadu_pd(ret + i);
    const __m256d a = _mm256_loadu_pd(resid + i);
    const __m256d v = _mm256_loadu_pd(var + i);
    const __m256d e = _mm256_loadu_pd(eps + i);

    const __m256d mu =
        _mm256_add_pd(_mm256_add_pd(phi0, _mm256_mul_pd(phi1, r)), _mm256_mul_pd(theta1, a));
    __m256d next_v = _mm256_add_pd(_mm256_add_pd(alpha0, _mm256_mul_pd(alpha1, _mm256_mul_pd(a, a))),
                                   _mm256_mul_pd(beta1, v));
    // max(v, floor): operand order matches std::max(v, floor) for NaN-free input.
    next_v = _mm256_max_pd(next_v, floor);
    const __m256d next_a = _mm256_mul_pd(_mm256_sqrt_pd(next_v), e);

    _mm256_storeu_pd(var + i, next_v);
    _mm256_storeu_pd(resid + i, next_a);
    _mm256_storeu_pd(ret + i, _mm256_add_pd(mu, next_a));
  }
  if (i < n) scalar::garch_step(c, ret + i, resid + i, var + i, eps + i, n - i);
}

PayoffSums payoff_sums(const double* terminals, std::size_t n, double strike) {
  const __m256d k = _mm256_set1_pd(strike);
  const __m256d zero = _mm256_setzero_pd();
  __m256d call = zero, call_sq = zero, put = zero, put_sq = zero;

  const std::size_t body = n - n % 4;
  std::size_t i = 0;
  for (; i < body; i += 4) {
    const __m256d s = _mm256_loadu_pd(terminals + i);
    const __m256d c = _mm256_max_pd(_mm256_sub_pd(s, k), zero);
    const __m256d p = _mm256_max_pd(_mm256_sub_pd(k, s), zero);
    call = _mm256_add_pd(call, c);
    call_sq = _mm256_add_pd(call_sq, _mm256_mul_pd(c, c));
    put = _mm256_add_pd(put, p);
    put_sq = _mm256_add_pd(put_sq, _mm256_mul_pd(p, p));
  }
  PayoffSums tail = scalar::payoff_sums(terminals + i, n - i, strike);
  return {hsum(call) + tail.call, hsum(call_sq) + tail.call_sq, hsum(put) + tail.put,
          hsum(put_sq) + tail.put_sq};
}

MomentSums moment_sums(const double* x, std::size_t n, double shift) {
  const __m256d sh = _mm256_set1_pd(shift);
  __m256d sum = _mm256_setzero_pd();
  __m256d sum_sq = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  std::size_t i = 0;
  for (; i < body; i += 4) {
    const __m256d y = _mm256_sub_pd(_mm256_loadu_pd(x + i), sh);
    sum = _mm256_add_pd(sum, y);
    sum_sq = _mm256_add_pd(sum_sq, _mm256_mul_pd(y, y));
  }
  MomentSums tail = scalar::moment_sums(x + i, n - i, shift);
  return {hsum(sum) + tail.sum, hsum(sum_sq) + tail.sum_sq};
}

}  // namespace cryptorisk::kernels::avx2

#else  // !CRYPTORISK_HAVE_AVX2

namespace cryptorisk::kernels::avx2 {

void project(const double* columns, std::size_t rows, const double* weights, std::size_t d,
             double* out) {
  scalar::project(columns, rows, weights, d, out);
}
void garch_step(const GarchStepCoefficients& c, double* ret, double* resid, double* var,
                const double* eps, std::size_t n) {
  scalar::garch_step(c, ret, resid, var, eps, n);
}
PayoffSums payoff_sums(const double* terminals, std::size_t n, double strike) {
  return scalar::payoff_sums(terminals, n, strike);
}
MomentSums moment_sums(const double* x, std::size_t n, double shift) {
  return scalar::moment_sums(x, n, shift);
}

}  // namespace cryptorisk::kernels::avx2

#endif
