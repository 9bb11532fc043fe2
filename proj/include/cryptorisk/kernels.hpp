// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2 variant in kernels::avx2. The
// unqualified entry points route through a dispatch table chosen at first
// use from the CPU features (override with CRYPTORISK_ISA=scalar|avx2).
//
// Element-wise kernels (project, garch_step) are bit-identical across
// variants. Reductions (payoff_sums, moment_sums) accumulate in a different
// order and agree to rounding only.

#include <cstddef>
#include <span>
#include <string_view>

namespace cryptorisk::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best variant the running CPU supports.
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
/// Throws Error(domain) if the CPU cannot run `isa`.
void set_active_isa(Isa isa);
bool isa_supported(Isa isa) noexcept;

struct GarchStepCoefficients {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double theta1 = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double variance_floor = 1e-12;
};

struct PayoffSums {
  double call = 0.0;
  double call_sq = 0.0;
  double put = 0.0;
  double put_sq = 0.0;
};

struct MomentSums {
  double sum = 0.0;     // sum of (x - shift)
  double sum_sq = 0.0;  // sum of (x - shift)^2
};

// out[s] = sum_j weights[j] * columns[j * rows + s], accumulated j = 0..d-1.
// `columns` is column-major rows x d.
using ProjectFn = void (*)(const double* columns, std::size_t rows, const double* weights,
                           std::size_t d, double* out);

// One ARMA(1,1)-GARCH(1,1) step per lane, in place:
//   mu = phi0 + phi1*ret + theta1*resid
//   var = max(alpha0 + alpha1*resid^2 + beta1*var, floor)
//   resid = sqrt(var)*eps ; ret = mu + resid
using GarchStepFn = void (*)(const GarchStepCoefficients& c, double* ret, double* resid,
                             double* var, const double* eps, std::size_t n);

using PayoffSumsFn = PayoffSums (*)(const double* terminals, std::size_t n, double strike);
using MomentSumsFn = MomentSums (*)(const double* x, std::size_t n, double shift);

namespace scalar {
void project(const double* columns, std::size_t rows, const double* weights, std::size_t d,
             double* out);
void garch_step(const GarchStepCoefficients& c, double* ret, double* resid, double* var,
                const double* eps, std::size_t n);
PayoffSums payoff_sums(const double* terminals, std::size_t n, double strike);
MomentSums moment_sums(const double* x, std::size_t n, double shift);
}  // namespace scalar

namespace avx2 {
void project(const double* columns, std::size_t rows, const double* weights, std::size_t d,
             double* out);
void garch_step(const GarchStepCoefficients& c, double* ret, double* resid, double* var,
                const double* eps, std::size_t n);
PayoffSums payoff_sums(const double* terminals, std::size_t n, double strike);
MomentSums moment_sums(const double* x, std::size_t n, double shift);
}  // namespace avx2

// Dispatched entry points.

void project(std::span<const double> columns, std::size_t rows, std::span<const double> weights,
             std::span<double> out);
void garch_step(const GarchStepCoefficients& c, std::span<double> ret, std::span<double> resid,
                std::span<double> var, std::span<const double> eps);
PayoffSums payoff_sums(std::span<const double> terminals, double strike);
MomentSums moment_sums(std::span<const double> x, double shift = 0.0);

}  // namespace cryptorisk::kernels
