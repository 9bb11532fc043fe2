// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "cryptorisk/error.hpp"
#include "cryptorisk/kernels.hpp"

namespace cryptorisk::kernels {
namespace {

struct Table {
  ProjectFn project;
  GarchStepFn garch_step;
  PayoffSumsFn payoff_sums;
  MomentSumsFn moment_sums;
};

constexpr Table kScalar{scalar::project, scalar::garch_step, scalar::payoff_sums,
                        scalar::moment_sums};
constexpr Table kAvx2{avx2::project, avx2::garch_step, avx2::payoff_sums, avx2::moment_sums};

bool cpu_has_avx2() noexcept {
#if defined(CRYPTORISK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  Isa isa = detected_isa();
  if (const char* env = std::getenv("CRYPTORISK_ISA")) {
    const std::string value(env);
    if (value == "scalar") isa = Isa::scalar;
  }
  return isa;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& table() { return active().load(std::memory_order_relaxed) == Isa::avx2 ? kAvx2 : kScalar; }

void check_size(bool ok) {
  require(ok, ErrorKind::shape, "kernel argument sizes do not match");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

Isa detected_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  require(isa_supported(isa), ErrorKind::domain, "requested instruction set is not supported");
  active().store(isa, std::memory_order_relaxed);
}

void project(std::span<const double> columns, std::size_t rows, std::span<const double> weights,
             std::span<double> out) {
  check_size(columns.size() == rows * weights.size() && out.size() == rows);
  table().project(columns.data(), rows, weights.data(), weights.size(), out.data());
}

void garch_step(const GarchStepCoefficients& c, std::span<double> ret, std::span<double> resid,
                std::span<double> var, std::span<const double> eps) {
  const std::size_t n = ret.size();
  check_size(resid.size() == n && var.size() == n && eps.size() == n);
  table().garch_step(c, ret.data(), resid.data(), var.data(), eps.data(), n);
}

PayoffSums payoff_sums(std::span<const double> terminals, double strike) {
  return table().payoff_sums(terminals.data(), terminals.size(), strike);
}

MomentSums moment_sums(std::span<const double> x, double shift) {
  return table().moment_sums(x.data(), x.size(), shift);
}

}  // namespace cryptorisk::kernels
