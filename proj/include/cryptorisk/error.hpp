// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cryptorisk {

/// Machine-readable error category; the CLI prints it verbatim.
enum class ErrorKind {
  io,
  parse,
  domain,
  duplicate,
  insufficient_data,
  alignment,
  degenerate_data,
  convergence,
  singular_matrix,
  shape,
  infeasible,
  unbounded,
  no_martingale_measure,
  fit_failure,
  config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& detail);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Optimizer gave up; the best iterate found so far travels with the error.
template <class Params>
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, Params best)
      : Error(ErrorKind::convergence, message), best_(std::move(best)) {}

  const Params& best() const noexcept { return best_; }

 private:
  Params best_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

}  // namespace cryptorisk
