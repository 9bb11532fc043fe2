// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/error.hpp"

#include <fmt/format.h>

namespace cryptorisk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io_error";
    case ErrorKind::parse: return "parse_error";
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::duplicate: return "duplicate_error";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::alignment: return "alignment_error";
    case ErrorKind::degenerate_data: return "degenerate_data";
    case ErrorKind::convergence: return "convergence_error";
    case ErrorKind::singular_matrix: return "singular_matrix";
    case ErrorKind::shape: return "shape_error";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::unbounded: return "unbounded";
    case ErrorKind::no_martingale_measure: return "no_martingale_measure";
    case ErrorKind::fit_failure: return "fit_failure";
    case ErrorKind::config: return "config_error";
  }
  return "error";
}

ParseError::ParseError(std::string source, std::size_t line, const std::string& detail)
    : Error(ErrorKind::parse, fmt::format("{}:{}: {}", source, line, detail)),
      source_(std::move(source)),
      line_(line) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace cryptorisk
