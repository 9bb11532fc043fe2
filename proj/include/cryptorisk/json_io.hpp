// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON documents for fitted parameters, keyed by field name. Vectors are
// arrays and matrices are arrays of rows.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "cryptorisk/dist/mvg.hpp"
#include "cryptorisk/dist/mvt.hpp"
#include "cryptorisk/dist/nig.hpp"
#include "cryptorisk/dist/tcopula.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/garch.hpp"

namespace cryptorisk::garch {
void to_json(nlohmann::json& j, const GarchParams& p);
void from_json(const nlohmann::json& j, GarchParams& p);
}  // namespace cryptorisk::garch

namespace cryptorisk::dist {
void to_json(nlohmann::json& j, const MvtParams& p);
void from_json(const nlohmann::json& j, MvtParams& p);
/// Margins are stored as their sorted samples and rebuilt with `bandwidth`.
void to_json(nlohmann::json& j, const TCopulaParams& p);
void from_json(const nlohmann::json& j, TCopulaParams& p);
void to_json(nlohmann::json& j, const MvgParams& p);
void from_json(const nlohmann::json& j, MvgParams& p);
void to_json(nlohmann::json& j, const NigParams& p);
void from_json(const nlohmann::json& j, NigParams& p);
}  // namespace cryptorisk::dist

namespace cryptorisk::json_io {

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// Throws Error(io) or Error(parse) with the path in the message.
nlohmann::json read_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_file(const nlohmann::json& doc, const std::filesystem::path& path);

/// j.get<T>() with nlohmann exceptions turned into Error(parse).
template <class T>
T parse_as(const nlohmann::json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace cryptorisk::json_io
