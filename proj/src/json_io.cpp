// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/json_io.hpp"

#include <fstream>
#include <vector>

#include <fmt/format.h>

namespace cryptorisk::json_io {

nlohmann::json to_json(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = n == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != m) fail(ErrorKind::shape, "ragged matrix in JSON document");
    for (Eigen::Index k = 0; k < m; ++k) out(i, k) = row[static_cast<std::size_t>(k)];
  }
  return out;
}

nlohmann::json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open {}", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::parse, fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_file(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

}  // namespace cryptorisk::json_io

namespace cryptorisk::garch {

void to_json(nlohmann::json& j, const GarchParams& p) {
  j = nlohmann::json{{"phi0", p.phi0},     {"phi1", p.phi1},     {"theta1", p.theta1},
                     {"alpha0", p.alpha0}, {"alpha1", p.alpha1}, {"beta1", p.beta1},
                     {"family", to_string(p.family)}, {"nu", p.nu}};
}

void from_json(const nlohmann::json& j, GarchParams& p) {
  j.at("phi0").get_to(p.phi0);
  j.at("phi1").get_to(p.phi1);
  j.at("theta1").get_to(p.theta1);
  j.at("alpha0").get_to(p.alpha0);
  j.at("alpha1").get_to(p.alpha1);
  j.at("beta1").get_to(p.beta1);
  p.family = parse_family(j.at("family").get<std::string>());
  p.nu = j.value("nu", 0.0);
}

}  // namespace cryptorisk::garch

namespace cryptorisk::dist {

using json_io::matrix_from_json;
using json_io::vector_from_json;

void to_json(nlohmann::json& j, const MvtParams& p) {
  j = nlohmann::json{{"nu", p.nu}, {"mu", json_io::to_json(p.mu)}, {"sigma", json_io::to_json(p.sigma)}};
}

void from_json(const nlohmann::json& j, MvtParams& p) {
  j.at("nu").get_to(p.nu);
  p.mu = vector_from_json(j.at("mu"));
  p.sigma = matrix_from_json(j.at("sigma"));
}

void to_json(nlohmann::json& j, const TCopulaParams& p) {
  nlohmann::json margins = nlohmann::json::array();
  for (const auto& m : p.margins) margins.push_back(m.sorted_sample());
  j = nlohmann::json{{"nu", p.nu},
                     {"corr", json_io::to_json(p.corr)},
                     {"bandwidth", p.bandwidth},
                     {"margins", std::move(margins)}};
}

void from_json(const nlohmann::json& j, TCopulaParams& p) {
  j.at("nu").get_to(p.nu);
  p.corr = matrix_from_json(j.at("corr"));
  j.at("bandwidth").get_to(p.bandwidth);
  p.margins.clear();
  for (const auto& m : j.at("margins")) {
    const auto sample = m.get<std::vector<double>>();
    p.margins.emplace_back(sample, p.bandwidth);
  }
}

void to_json(nlohmann::json& j, const MvgParams& p) {
  j = nlohmann::json{{"mu0", json_io::to_json(p.mu0)},         {"theta", json_io::to_json(p.theta)},
                     {"sigma_g", json_io::to_json(p.sigma_g)}, {"nu_common", p.nu_common},
                     {"nu_idio", json_io::to_json(p.nu_idio)}, {"d_scale", json_io::to_json(p.d_scale)},
                     {"mix", p.mix}};
}

void from_json(const nlohmann::json& j, MvgParams& p) {
  p.mu0 = vector_from_json(j.at("mu0"));
  p.theta = vector_from_json(j.at("theta"));
  p.sigma_g = vector_from_json(j.at("sigma_g"));
  j.at("nu_common").get_to(p.nu_common);
  p.nu_idio = vector_from_json(j.at("nu_idio"));
  p.d_scale = vector_from_json(j.at("d_scale"));
  j.at("mix").get_to(p.mix);
}

void to_json(nlohmann::json& j, const NigParams& p) {
  j = nlohmann::json{{"alpha", p.alpha}, {"beta", p.beta}, {"delta", p.delta}, {"mu", p.mu}};
}

void from_json(const nlohmann::json& j, NigParams& p) {
  j.at("alpha").get_to(p.alpha);
  j.at("beta").get_to(p.beta);
  j.at("delta").get_to(p.delta);
  j.at("mu").get_to(p.mu);
}

}  // namespace cryptorisk::dist
