// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/cli/synth.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "cryptorisk/dist/mvt.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/rng.hpp"

namespace cryptorisk::cli {

namespace {

using marketdata::Date;

bool is_weekday(Date d) {
  const std::chrono::weekday wd{d};
  return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

// One GARCH(1,1) step on a unit-variance shock; returns the log return.
struct GarchPath {
  double alpha0, alpha1 = 0.08, beta1 = 0.9, drift;
  double variance;
  double step(double eps) {
    const double a = std::sqrt(variance) * eps;
    variance = alpha0 + alpha1 * a * a + beta1 * variance;
    return drift + a;
  }
};

GarchPath make_path(const SynthAsset& asset) {
  GarchPath g;
  const double v = asset.daily_vol * asset.daily_vol;
  g.alpha0 = v * (1.0 - g.alpha1 - g.beta1);
  g.drift = asset.drift;
  g.variance = v;
  return g;
}

void write_series(const marketdata::PriceSeries& s, const std::filesystem::path& path, const std::string& column,
                  const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  out << "# " << header << '\n';
  out << "date," << column << '\n';
  for (const auto& o : s.observations) out << marketdata::format_date(o.date) << ',' << fmt::format("{:.10g}", o.close) << '\n';
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

}  // namespace

std::vector<marketdata::PriceSeries> synth_prices(const SynthOptions& options) {
  const Date start = marketdata::parse_date(options.start);
  const Date end = marketdata::parse_date(options.end);
  require(start < end, ErrorKind::config, "synthetic range is empty");
  const auto days = static_cast<std::size_t>((end - start).count()) + 1;
  const auto d = static_cast<Eigen::Index>(options.cryptos.size());

  dist::MvtParams joint;
  joint.nu = options.nu;
  joint.mu = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(d, d, options.correlation);
  corr.diagonal().setOnes();
  joint.sigma = corr * ((options.nu - 2.0) / options.nu);
  const Eigen::MatrixXd eps = dist::sample_mvt(joint, days - 1, rng::derive(options.seed, rng::hash_name("cryptos")));

  std::vector<marketdata::PriceSeries> out;
  for (Eigen::Index j = 0; j < d; ++j) {
    const SynthAsset& asset = options.cryptos[static_cast<std::size_t>(j)];
    GarchPath path = make_path(asset);
    marketdata::PriceSeries s{asset.name, {}};
    double log_price = std::log(asset.initial_price);
    s.observations.push_back({start, asset.initial_price});
    for (std::size_t t = 1; t < days; ++t) {
      log_price += path.step(eps(static_cast<Eigen::Index>(t - 1), j));
      s.observations.push_back({start + std::chrono::days(t), std::exp(log_price)});
    }
    out.push_back(std::move(s));
  }

  rng::Engine engine = rng::substream(options.seed, rng::hash_name(options.benchmark.name));
  GarchPath path = make_path(options.benchmark);
  marketdata::PriceSeries bench{options.benchmark.name, {}};
  double log_price = std::log(options.benchmark.initial_price);
  bool first = true;
  for (std::size_t t = 0; t < days; ++t) {
    const Date day = start + std::chrono::days(t);
    if (!is_weekday(day)) continue;
    if (!first) log_price += path.step(std::normal_distribution<double>()(engine));
    first = false;
    bench.observations.push_back({day, std::exp(log_price)});
  }
  out.push_back(std::move(bench));
  return out;
}

marketdata::PriceSeries synth_yields(const SynthOptions& options, const std::string& name, double level) {
  const Date start = marketdata::parse_date(options.start);
  const Date end = marketdata::parse_date(options.end);
  rng::Engine engine = rng::substream(options.seed, rng::hash_name(name));
  std::normal_distribution<double> step(0.0, 0.03);
  marketdata::PriceSeries s{name, {}};
  double y = level;
  for (Date day = start; day <= end; day += std::chrono::days(1)) {
    if (!is_weekday(day)) continue;
    y = std::max(0.05, y + 0.01 * (level - y) + step(engine));
    s.observations.push_back({day, std::round(y * 100.0) / 100.0});
  }
  return s;
}

std::vector<std::filesystem::path> write_sample_data(const SynthOptions& options, const std::filesystem::path& dir,
                                                     const std::string& header) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& s : synth_prices(options)) {
    written.push_back(dir / (s.asset_id + ".csv"));
    write_series(s, written.back(), "close", header);
  }
  written.push_back(dir / "treasury_10y.csv");
  write_series(synth_yields(options, "treasury_10y", 2.6), written.back(), "yield", header);
  written.push_back(dir / "treasury_6m.csv");
  write_series(synth_yields(options, "treasury_6m", 2.0), written.back(), "yield", header);
  return written;
}

}  // namespace cryptorisk::cli
