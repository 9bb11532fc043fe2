// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>

#include "cryptorisk/dist/mvg.hpp"
#include "cryptorisk/dist/mvt.hpp"
#include "cryptorisk/dist/tcopula.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/parallel.hpp"
#include "cryptorisk/rng.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::backtest {

std::string to_string(Zone zone) {
  switch (zone) {
    case Zone::green: return "green";
    case Zone::yellow: return "yellow";
    case Zone::red: return "red";
  }
  return "?";
}

std::string to_string(Verdict verdict) { return verdict == Verdict::accept ? "accept" : "reject"; }

Zone traffic_light(std::size_t observations, double alpha, std::size_t failures) {
  require(failures <= observations, ErrorKind::domain, "more failures than observations");
  if (observations == 0) return Zone::green;
  const boost::math::binomial_distribution<double> bin(static_cast<double>(observations), alpha);
  const double p = boost::math::cdf(bin, static_cast<double>(failures));
  if (p <= kGreenBound) return Zone::green;
  if (p <= kYellowBound) return Zone::yellow;
  return Zone::red;
}

BinomialResult binomial_test(std::size_t observations, double alpha, std::size_t failures,
                             double significance) {
  require(failures <= observations, ErrorKind::domain, "more failures than observations");
  BinomialResult r;
  if (failures == 0 || observations == 0) return r;
  const boost::math::binomial_distribution<double> bin(static_cast<double>(observations), alpha);
  r.p_value = boost::math::cdf(boost::math::complement(bin, static_cast<double>(failures - 1)));
  r.verdict = r.p_value < significance ? Verdict::reject : Verdict::accept;
  return r;
}

ModelSpec ModelSpec::multivariate_t(double nu) {
  return {JointModel::mvt, nu, 0.0, garch::InnovationFamily::gaussian};
}
ModelSpec ModelSpec::t_copula(double bandwidth, double nu) {
  return {JointModel::tcopula, nu, bandwidth, garch::InnovationFamily::student_t};
}
ModelSpec ModelSpec::variance_gamma() {
  return {JointModel::mvg, 0.0, 0.0, garch::InnovationFamily::gaussian};
}
ModelSpec ModelSpec::independent_gaussian() {
  return {JointModel::independent, 0.0, 0.0, garch::InnovationFamily::gaussian};
}

std::string ModelSpec::label() const {
  switch (kind) {
    case JointModel::mvt: return fmt::format("mvt_nu{:g}", nu);
    case JointModel::tcopula: return fmt::format("tcopula_ws{:g}", bandwidth);
    case JointModel::mvg: return "mvg";
    case JointModel::independent: return "independent";
  }
  return "?";
}

ModelSpec ModelSpec::parse(const std::string& label) {
  auto number_after = [&](std::size_t prefix) {
    const std::string tail = label.substr(prefix);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size()) fail(ErrorKind::config, fmt::format("bad model label '{}'", label));
    return v;
  };
  if (label == "mvt") return multivariate_t(5.0);
  if (label.rfind("mvt_nu", 0) == 0) return multivariate_t(number_after(6));
  if (label == "tcopula") return t_copula(0.0);
  if (label.rfind("tcopula_ws", 0) == 0) return t_copula(number_after(10));
  if (label == "mvg") return variance_gamma();
  if (label == "independent") return independent_gaussian();
  fail(ErrorKind::config, fmt::format("unknown model '{}'", label));
}

Eigen::MatrixXd simulate_joint_innovations(const ModelSpec& model, const Eigen::MatrixXd& innovations,
                                           std::size_t n, std::uint64_t seed) {
  switch (model.kind) {
    case JointModel::mvt:
      return dist::sample_mvt(dist::fit_mvt(innovations, model.nu), n, seed);
    case JointModel::tcopula:
      return dist::sample_tcopula(dist::fit_tcopula(innovations, model.bandwidth, model.nu), n, seed);
    case JointModel::mvg:
      return dist::sample_mvg(dist::fit_mvg(innovations), n, seed);
    case JointModel::independent: {
      Eigen::MatrixXd out(static_cast<Eigen::Index>(n), innovations.cols());
      for (std::size_t s = 0; s < n; ++s) {
        rng::Engine engine = rng::substream(seed, s);
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < out.cols(); ++i) out(static_cast<Eigen::Index>(s), i) = normal(engine);
      }
      return out;
    }
  }
  fail(ErrorKind::config, "unknown joint model");
}

BacktestReport summarize(std::string label, std::size_t observations, std::size_t failures_var,
                         std::size_t failures_cvar, std::size_t missing, double alpha) {
  BacktestReport r;
  r.label = std::move(label);
  r.observations = observations;
  r.failures_var = failures_var;
  r.failures_cvar = failures_cvar;
  r.missing = missing;
  const double n = static_cast<double>(observations);
  r.expected_var = alpha * n;
  r.expected_cvar = 0.5 * alpha * n;
  r.ratio_var = r.expected_var > 0.0 ? static_cast<double>(failures_var) / r.expected_var : 0.0;
  r.ratio_cvar = r.expected_cvar > 0.0 ? static_cast<double>(failures_cvar) / r.expected_cvar : 0.0;
  r.traffic_light_var = traffic_light(observations, alpha, failures_var);
  r.traffic_light_cvar = traffic_light(observations, 0.5 * alpha, failures_cvar);
  r.binomial_var = binomial_test(observations, alpha, failures_var);
  r.binomial_cvar = binomial_test(observations, 0.5 * alpha, failures_cvar);
  return r;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_config(const marketdata::ReturnPanel& panel, const BacktestConfig& config) {
  require(config.window >= 100, ErrorKind::config, "backtest window must be at least 100 days");
  require(config.scenarios >= 1000, ErrorKind::config, "backtest needs at least 1000 scenarios");
  require(config.refit_stride >= 1, ErrorKind::config, "refit stride must be at least 1");
  require(panel.rows() >= config.window + 1, ErrorKind::insufficient_data,
          "panel is shorter than the backtest window plus one day");
  require(panel.cols() >= 1, ErrorKind::insufficient_data, "panel has no assets");
  require(config.weights.size() == 0 || config.weights.size() == static_cast<Eigen::Index>(panel.cols()),
          ErrorKind::shape, "weights do not match the panel");
}

Eigen::VectorXd resolve_weights(const marketdata::ReturnPanel& panel, const BacktestConfig& config) {
  if (config.weights.size() > 0) return config.weights;
  const auto d = static_cast<Eigen::Index>(panel.cols());
  return Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
}

std::size_t day_count(const marketdata::ReturnPanel& panel, const BacktestConfig& config) {
  const std::size_t available = panel.rows() - config.window;
  return config.max_days > 0 ? std::min(available, config.max_days) : available;
}

TraceRow make_row(marketdata::Date date, double realized, const RiskForecast& f) {
  TraceRow row;
  row.date = date;
  row.realized = realized;
  row.neg_var = -f.var;
  row.neg_cvar = -f.cvar;
  row.var_failure = realized < -f.var;
  row.cvar_failure = realized < -f.cvar;
  return row;
}

TraceRow missing_row(marketdata::Date date, double realized) {
  TraceRow row;
  row.date = date;
  row.realized = realized;
  row.neg_var = kNaN;
  row.neg_cvar = kNaN;
  row.missing = true;
  return row;
}

BacktestReport aggregate(std::string label, std::vector<TraceRow> trace, double alpha) {
  std::size_t obs = 0, fv = 0, fc = 0, missing = 0;
  for (const auto& row : trace) {
    if (row.missing) {
      ++missing;
      continue;
    }
    ++obs;
    fv += row.var_failure ? 1 : 0;
    fc += row.cvar_failure ? 1 : 0;
  }
  BacktestReport r = summarize(std::move(label), obs, fv, fc, missing, alpha);
  r.trace = std::move(trace);
  return r;
}

Eigen::MatrixXd window_returns(const marketdata::ReturnPanel& panel, std::size_t end, std::size_t window) {
  return panel.returns.middleRows(static_cast<Eigen::Index>(end - window), static_cast<Eigen::Index>(window));
}

std::vector<garch::GarchState> fit_all(const Eigen::MatrixXd& x, garch::InnovationFamily family,
                                       const garch::FitOptions& options) {
  std::vector<garch::GarchState> states;
  states.reserve(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    states.push_back(garch::fit_arma_garch(stats::column(x, j), family, options));
  }
  return states;
}

std::vector<garch::GarchState> refilter(const std::vector<garch::GarchState>& fitted, const Eigen::MatrixXd& x) {
  std::vector<garch::GarchState> states;
  states.reserve(fitted.size());
  for (std::size_t j = 0; j < fitted.size(); ++j) {
    states.push_back(garch::filter_innovations(fitted[j].params, stats::column(x, static_cast<Eigen::Index>(j))));
  }
  return states;
}

RiskForecast forecast_with(const ModelSpec& model, const std::vector<garch::GarchState>& states,
                           const Eigen::VectorXd& weights, std::size_t n, risk::RiskLevel level,
                           std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(states.size());
  const auto t = static_cast<Eigen::Index>(states.front().size());
  Eigen::MatrixXd innovations(t, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& eps = states[static_cast<std::size_t>(j)].innovations;
    innovations.col(j) = Eigen::Map<const Eigen::VectorXd>(eps.data(), t);
  }
  const Eigen::MatrixXd eps = simulate_joint_innovations(model, innovations, n, seed);
  Eigen::MatrixXd scenarios(eps.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j) {
    scenarios.col(j) = garch::simulate_paths(states[static_cast<std::size_t>(j)], eps.col(j));
  }
  const Eigen::VectorXd outcomes = risk::portfolio_outcomes(scenarios, weights);
  const std::span<const double> view(outcomes.data(), static_cast<std::size_t>(outcomes.size()));
  return {risk::var(view, level), risk::cvar(view, level)};
}

std::uint64_t roll_seed(std::uint64_t seed, const std::string& label, std::size_t day) {
  return rng::derive(seed, rng::hash_name(label), day);
}

}  // namespace

std::vector<BacktestReport> run_backtest_grid(const marketdata::ReturnPanel& panel,
                                              const BacktestConfig& config,
                                              std::span<const ModelSpec> models) {
  check_config(panel, config);
  require(!models.empty(), ErrorKind::config, "empty model grid");
  const Eigen::VectorXd weights = resolve_weights(panel, config);
  const std::size_t days = day_count(panel, config);
  const std::size_t stride = config.refit_stride;
  const std::size_t blocks = (days + stride - 1) / stride;

  std::vector<std::vector<TraceRow>> traces(models.size(), std::vector<TraceRow>(days));
  std::vector<std::string> labels;
  for (const auto& m : models) labels.push_back(m.label());

  parallel_for(blocks, config.threads, [&](std::size_t block) {
    const std::size_t first = block * stride;
    const std::size_t last = std::min(days, first + stride);
    const std::size_t anchor = config.window + first;

    // Per-family GARCH fits at the block anchor; nullopt marks a failed fit.
    std::optional<std::vector<garch::GarchState>> fits[2];
    bool attempted[2] = {false, false};
    auto fitted_for = [&](garch::InnovationFamily family) -> std::optional<std::vector<garch::GarchState>>& {
      const int k = family == garch::InnovationFamily::gaussian ? 0 : 1;
      if (!attempted[k]) {
        attempted[k] = true;
        try {
          fits[k] = fit_all(window_returns(panel, anchor, config.window), family, config.garch_options);
        } catch (const Error&) {
          fits[k].reset();
        }
      }
      return fits[k];
    };

    for (std::size_t day = first; day < last; ++day) {
      const std::size_t row = config.window + day;
      const double realized = panel.returns.row(static_cast<Eigen::Index>(row)).dot(weights);
      const marketdata::Date date = panel.dates[row];
      const Eigen::MatrixXd x = window_returns(panel, row, config.window);
      std::optional<std::vector<garch::GarchState>> states[2];
      for (std::size_t m = 0; m < models.size(); ++m) {
        const auto& fitted = fitted_for(models[m].family);
        if (!fitted) {
          traces[m][day] = missing_row(date, realized);
          continue;
        }
        try {
          const int k = models[m].family == garch::InnovationFamily::gaussian ? 0 : 1;
          if (!states[k]) states[k] = row == anchor ? *fitted : refilter(*fitted, x);
          const RiskForecast f = forecast_with(models[m], *states[k], weights, config.scenarios,
                                               config.level, roll_seed(config.seed, labels[m], day));
          traces[m][day] = make_row(date, realized, f);
        } catch (const Error&) {
          traces[m][day] = missing_row(date, realized);
        }
      }
    }
  });

  std::vector<BacktestReport> reports;
  for (std::size_t m = 0; m < models.size(); ++m) {
    reports.push_back(aggregate(labels[m], std::move(traces[m]), config.level.alpha()));
  }
  return reports;
}

BacktestReport run_backtest(const marketdata::ReturnPanel& panel, const BacktestConfig& config,
                            const Forecaster& forecaster) {
  if (!forecaster) {
    const ModelSpec models[] = {config.model};
    return std::move(run_backtest_grid(panel, config, models).front());
  }
  check_config(panel, config);
  const Eigen::VectorXd weights = resolve_weights(panel, config);
  const std::size_t days = day_count(panel, config);
  const std::string label = "custom";
  std::vector<TraceRow> trace(days);
  parallel_for(days, config.threads, [&](std::size_t day) {
    const std::size_t row = config.window + day;
    const double realized = panel.returns.row(static_cast<Eigen::Index>(row)).dot(weights);
    try {
      const RiskForecast f = forecaster(panel.slice(row - config.window, row), weights,
                                        roll_seed(config.seed, label, day));
      trace[day] = make_row(panel.dates[row], realized, f);
    } catch (const Error&) {
      trace[day] = missing_row(panel.dates[row], realized);
    }
  });
  return aggregate(label, std::move(trace), config.level.alpha());
}

std::string format_expected(double value) {
  std::string s = fmt::format("{:.4f}", value);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string format_ratio(double value) { return fmt::format("{:.2f}", value); }

namespace {

std::ofstream open_output(const std::filesystem::path& path, std::span<const std::string> header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  for (const auto& line : header_comment) out << "# " << line << '\n';
  return out;
}

}  // namespace

void write_report_csv(std::span<const BacktestReport> reports, const std::filesystem::path& path,
                      std::span<const std::string> header_comment) {
  std::ofstream out = open_output(path, header_comment);
  out << "measure,variable";
  for (const auto& r : reports) out << ',' << r.label;
  out << '\n';
  auto row = [&](const char* measure, const char* variable, auto&& cell) {
    out << measure << ',' << variable;
    for (const auto& r : reports) out << ',' << cell(r);
    out << '\n';
  };
  for (int k = 0; k < 2; ++k) {
    const bool is_var = k == 0;
    const char* m = is_var ? "VaR" : "CVaR";
    row(m, "Observations", [](const BacktestReport& r) { return std::to_string(r.observations); });
    row(m, "Failures", [&](const BacktestReport& r) {
      return std::to_string(is_var ? r.failures_var : r.failures_cvar);
    });
    row(m, "Expected", [&](const BacktestReport& r) {
      return format_expected(is_var ? r.expected_var : r.expected_cvar);
    });
    row(m, "Ratio", [&](const BacktestReport& r) { return format_ratio(is_var ? r.ratio_var : r.ratio_cvar); });
    row(m, "Missing", [](const BacktestReport& r) { return std::to_string(r.missing); });
    row(m, "Traffic Light", [&](const BacktestReport& r) {
      return to_string(is_var ? r.traffic_light_var : r.traffic_light_cvar);
    });
    row(m, "Binomial Test", [&](const BacktestReport& r) {
      return to_string(is_var ? r.binomial_var.verdict : r.binomial_cvar.verdict);
    });
  }
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

void write_trace_csv(const BacktestReport& report, const std::filesystem::path& path,
                     std::span<const std::string> header_comment) {
  std::ofstream out = open_output(path, header_comment);
  out << "date,realized,neg_var,neg_cvar,var_failure,cvar_failure,missing\n";
  for (const auto& row : report.trace) {
    out << marketdata::format_date(row.date) << ',' << fmt::format("{:.17g}", row.realized) << ',';
    if (row.missing) {
      out << ",,0,0,1\n";
      continue;
    }
    out << fmt::format("{:.17g},{:.17g},{:d},{:d},0\n", row.neg_var, row.neg_cvar,
                       static_cast<int>(row.var_failure), static_cast<int>(row.cvar_failure));
  }
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

}  // namespace cryptorisk::backtest
