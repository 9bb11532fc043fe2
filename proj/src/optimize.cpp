// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "cryptorisk/dist/mvt.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/lp.hpp"
#include "cryptorisk/parallel.hpp"
#include "cryptorisk/qp.hpp"
#include "cryptorisk/rng.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::optimize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clamps into the box and moves the budget error onto the asset with the most room.
Eigen::VectorXd repair(Eigen::VectorXd w, Bounds bounds) {
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::clamp(w[i], bounds.lower, bounds.upper) + 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    const double gap = 1.0 - w.sum();
    if (gap == 0.0) break;
    Eigen::Index pick = 0;
    double room = -1.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double r = gap > 0.0 ? bounds.upper - w[i] : w[i] - bounds.lower;
      if (r > room) {
        room = r;
        pick = i;
      }
    }
    w[pick] += gap > 0.0 ? std::min(gap, room) : -std::min(-gap, room);
  }
  return w;
}

Eigen::VectorXd feasible_start(const Eigen::VectorXd& mean, Bounds bounds, std::optional<double> target) {
  const Eigen::Index d = mean.size();
  if (!target) return Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  lp::LinearProgram prog;
  prog.c = Eigen::VectorXd::Zero(d + 1);
  prog.a = Eigen::MatrixXd::Zero(2, d + 1);
  prog.a.row(0).head(d).setOnes();
  prog.a.row(1).head(d) = mean.transpose();
  prog.a(1, d) = -1.0;
  prog.b = Eigen::Vector2d(1.0, *target);
  prog.lower = Eigen::VectorXd::Constant(d + 1, bounds.lower);
  prog.upper = Eigen::VectorXd::Constant(d + 1, bounds.upper);
  prog.lower[d] = 0.0;
  prog.upper[d] = kInf;
  return lp::solve_lp(prog).x.head(d);
}

}  // namespace

std::string to_string(Objective objective) {
  return objective == Objective::variance ? "min_variance" : "min_cvar";
}

void check_bounds(Bounds bounds, Eigen::Index d) {
  require(d >= 1, ErrorKind::shape, "no assets to allocate");
  const double n = static_cast<double>(d);
  if (!(bounds.lower <= bounds.upper) || bounds.lower * n > 1.0 + 1e-12 || bounds.upper * n < 1.0 - 1e-12) {
    fail(ErrorKind::infeasible,
         fmt::format("weight bounds [{}, {}] cannot sum to one over {} assets", bounds.lower, bounds.upper, d));
  }
}

FrontierPoint min_variance_weights(const Eigen::MatrixXd& scenarios, Bounds bounds,
                                   std::optional<double> target_return) {
  const Eigen::Index d = scenarios.cols();
  check_bounds(bounds, d);
  require(scenarios.rows() >= 2, ErrorKind::insufficient_data, "need at least two scenarios");
  const Eigen::MatrixXd cov = stats::covariance(scenarios);
  const Eigen::VectorXd mean = stats::column_means(scenarios);

  qp::QuadraticProgram prog;
  prog.q = cov;
  prog.c = Eigen::VectorXd::Zero(d);
  prog.a_eq = Eigen::MatrixXd::Ones(1, d);
  prog.b_eq = Eigen::VectorXd::Ones(1);
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::isfinite(bounds.lower)) {
      rows.push_back(Eigen::RowVectorXd::Unit(d, i));
      rhs.push_back(bounds.lower);
    }
    if (std::isfinite(bounds.upper)) {
      rows.push_back(-Eigen::RowVectorXd::Unit(d, i));
      rhs.push_back(-bounds.upper);
    }
  }
  if (target_return) {
    rows.push_back(mean.transpose());
    rhs.push_back(*target_return);
  }
  prog.a_in.resize(static_cast<Eigen::Index>(rows.size()), d);
  prog.b_in.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    prog.a_in.row(static_cast<Eigen::Index>(k)) = rows[k];
    prog.b_in[static_cast<Eigen::Index>(k)] = rhs[k];
  }

  const qp::QpResult sol = qp::solve_qp(prog, feasible_start(mean, bounds, target_return));
  FrontierPoint p;
  p.weights = repair(sol.x, bounds);
  p.expected_return = mean.dot(p.weights);
  p.risk = std::sqrt(std::max(0.0, p.weights.dot(cov * p.weights)));
  p.residual = sol.kkt_residual;
  return p;
}

FrontierPoint min_cvar_weights(const Eigen::MatrixXd& scenarios, risk::RiskLevel level, Bounds bounds,
                               std::optional<double> target_return) {
  const Eigen::Index n = scenarios.rows();
  const Eigen::Index d = scenarios.cols();
  check_bounds(bounds, d);
  const std::size_t tail = risk::tail_count(static_cast<std::size_t>(n), level);
  require(tail >= 1, ErrorKind::insufficient_data, "CVaR tail is empty (alpha * N < 1)");
  const Eigen::VectorXd mean = stats::column_means(scenarios);

  // Dual of the auxiliary program: max over tail distributions p (0 <= p_s <=
  // 1/m, sum p = 1) of the worst-case box-constrained allocation. Columns:
  // p (n), lambda, a (d, upper bound multipliers), b (d, lower bound
  // multipliers), eta (target multiplier).
  const Eigen::Index has_target = target_return ? 1 : 0;
  const Eigen::Index cols = n + 1 + 2 * d + has_target;
  lp::LinearProgram prog;
  prog.a = Eigen::MatrixXd::Zero(d + 1, cols);
  prog.a.topLeftCorner(d, n) = scenarios.transpose();
  prog.a.row(d).head(n).setOnes();
  prog.a.col(n).head(d).setOnes();
  for (Eigen::Index i = 0; i < d; ++i) {
    prog.a(i, n + 1 + i) = -1.0;
    prog.a(i, n + 1 + d + i) = 1.0;
  }
  if (target_return) prog.a.col(cols - 1).head(d) = mean;
  prog.b = Eigen::VectorXd::Zero(d + 1);
  prog.b[d] = 1.0;

  prog.c = Eigen::VectorXd::Zero(cols);
  prog.lower = Eigen::VectorXd::Zero(cols);
  prog.upper = Eigen::VectorXd::Constant(cols, kInf);
  prog.upper.head(n).setConstant(1.0 / static_cast<double>(tail));
  prog.c[n] = -1.0;
  prog.lower[n] = -kInf;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::isfinite(bounds.upper)) {
      prog.c[n + 1 + i] = bounds.upper;
    } else {
      prog.upper[n + 1 + i] = 0.0;
    }
    if (std::isfinite(bounds.lower)) {
      prog.c[n + 1 + d + i] = -bounds.lower;
    } else {
      prog.upper[n + 1 + d + i] = 0.0;
    }
  }
  if (target_return) prog.c[cols - 1] = -*target_return;

  // Warm start: the tail of the equal-weight portfolio sits at the cap.
  lp::LpOptions options;
  options.start_at_upper = Eigen::VectorX<bool>::Constant(cols, false);
  {
    const Eigen::VectorXd equal = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
    const Eigen::VectorXd outcomes = risk::portfolio_outcomes(scenarios, equal);
    for (std::size_t s : risk::tail_indices({outcomes.data(), static_cast<std::size_t>(n)}, level)) {
      options.start_at_upper[static_cast<Eigen::Index>(s)] = true;
    }
  }

  const lp::LpResult sol = lp::solve_lp(prog, options);
  FrontierPoint p;
  p.weights = repair(-sol.duals.head(d), bounds);
  const Eigen::VectorXd outcomes = risk::portfolio_outcomes(scenarios, p.weights);
  p.expected_return = outcomes.mean();
  p.risk = risk::cvar({outcomes.data(), static_cast<std::size_t>(n)}, level);
  p.residual = std::abs(-sol.objective - p.risk);
  return p;
}

double max_attainable_return(const Eigen::VectorXd& mean, Bounds bounds) {
  const Eigen::Index d = mean.size();
  check_bounds(bounds, d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return mean[a] > mean[b]; });
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d, bounds.lower);
  double budget = 1.0 - bounds.lower * static_cast<double>(d);
  for (Eigen::Index i : order) {
    const double add = std::min(budget, bounds.upper - bounds.lower);
    w[i] += add;
    budget -= add;
  }
  return mean.dot(w);
}

std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& scenarios, Objective objective,
                                              Bounds bounds, std::size_t n_points, risk::RiskLevel level) {
  auto solve = [&](std::optional<double> target) {
    return objective == Objective::variance ? min_variance_weights(scenarios, bounds, target)
                                            : min_cvar_weights(scenarios, level, bounds, target);
  };
  std::vector<FrontierPoint> out;
  out.push_back(solve(std::nullopt));
  const double lo = out.front().expected_return;
  const double hi = max_attainable_return(stats::column_means(scenarios), bounds);
  const double span = hi - lo;
  if (n_points <= 1 || span <= 1e-12 * (1.0 + std::abs(hi))) return out;
  for (std::size_t k = 1; k < n_points; ++k) {
    double target = lo + span * static_cast<double>(k) / static_cast<double>(n_points - 1);
    if (k + 1 == n_points) target = hi - 1e-12 * (1.0 + std::abs(hi));
    out.push_back(solve(target));
  }
  return out;
}

std::vector<double> cumulative_returns(std::span<const double> log_returns) {
  std::vector<double> out(log_returns.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < log_returns.size(); ++t) {
    sum += log_returns[t];
    out[t] = std::expm1(sum);
  }
  return out;
}

namespace {

struct DayResult {
  std::optional<Eigen::VectorXd> weights[2];
  std::string error[2];
};

DayResult solve_day(const marketdata::ReturnPanel& panel, const RollingConfig& config, std::size_t row,
                    std::size_t day, bool want_variance, bool want_cvar) {
  DayResult out;
  const Eigen::Index d = static_cast<Eigen::Index>(panel.cols());
  Eigen::MatrixXd scenarios;
  try {
    const Eigen::MatrixXd x = panel.returns.middleRows(static_cast<Eigen::Index>(row - config.window),
                                                       static_cast<Eigen::Index>(config.window));
    std::vector<garch::GarchState> states;
    Eigen::MatrixXd innovations(x.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) {
      states.push_back(garch::fit_arma_garch(stats::column(x, j), garch::InnovationFamily::gaussian,
                                             config.garch_options));
      innovations.col(j) = Eigen::Map<const Eigen::VectorXd>(states.back().innovations.data(), x.rows());
    }
    const auto seed = rng::derive(config.seed, rng::hash_name("rolling_optimize"), day);
    const Eigen::MatrixXd eps = dist::sample_mvt(dist::fit_mvt(innovations, config.nu), config.scenarios, seed);
    scenarios.resize(eps.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) {
      scenarios.col(j) = garch::simulate_paths(states[static_cast<std::size_t>(j)], eps.col(j));
    }
  } catch (const Error& e) {
    out.error[0] = out.error[1] = e.what();
    return out;
  }
  if (want_variance) {
    try {
      out.weights[0] = min_variance_weights(scenarios, config.bounds).weights;
    } catch (const Error& e) {
      out.error[0] = e.what();
    }
  }
  if (want_cvar) {
    try {
      const Eigen::Index rows = config.subsample > 0
                                    ? std::min<Eigen::Index>(scenarios.rows(), static_cast<Eigen::Index>(config.subsample))
                                    : scenarios.rows();
      out.weights[1] = min_cvar_weights(scenarios.topRows(rows), config.level, config.bounds).weights;
    } catch (const Error& e) {
      out.error[1] = e.what();
    }
  }
  return out;
}

PortfolioTrack assemble(const marketdata::ReturnPanel& panel, const RollingConfig& config,
                        const std::vector<DayResult>& days, int slot, const std::string& name,
                        std::vector<std::string>& log) {
  const Eigen::Index d = static_cast<Eigen::Index>(panel.cols());
  PortfolioTrack track;
  track.name = name;
  track.assets = panel.assets;
  track.weights.resize(static_cast<Eigen::Index>(days.size()), d);
  Eigen::VectorXd previous = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  for (std::size_t day = 0; day < days.size(); ++day) {
    const std::size_t row = config.window + day;
    const auto& got = days[day].weights[slot];
    if (got) {
      previous = *got;
    } else {
      log.push_back(fmt::format("{} {}: carried weights forward ({})", name,
                                marketdata::format_date(panel.dates[row]), days[day].error[slot]));
    }
    track.dates.push_back(panel.dates[row]);
    track.weights.row(static_cast<Eigen::Index>(day)) = previous.transpose();
    track.returns.push_back(panel.returns.row(static_cast<Eigen::Index>(row)).dot(previous));
  }
  track.cumulative = cumulative_returns(track.returns);
  return track;
}

std::vector<DayResult> run_days(const marketdata::ReturnPanel& panel, const RollingConfig& config,
                                bool want_variance, bool want_cvar) {
  require(panel.cols() >= 1, ErrorKind::insufficient_data, "panel has no assets");
  require(config.window >= 100, ErrorKind::config, "rolling window must be at least 100 days");
  require(panel.rows() >= config.window + 1, ErrorKind::insufficient_data,
          "panel is shorter than the rolling window plus one day");
  check_bounds(config.bounds, static_cast<Eigen::Index>(panel.cols()));
  std::size_t count = panel.rows() - config.window;
  if (config.max_days > 0) count = std::min(count, config.max_days);
  std::vector<DayResult> days(count);
  parallel_for(count, config.threads, [&](std::size_t day) {
    days[day] = solve_day(panel, config, config.window + day, day, want_variance, want_cvar);
  });
  return days;
}

}  // namespace

RollingResult rolling_optimize(const marketdata::ReturnPanel& panel, const RollingConfig& config) {
  const auto days = run_days(panel, config, true, true);
  RollingResult r;
  r.min_variance = assemble(panel, config, days, 0, to_string(Objective::variance), r.log);
  r.min_cvar = assemble(panel, config, days, 1, to_string(Objective::cvar), r.log);
  return r;
}

PortfolioTrack rolling_optimize(const marketdata::ReturnPanel& panel, Objective objective,
                                const RollingConfig& config) {
  const bool variance = objective == Objective::variance;
  const auto days = run_days(panel, config, variance, !variance);
  std::vector<std::string> log;
  return assemble(panel, config, days, variance ? 0 : 1, to_string(objective), log);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path, std::span<const std::string> header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  for (const auto& line : header_comment) out << "# " << line << '\n';
  return out;
}

}  // namespace

void write_track_csv(const PortfolioTrack& track, const std::filesystem::path& path,
                     std::span<const std::string> header_comment) {
  std::ofstream out = open_output(path, header_comment);
  out << "date";
  for (const auto& a : track.assets) out << ',' << a;
  out << ",portfolio_return,cumulative\n";
  for (std::size_t t = 0; t < track.dates.size(); ++t) {
    out << marketdata::format_date(track.dates[t]);
    for (Eigen::Index i = 0; i < track.weights.cols(); ++i) {
      out << fmt::format(",{:.17g}", track.weights(static_cast<Eigen::Index>(t), i) + 0.0);
    }
    out << fmt::format(",{:.17g},{:.17g}\n", track.returns[t], track.cumulative[t]);
  }
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

void write_horse_race_csv(std::span<const PortfolioTrack> tracks,
                          std::optional<std::span<const double>> benchmark_returns,
                          const std::string& benchmark_name, const std::filesystem::path& path,
                          std::span<const std::string> header_comment) {
  require(!tracks.empty(), ErrorKind::shape, "horse race needs at least one track");
  const std::size_t n = tracks.front().dates.size();
  for (const auto& t : tracks) require(t.dates.size() == n, ErrorKind::shape, "tracks differ in length");
  std::vector<double> bench;
  if (benchmark_returns) {
    require(benchmark_returns->size() == n, ErrorKind::shape, "benchmark length differs from the tracks");
    bench = cumulative_returns(*benchmark_returns);
  }
  std::ofstream out = open_output(path, header_comment);
  out << "date";
  for (const auto& t : tracks) out << ',' << t.name;
  if (benchmark_returns) out << ',' << benchmark_name;
  out << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    out << marketdata::format_date(tracks.front().dates[k]);
    for (const auto& t : tracks) out << fmt::format(",{:.17g}", t.cumulative[k]);
    if (benchmark_returns) out << fmt::format(",{:.17g}", bench[k]);
    out << '\n';
  }
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

}  // namespace cryptorisk::optimize
