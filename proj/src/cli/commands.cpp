// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "cryptorisk/backtest.hpp"
#include "cryptorisk/cli/synth.hpp"
#include "cryptorisk/dist/nig.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/garch.hpp"
#include "cryptorisk/json_io.hpp"
#include "cryptorisk/option.hpp"
#include "cryptorisk/risk.hpp"
#include "cryptorisk/rng.hpp"
#include "cryptorisk/stats.hpp"

namespace cryptorisk::cli {

namespace fs = std::filesystem;
using marketdata::Date;

namespace {

std::vector<std::string> header(const RunConfig& config, const std::string& command) {
  return {config.provenance(), "command=" + command};
}

std::ofstream open_csv(const fs::path& path, const std::vector<std::string>& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  for (const auto& line : comment) out << "# " << line << '\n';
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
}

fs::path prepare_out(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  return config.out_dir;
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

struct Loaded {
  std::vector<marketdata::PriceSeries> cryptos;
  std::optional<marketdata::PriceSeries> benchmark;
};

Loaded load_sources(const RunConfig& config) {
  Loaded l;
  for (const auto& a : config.assets) l.cryptos.push_back(marketdata::load_prices(config.resolve(a.path), {}, a.name));
  if (config.benchmark) {
    l.benchmark = marketdata::load_prices(config.resolve(config.benchmark->path), {}, config.benchmark->name);
  }
  return l;
}

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<double> column_vector(const Eigen::MatrixXd& m, Eigen::Index j) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, j);
  return v;
}

std::string track_file_name(const optimize::PortfolioTrack& track) {
  std::string name = track.name;
  std::replace(name.begin(), name.end(), ' ', '_');
  return name;
}

}  // namespace

StudyData load_study(const RunConfig& config) {
  config.validate();
  const Loaded l = load_sources(config);
  const marketdata::ReturnPanel all =
      marketdata::align_panel(l.cryptos, l.benchmark ? &*l.benchmark : nullptr);
  const Date start = marketdata::parse_date(config.out_of_sample_start);
  const Date end = marketdata::parse_date(config.end_date);
  const auto first = static_cast<std::size_t>(std::lower_bound(all.dates.begin(), all.dates.end(), start) -
                                              all.dates.begin());
  const auto last = static_cast<std::size_t>(std::upper_bound(all.dates.begin(), all.dates.end(), end) -
                                             all.dates.begin());
  if (first >= last) fail(ErrorKind::insufficient_data, "no returns in the out-of-sample range");
  if (first < config.window) {
    fail(ErrorKind::insufficient_data,
         fmt::format("{} in-sample rows before {} but the window needs {}", first, config.out_of_sample_start,
                     config.window));
  }
  const marketdata::ReturnPanel study = all.slice(first - config.window, last);

  StudyData s;
  s.window = config.window;
  s.cryptos = study.select(iota_n(config.assets.size()));
  if (config.benchmark) {
    s.benchmark_name = config.benchmark->name;
    s.benchmark = column_vector(study.returns, static_cast<Eigen::Index>(config.assets.size()));
  }
  return s;
}

std::vector<double> risk_free_on(const fs::path& yields, std::span<const Date> dates) {
  const marketdata::PriceSeries s = marketdata::load_prices(yields, {"date", "yield", ','}, "risk_free");
  require(s.size() > 0, ErrorKind::insufficient_data, "risk-free file has no rows");
  std::vector<double> out;
  out.reserve(dates.size());
  std::size_t k = 0;
  for (const Date d : dates) {
    while (k + 1 < s.size() && s.observations[k + 1].date <= d) ++k;
    out.push_back(risk::daily_rate_from_annual_percent(s.observations[k].close));
  }
  return out;
}

optimize::RollingConfig rolling_config(const RunConfig& config) {
  optimize::RollingConfig rc;
  rc.window = config.window;
  rc.scenarios = config.scenarios;
  rc.level = risk::RiskLevel(config.alpha);
  rc.bounds = {config.lower, config.upper};
  rc.nu = config.nu;
  rc.seed = config.seed;
  rc.threads = config.threads;
  rc.max_days = config.max_days;
  rc.subsample = config.subsample;
  return rc;
}

Written cmd_ingest(const RunConfig& config) {
  config.validate();
  const fs::path dir = prepare_out(config);
  const Loaded l = load_sources(config);
  const marketdata::ReturnPanel panel = marketdata::align_panel(l.cryptos, l.benchmark ? &*l.benchmark : nullptr);
  const auto head = header(config, "ingest");
  Written written{dir / "panel.csv", dir / "summary.csv"};
  marketdata::write_panel_csv(panel, written[0], head);

  std::vector<const marketdata::PriceSeries*> all;
  for (const auto& s : l.cryptos) all.push_back(&s);
  if (l.benchmark) all.push_back(&*l.benchmark);
  std::ofstream out = open_csv(written[1], head);
  out << "statistic";
  for (const auto* s : all) out << ',' << s->asset_id;
  out << '\n';
  std::vector<std::vector<double>> returns;
  std::vector<std::vector<double>> closes;
  for (const auto* s : all) {
    std::vector<double> r;
    for (const auto& x : marketdata::log_returns(*s)) r.push_back(x.value);
    returns.push_back(std::move(r));
    std::vector<double> c;
    for (const auto& o : s->observations) c.push_back(o.close);
    closes.push_back(std::move(c));
  }
  auto row = [&](const char* name, auto&& fn) {
    out << name;
    for (std::size_t i = 0; i < all.size(); ++i) out << ',' << num(fn(i));
    out << '\n';
  };
  row("observations", [&](std::size_t i) { return static_cast<double>(closes[i].size()); });
  row("mean_return", [&](std::size_t i) { return returns[i].empty() ? 0.0 : stats::mean(returns[i]); });
  row("std_return", [&](std::size_t i) { return returns[i].size() < 2 ? 0.0 : stats::stddev(returns[i]); });
  row("mdd", [&](std::size_t i) { return risk::mdd(closes[i]); });
  finish(out, written[1]);
  return written;
}

Written cmd_backtest(const RunConfig& config) {
  const StudyData study = load_study(config);
  const fs::path dir = prepare_out(config);
  backtest::BacktestConfig bc;
  bc.window = config.window;
  bc.scenarios = config.scenarios;
  bc.level = risk::RiskLevel(config.alpha);
  bc.refit_stride = config.refit_stride;
  bc.max_days = config.max_days;
  bc.seed = config.seed;
  bc.threads = config.threads;
  std::vector<backtest::ModelSpec> models;
  for (const auto& m : config.models) models.push_back(backtest::ModelSpec::parse(m));
  const auto reports = backtest::run_backtest_grid(study.cryptos, bc, models);

  const auto head = header(config, "backtest");
  Written written{dir / "backtest.csv"};
  backtest::write_report_csv(reports, written[0], head);
  for (const auto& r : reports) {
    written.push_back(dir / fmt::format("trace_{}.csv", r.label));
    backtest::write_trace_csv(r, written.back(), head);
  }
  return written;
}

Written cmd_optimize(const RunConfig& config) {
  const StudyData study = load_study(config);
  const fs::path dir = prepare_out(config);
  const optimize::RollingResult result = optimize::rolling_optimize(study.cryptos, rolling_config(config));
  const auto head = header(config, "optimize");
  Written written;
  for (const auto* track : {&result.min_cvar, &result.min_variance}) {
    written.push_back(dir / fmt::format("weights_{}.csv", track_file_name(*track)));
    optimize::write_track_csv(*track, written.back(), head);
  }
  const optimize::PortfolioTrack tracks[] = {result.min_cvar, result.min_variance};
  std::optional<std::span<const double>> bench;
  std::vector<double> bench_oos;
  if (!study.benchmark.empty()) {
    const auto n = result.min_cvar.returns.size();
    bench_oos.assign(study.benchmark.begin() + static_cast<std::ptrdiff_t>(study.window),
                     study.benchmark.begin() + static_cast<std::ptrdiff_t>(study.window + n));
    bench = std::span<const double>(bench_oos);
  }
  written.push_back(dir / "horse_race.csv");
  optimize::write_horse_race_csv(tracks, bench, study.benchmark_name, written.back(), head);
  written.push_back(dir / "optimize_log.txt");
  std::ofstream log = open_csv(written.back(), head);
  for (const auto& line : result.log) log << line << '\n';
  finish(log, written.back());
  return written;
}

Written cmd_riskbudget(const RunConfig& config) {
  const StudyData study = load_study(config);
  const fs::path dir = prepare_out(config);
  const auto d = static_cast<Eigen::Index>(study.cryptos.cols());
  const Eigen::VectorXd equal = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  const risk::RiskLevel level(config.alpha);
  const auto head = header(config, "riskbudget");

  auto contributions = [&](std::size_t begin, std::size_t end) {
    const Eigen::MatrixXd x = study.cryptos.returns.middleRows(static_cast<Eigen::Index>(begin),
                                                               static_cast<Eigen::Index>(end - begin));
    return std::pair{risk::vol_risk_contributions(equal, stats::covariance(x)),
                     risk::cvar_risk_contributions(equal, x, level)};
  };

  Written written{dir / "risk_budget.csv", dir / "rolling_rc_vol.csv", dir / "rolling_rc_cvar.csv"};
  {
    const auto [vol, cvar] = contributions(0, study.window);
    std::ofstream out = open_csv(written[0], head);
    out << "method";
    for (const auto& a : study.cryptos.assets) out << ',' << a;
    out << '\n';
    auto row = [&](const char* name, const Eigen::VectorXd& v, const char* format) {
      out << name;
      for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << fmt::format(fmt::runtime(format), v[i]);
      out << '\n';
    };
    row("RC_Vol", vol.per_asset, "{:.6f}");
    row("RC_Vol(%)", vol.per_asset_pct, "{:.4f}");
    row("RC_CVaR", cvar.per_asset, "{:.6f}");
    row("RC_CVaR(%)", cvar.per_asset_pct, "{:.4f}");
    finish(out, written[0]);
  }

  std::size_t days = study.cryptos.rows() - study.window;
  if (config.max_days > 0) days = std::min(days, config.max_days);
  std::ofstream vol_out = open_csv(written[1], head);
  std::ofstream cvar_out = open_csv(written[2], head);
  for (auto* out : {&vol_out, &cvar_out}) {
    *out << "date";
    for (const auto& a : study.cryptos.assets) *out << ',' << a;
    *out << ",total\n";
  }
  for (std::size_t k = 0; k < days; ++k) {
    const std::size_t row = study.window + k;
    const auto [vol, cvar] = contributions(row + 1 - study.window, row + 1);
    const std::string date = marketdata::format_date(study.cryptos.dates[row]);
    for (auto [out, rep] : {std::pair{&vol_out, &vol}, std::pair{&cvar_out, &cvar}}) {
      *out << date;
      for (Eigen::Index i = 0; i < d; ++i) *out << ',' << num(rep->per_asset[i]);
      *out << ',' << num(rep->total) << '\n';
    }
  }
  finish(vol_out, written[1]);
  finish(cvar_out, written[2]);
  return written;
}

Written cmd_ratios(const RunConfig& config) {
  const StudyData study = load_study(config);
  require(!study.benchmark.empty(), ErrorKind::config, "ratios need a benchmark");
  require(!config.risk_free_ratios.empty(), ErrorKind::config, "ratios need risk_free_ratios");
  const fs::path dir = prepare_out(config);
  const optimize::RollingResult result = optimize::rolling_optimize(study.cryptos, rolling_config(config));
  const std::size_t n = result.min_cvar.returns.size();
  const std::vector<double> bench(study.benchmark.begin() + static_cast<std::ptrdiff_t>(study.window),
                                  study.benchmark.begin() + static_cast<std::ptrdiff_t>(study.window + n));
  const std::vector<double> rf = risk_free_on(config.resolve(config.risk_free_ratios), result.min_cvar.dates);
  const double bench_vol = stats::stddev(bench);
  const risk::RiskLevel level(config.alpha);

  struct Column {
    std::string name;
    std::span<const double> returns;
  };
  const Column columns[] = {{"min CVaR portfolio", result.min_cvar.returns},
                            {"min Variance portfolio", result.min_variance.returns},
                            {study.benchmark_name, bench}};
  const auto head = header(config, "ratios");
  Written written{dir / "ratios.csv"};
  std::ofstream out = open_csv(written[0], head);
  out << "Measures";
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';
  auto row = [&](const char* name, auto&& fn) {
    out << name;
    for (const auto& c : columns) out << ',' << fmt::format("{:.4f}", fn(c.returns));
    out << '\n';
  };
  row("MDD", [&](std::span<const double> r) { return risk::mdd(risk::wealth_curve(r)); });
  row("Sharpe ratio", [&](std::span<const double> r) { return risk::sharpe(r, rf); });
  row("M2 ratio", [&](std::span<const double> r) { return risk::m2(r, rf, bench_vol); });
  row("Rachev ratio", [&](std::span<const double> r) { return risk::rachev(r, rf, level, level); });
  finish(out, written[0]);
  return written;
}

Written cmd_price(const RunConfig& config) {
  const StudyData study = load_study(config);
  require(!config.risk_free_option.empty(), ErrorKind::config, "price needs risk_free_option");
  const fs::path dir = prepare_out(config);
  const optimize::RollingResult result = optimize::rolling_optimize(study.cryptos, rolling_config(config));

  std::vector<std::size_t> maturities = config.maturities;
  maturities.push_back(config.maturity);
  std::sort(maturities.begin(), maturities.end());
  maturities.erase(std::unique(maturities.begin(), maturities.end()), maturities.end());
  const auto head = header(config, "price");
  Written written;
  for (const auto* track : {&result.min_cvar, &result.min_variance}) {
    const garch::GarchState fit = garch::fit_arma_garch(track->returns, garch::InnovationFamily::gaussian);
    const dist::NigParams nig = dist::fit_nig(fit.innovations);
    const double ks = option::nig_ks_statistic(nig, fit.innovations);
    const garch::Forecast next = garch::forecast_one_step(fit);
    const Date last = track->dates.back();
    const double rate = risk_free_on(config.resolve(config.risk_free_option), std::span(&last, 1)).front();

    option::PricerConfig pc;
    pc.maturity = config.maturity;
    pc.rate = rate;
    pc.n_paths = config.n_paths;
    pc.seed = rng::derive(config.seed, rng::hash_name("price"), rng::hash_name(track->name));
    pc.tilt = option::parse_tilt_scale(config.tilt_scale);
    pc.initial_variance = next.sigma_next * next.sigma_next;
    pc.threads = config.threads;
    const option::PriceSurface surface = option::build_surface(fit.params, nig, config.strikes, maturities, pc);

    const std::string stem = track_file_name(*track);
    written.push_back(dir / fmt::format("price_surface_{}.csv", stem));
    option::write_surface_csv(surface, written.back(), head);

    nlohmann::json params{{"provenance", config.provenance()},
                          {"portfolio", track->name},
                          {"garch", fit.params},
                          {"nig", nig},
                          {"nig_ks_statistic", ks},
                          {"initial_variance", *pc.initial_variance},
                          {"daily_rate", rate},
                          {"tilt_scale", config.tilt_scale},
                          {"theta_first_step", option::esscher_theta(
                                                   nig, rate,
                                                   pc.tilt == option::TiltScale::sqrt_sigma
                                                       ? std::sqrt(next.sigma_next)
                                                       : next.sigma_next)}};
    if (fit.boundary_warning) params["garch_warning"] = *fit.boundary_warning;
    written.push_back(dir / fmt::format("price_params_{}.json", stem));
    json_io::write_file(params, written.back());
  }
  return written;
}

Written cmd_synth(const RunConfig& config) {
  const fs::path dir = prepare_out(config);
  SynthOptions options;
  options.seed = config.seed;
  return write_sample_data(options, dir, config.provenance() + " command=synth");
}

}  // namespace cryptorisk::cli
