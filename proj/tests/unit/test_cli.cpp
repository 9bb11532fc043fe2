// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cryptorisk/cli/commands.hpp"
#include "cryptorisk/cli/config.hpp"
#include "cryptorisk/error.hpp"
#include "support/oracles.hpp"

using namespace cryptorisk;
using namespace cryptorisk::cli;

namespace {

RunConfig sample_config(const std::filesystem::path& out) {
  RunConfig c;
  for (const char* name : {"BTC", "ETH", "XRP"}) {
    c.assets.push_back({name, oracle::sample_data() / (std::string(name) + ".csv")});
  }
  c.benchmark = AssetSource{"SPY", oracle::sample_data() / "SPY.csv"};
  c.risk_free_ratios = oracle::sample_data() / "treasury_10y.csv";
  c.risk_free_option = oracle::sample_data() / "treasury_6m.csv";
  c.out_dir = out;
  c.max_days = 10;
  return c;
}

std::vector<std::string> data_lines(const std::filesystem::path& p) {
  std::istringstream in(oracle::read_text(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<double> numbers_after_label(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string cell;
  std::getline(in, cell, ',');
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_CASE("config JSON round trip and hash") {
  const RunConfig c = sample_config("out");
  const RunConfig back = RunConfig::from_json(c.to_json(), ".");
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());

  RunConfig moved = c;
  moved.out_dir = "elsewhere";
  moved.threads = 7;
  CHECK(moved.hash() == c.hash());
  RunConfig changed = c;
  changed.alpha = 0.05;
  CHECK(changed.hash() != c.hash());
  changed = c;
  changed.seed += 1;
  CHECK(changed.hash() != c.hash());
  CHECK(c.provenance().rfind("seed=20190702 config_hash=", 0) == 0);
  CHECK(c.provenance().size() == std::string("seed=20190702 config_hash=").size() + 16);
}

TEST_CASE("config parsing errors") {
  try {
    RunConfig::from_json(nlohmann::json{{"alhpa", 0.01}}, ".");
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("alhpa") != std::string::npos);
  }
  RunConfig c = sample_config("out");
  CHECK_NOTHROW(c.validate());
  c.alpha = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = sample_config("out");
  c.end_date = "2018-01-01";
  CHECK_THROWS_AS(c.validate(), Error);
  c = sample_config("out");
  c.n_paths = 10;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config files resolve paths against their directory") {
  const auto dir = oracle::scratch_dir("cli_config");
  {
    std::ofstream(dir / "c.json") << R"({"assets": [{"name": "X", "path": "data/X.csv"}], "out_dir": "res"})";
  }
  const RunConfig c = load_config(dir / "c.json");
  CHECK(c.resolve(c.assets[0].path) == dir / "data" / "X.csv");
  CHECK(c.out_dir == dir / "res");
  CHECK(c.resolve("/abs/file.csv") == "/abs/file.csv");
}

TEST_CASE("risk-free rates carry forward") {
  const auto dir = oracle::scratch_dir("cli_rf");
  {
    std::ofstream(dir / "y.csv") << "date,yield\n2019-01-02,2.52\n2019-01-04,5.04\n";
  }
  const std::vector<marketdata::Date> dates{marketdata::parse_date("2019-01-02"), marketdata::parse_date("2019-01-03"),
                                            marketdata::parse_date("2019-01-05")};
  const auto rf = risk_free_on(dir / "y.csv", dates);
  REQUIRE(rf.size() == 3);
  CHECK(rf[0] == doctest::Approx(1e-4));
  CHECK(rf[1] == doctest::Approx(1e-4));
  CHECK(rf[2] == doctest::Approx(2e-4));
}

TEST_CASE("ingest writes a panel and summary statistics") {
  const auto dir = oracle::scratch_dir("cli_ingest");
  {
    std::ofstream a(dir / "A.csv");
    a << "date,close\n";
    for (int d = 1; d <= 9; ++d) a << "2019-01-0" << d << ',' << 100 + d << '\n';
    std::ofstream b(dir / "B.csv");
    b << "date,close\n";
    for (int d = 1; d <= 9; ++d) b << "2019-01-0" << d << ',' << (d % 2 == 0 ? 90 : 100) << '\n';
  }
  RunConfig c;
  c.assets = {{"A", dir / "A.csv"}, {"B", dir / "B.csv"}};
  c.out_dir = dir / "out";
  const auto written = cmd_ingest(c);
  REQUIRE(written.size() == 2);
  const auto panel = data_lines(written[0]);
  CHECK(panel.size() == 1 + 8);
  const auto summary = data_lines(written[1]);
  CHECK(summary[0] == "statistic,A,B");
  bool saw_mdd = false;
  for (const auto& line : summary) {
    if (line.rfind("mdd,", 0) == 0) {
      const auto v = numbers_after_label(line);
      CHECK(v[0] == 0.0);
      CHECK(v[1] == doctest::Approx(0.1));
      saw_mdd = true;
    }
  }
  CHECK(saw_mdd);
  CHECK(oracle::read_text(written[0]).find("# command=ingest") != std::string::npos);

  c.assets[1].path = dir / "nope.csv";
  try {
    cmd_ingest(c);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
    CHECK(std::string(e.what()).find("nope.csv") != std::string::npos);
  }
}

TEST_CASE("risk budget percentages sum to one hundred") {
  const auto dir = oracle::scratch_dir("cli_riskbudget");
  const auto written = cmd_riskbudget(sample_config(dir));
  const auto lines = data_lines(written[0]);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "method,BTC,ETH,XRP");
  for (const auto& line : lines) {
    if (line.rfind("RC_Vol(%),", 0) == 0 || line.rfind("RC_CVaR(%),", 0) == 0) {
      double total = 0.0;
      for (double v : numbers_after_label(line)) total += v;
      CHECK(total == doctest::Approx(100.0).epsilon(1e-3));
    }
  }
  CHECK(data_lines(written[1]).size() == 1 + 10);
}

TEST_CASE("study data starts one window before the out-of-sample date") {
  const auto study = load_study(sample_config("unused"));
  CHECK(study.window == 252);
  CHECK(marketdata::format_date(study.cryptos.dates[study.window]) == "2018-04-04");
  CHECK(marketdata::format_date(study.cryptos.dates.back()) == "2019-07-02");
  CHECK(study.benchmark.size() == study.cryptos.rows());
  CHECK(study.benchmark_name == "SPY");
}
