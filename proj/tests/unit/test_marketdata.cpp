// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cryptorisk/error.hpp"
#include "cryptorisk/marketdata.hpp"
#include "support/oracles.hpp"

using namespace cryptorisk;
using namespace cryptorisk::marketdata;

namespace {

PriceSeries parse(const std::string& text, const std::string& id = "X") {
  std::istringstream in(text);
  return parse_prices(in, "memory", {}, id);
}

PriceSeries daily(const std::string& id, const std::string& start, std::vector<double> closes) {
  PriceSeries s{id, {}};
  const Date d0 = parse_date(start);
  for (std::size_t i = 0; i < closes.size(); ++i) s.observations.push_back({d0 + std::chrono::days(i), closes[i]});
  return s;
}

}  // namespace

TEST_CASE("dates round trip and reject malformed input") {
  CHECK(format_date(parse_date("2018-04-04")) == "2018-04-04");
  CHECK_THROWS_AS(parse_date("2018-4-4x"), Error);
  CHECK_THROWS_AS(parse_date("2018-02-30"), Error);
}

TEST_CASE("price files are sorted and validated") {
  const auto s = parse("# comment\ndate,close\n2018-01-03,3\n2018-01-01,1\n2018-01-02,2\n");
  REQUIRE(s.size() == 3);
  CHECK(format_date(s.observations.front().date) == "2018-01-01");
  CHECK(s.observations.back().close == 3.0);

  CHECK_THROWS_AS(parse("date,close\n2018-01-01,1\n2018-01-01,2\n"), Error);
  CHECK_THROWS_AS(parse("date,close\n2018-01-01,0\n"), Error);
  try {
    parse("date,close\n2018-01-01,1\n2018-01-02,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse("date,close\n2018-01-01,1\n2018-01-01,1\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::duplicate);
  }
}

TEST_CASE("missing file names its path") {
  try {
    load_prices("/nonexistent/prices.csv");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
    CHECK(std::string(e.what()).find("/nonexistent/prices.csv") != std::string::npos);
  }
}

TEST_CASE("log returns are dated by the later close") {
  const auto r = log_returns(daily("X", "2018-01-01", {100, 110, 99}));
  REQUIRE(r.size() == 2);
  CHECK(format_date(r[0].date) == "2018-01-02");
  CHECK(r[0].value == doctest::Approx(std::log(1.1)));
  CHECK(r[1].value == doctest::Approx(std::log(0.9)));
}

TEST_CASE("benchmark gets zero returns on days it does not trade") {
  const std::vector<PriceSeries> cryptos{daily("A", "2018-01-05", {1, 2, 3, 4, 5}), daily("B", "2018-01-04", {1, 1, 1, 1, 1, 1})};
  // 2018-01-06/07 is a weekend.
  PriceSeries bench{"SPY", {}};
  for (const char* d : {"2018-01-04", "2018-01-05", "2018-01-08", "2018-01-09"})
    bench.observations.push_back({parse_date(d), 100.0 + static_cast<double>(bench.size())});
  const auto panel = align_panel(cryptos, &bench);
  REQUIRE(panel.cols() == 3);
  CHECK(panel.assets.back() == "SPY");
  REQUIRE(panel.rows() == 4);
  CHECK(format_date(panel.dates.front()) == "2018-01-06");
  CHECK(panel.returns(0, 2) == 0.0);
  CHECK(panel.returns(1, 2) == 0.0);
  CHECK(panel.returns(2, 2) == doctest::Approx(std::log(102.0 / 101.0)));
  CHECK(panel.returns(0, 0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("a crypto gap inside the overlap is an alignment error") {
  auto a = daily("A", "2018-01-01", {1, 2, 3, 4});
  a.observations.erase(a.observations.begin() + 2);
  const std::vector<PriceSeries> cryptos{a, daily("B", "2018-01-01", {1, 2, 3, 4})};
  try {
    align_panel(cryptos);
    FAIL("expected an alignment error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::alignment);
  }
}

TEST_CASE("panel csv round trip and price reconstruction") {
  const std::vector<PriceSeries> cryptos{daily("A", "2018-01-01", {1, 2, 1.5, 3}), daily("B", "2018-01-01", {5, 4, 4.5, 4})};
  const auto panel = align_panel(cryptos);
  const auto dir = oracle::scratch_dir("panel");
  write_panel_csv(panel, dir / "p.csv", std::vector<std::string>{"seed=1"});
  const auto back = read_panel_csv(dir / "p.csv");
  CHECK(back.assets == panel.assets);
  CHECK(back.dates == panel.dates);
  CHECK((back.returns - panel.returns).cwiseAbs().maxCoeff() == 0.0);

  const auto prices = to_price_series(panel);
  REQUIRE(prices.size() == 2);
  CHECK(prices[0].observations.back().close == doctest::Approx(3.0));
  const auto again = align_panel(prices);
  CHECK((again.returns - panel.returns).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("slice and select") {
  const std::vector<PriceSeries> cryptos{daily("A", "2018-01-01", {1, 2, 3, 4}), daily("B", "2018-01-01", {4, 3, 2, 1})};
  const auto panel = align_panel(cryptos);
  const auto s = panel.slice(1, 3);
  CHECK(s.rows() == 2);
  CHECK(s.dates.front() == panel.dates[1]);
  const std::size_t cols[] = {1};
  const auto b = panel.select(cols);
  CHECK(b.assets == std::vector<std::string>{"B"});
  CHECK(panel.column_of("B") == 1u);
  CHECK_FALSE(panel.column_of("Z").has_value());
}
