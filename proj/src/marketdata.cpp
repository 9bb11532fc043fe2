// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cryptorisk/error.hpp"

namespace cryptorisk::marketdata {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::size_t find_column(const std::vector<std::string_view>& header, std::string_view name,
                        std::string_view source) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError(std::string(source), 1, fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Date parse_date(std::string_view text) {
  text = trim(text);
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
      !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
    fail(ErrorKind::parse, fmt::format("invalid ISO date '{}'", text));
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) fail(ErrorKind::parse, fmt::format("invalid calendar date '{}'", text));
  return Date{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

PriceSeries parse_prices(std::istream& in, std::string_view source, const ColumnMapping& mapping,
                         std::string asset_id) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    header_line = line;
    header = split(header_line, mapping.delimiter);
    break;
  }
  if (header.empty()) throw ParseError(std::string(source), line_no, "missing header row");
  const std::size_t date_col = find_column(header, mapping.date_column, source);
  const std::size_t close_col = find_column(header, mapping.close_column, source);

  PriceSeries series;
  series.asset_id = std::move(asset_id);
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto fields = split(line, mapping.delimiter);
    if (fields.size() <= std::max(date_col, close_col)) {
      throw ParseError(std::string(source), line_no, "too few fields");
    }
    Observation obs;
    try {
      obs.date = parse_date(fields[date_col]);
    } catch (const Error& e) {
      throw ParseError(std::string(source), line_no, e.what());
    }
    if (!parse_double(fields[close_col], obs.close) || !std::isfinite(obs.close)) {
      throw ParseError(std::string(source), line_no,
                       fmt::format("invalid close '{}'", fields[close_col]));
    }
    if (obs.close <= 0.0) {
      fail(ErrorKind::domain, fmt::format("{}:{}: non-positive price {}", source, line_no, obs.close));
    }
    series.observations.push_back(obs);
    lines.push_back(line_no);
  }

  std::vector<std::size_t> order(series.observations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.observations[a].date < series.observations[b].date;
  });
  std::vector<Observation> sorted;
  sorted.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Observation& obs = series.observations[order[k]];
    if (!sorted.empty() && sorted.back().date == obs.date) {
      fail(ErrorKind::duplicate, fmt::format("{}:{}: duplicate date {}", source, lines[order[k]],
                                             format_date(obs.date)));
    }
    sorted.push_back(obs);
  }
  series.observations = std::move(sorted);
  return series;
}

PriceSeries load_prices(const std::filesystem::path& path, const ColumnMapping& mapping,
                        std::string asset_id) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open '{}'", path.string()));
  if (asset_id.empty()) asset_id = path.stem().string();
  return parse_prices(in, path.string(), mapping, std::move(asset_id));
}

std::vector<DatedReturn> log_returns(const PriceSeries& prices) {
  require(prices.size() >= 2, ErrorKind::insufficient_data,
          "log returns need at least two prices");
  std::vector<DatedReturn> out;
  out.reserve(prices.size() - 1);
  for (std::size_t t = 1; t < prices.size(); ++t) {
    const auto& prev = prices.observations[t - 1];
    const auto& cur = prices.observations[t];
    out.push_back({cur.date, std::log(cur.close / prev.close)});
  }
  return out;
}

ReturnPanel ReturnPanel::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= rows(), ErrorKind::shape, "panel slice out of range");
  ReturnPanel out;
  out.assets = assets;
  out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(begin),
                   dates.begin() + static_cast<std::ptrdiff_t>(end));
  out.returns = returns.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
  return out;
}

ReturnPanel ReturnPanel::select(std::span<const std::size_t> columns) const {
  ReturnPanel out;
  out.dates = dates;
  out.returns.resize(returns.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    require(columns[k] < cols(), ErrorKind::shape, "panel column out of range");
    out.assets.push_back(assets[columns[k]]);
    out.returns.col(static_cast<Eigen::Index>(k)) = returns.col(static_cast<Eigen::Index>(columns[k]));
  }
  return out;
}

std::optional<std::size_t> ReturnPanel::column_of(std::string_view asset) const {
  const auto it = std::find(assets.begin(), assets.end(), asset);
  if (it == assets.end()) return std::nullopt;
  return static_cast<std::size_t>(it - assets.begin());
}

namespace {

// Index of the first observation dated on or after `date`.
std::size_t lower_index(const PriceSeries& s, Date date) {
  const auto it = std::lower_bound(s.observations.begin(), s.observations.end(), date,
                                   [](const Observation& o, Date d) { return o.date < d; });
  return static_cast<std::size_t>(it - s.observations.begin());
}

}  // namespace

ReturnPanel align_panel(std::span<const PriceSeries> series, const PriceSeries* benchmark) {
  require(!series.empty(), ErrorKind::alignment, "no series to align");

  Date start = Date::min();
  Date end = Date::max();
  auto widen = [&](const PriceSeries& s) {
    if (s.size() < 2) fail(ErrorKind::insufficient_data, fmt::format("series '{}' has fewer than two prices", s.asset_id));
    start = std::max(start, s.observations.front().date);
    end = std::min(end, s.observations.back().date);
  };
  for (const auto& s : series) widen(s);
  if (benchmark) widen(*benchmark);
  if (start >= end) fail(ErrorKind::alignment, "date ranges do not overlap");

  const auto n_days = static_cast<std::size_t>((end - start).count());
  ReturnPanel panel;
  panel.dates.reserve(n_days);
  for (std::size_t k = 1; k <= n_days; ++k) panel.dates.push_back(start + std::chrono::days{k});
  const std::size_t d = series.size() + (benchmark ? 1 : 0);
  panel.returns.resize(static_cast<Eigen::Index>(n_days), static_cast<Eigen::Index>(d));

  for (std::size_t j = 0; j < series.size(); ++j) {
    const PriceSeries& s = series[j];
    panel.assets.push_back(s.asset_id);
    const std::size_t first = lower_index(s, start);
    for (std::size_t k = 0; k <= n_days; ++k) {
      const std::size_t idx = first + k;
      const Date expected = start + std::chrono::days{k};
      if (idx >= s.size() || s.observations[idx].date != expected) {
        fail(ErrorKind::alignment,
             fmt::format("series '{}' is missing {}", s.asset_id, format_date(expected)));
      }
      if (k > 0) {
        panel.returns(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j)) =
            std::log(s.observations[idx].close / s.observations[idx - 1].close);
      }
    }
  }

  if (benchmark) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1);
    panel.assets.push_back(benchmark->asset_id);
    std::size_t idx = lower_index(*benchmark, panel.dates.front());
    for (std::size_t k = 0; k < n_days; ++k) {
      const Date day = panel.dates[k];
      double r = 0.0;
      if (idx < benchmark->size() && benchmark->observations[idx].date == day) {
        r = std::log(benchmark->observations[idx].close / benchmark->observations[idx - 1].close);
        ++idx;
      }
      panel.returns(static_cast<Eigen::Index>(k), col) = r;
    }
  }
  return panel;
}

std::vector<PriceSeries> to_price_series(const ReturnPanel& panel) {
  require(panel.rows() > 0, ErrorKind::insufficient_data, "empty panel");
  std::vector<PriceSeries> out;
  for (std::size_t j = 0; j < panel.cols(); ++j) {
    PriceSeries s;
    s.asset_id = panel.assets[j];
    double cum = 0.0;
    s.observations.push_back({panel.dates.front() - std::chrono::days{1}, 1.0});
    for (std::size_t t = 0; t < panel.rows(); ++t) {
      cum += panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
      s.observations.push_back({panel.dates[t], std::exp(cum)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_panel_csv(const ReturnPanel& panel, const std::filesystem::path& path,
                     std::span<const std::string> header_comment) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
  for (const auto& line : header_comment) out << "# " << line << '\n';
  out << "date";
  for (const auto& a : panel.assets) out << ',' << a;
  out << '\n';
  for (std::size_t t = 0; t < panel.rows(); ++t) {
    out << format_date(panel.dates[t]);
    for (std::size_t j = 0; j < panel.cols(); ++j) {
      out << ',' << fmt::format("{:.17g}", panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

ReturnPanel read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open '{}'", path.string()));
  const std::string source = path.string();
  std::string line, header_line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    header_line = line;
    header = split(header_line, ',');
    break;
  }
  if (header.size() < 2 || header.front() != "date") {
    throw ParseError(source, line_no, "panel header must start with 'date'");
  }
  ReturnPanel panel;
  for (std::size_t j = 1; j < header.size(); ++j) panel.assets.emplace_back(header[j]);
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) throw ParseError(source, line_no, "wrong number of fields");
    try {
      panel.dates.push_back(parse_date(fields[0]));
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v) || !std::isfinite(v)) {
        throw ParseError(source, line_no, fmt::format("invalid return '{}'", fields[j]));
      }
      values.push_back(v);
    }
  }
  const auto T = static_cast<Eigen::Index>(panel.dates.size());
  const auto d = static_cast<Eigen::Index>(panel.assets.size());
  panel.returns = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), T, d);
  return panel;
}

}  // namespace cryptorisk::marketdata
