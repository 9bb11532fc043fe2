// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cryptorisk::marketdata {

using Date = std::chrono::sys_days;

/// Parses YYYY-MM-DD. Throws Error(parse) on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date date);

struct Observation {
  Date date;
  double close = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Dated closes for one asset; dates strictly increasing, closes > 0.
struct PriceSeries {
  std::string asset_id;
  std::vector<Observation> observations;

  std::size_t size() const noexcept { return observations.size(); }
  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

struct ColumnMapping {
  std::string date_column = "date";
  std::string close_column = "close";
  char delimiter = ',';
};

/// Reads a header-carrying CSV. Rows may come in any order; the result is
/// sorted by date. Lines starting with '#' are skipped.
/// Throws ParseError (with line number) for malformed rows,
/// Error(domain) for a non-positive close and Error(duplicate) for a repeated date.
PriceSeries load_prices(const std::filesystem::path& path, const ColumnMapping& mapping = {},
                        std::string asset_id = {});
PriceSeries parse_prices(std::istream& in, std::string_view source, const ColumnMapping& mapping,
                         std::string asset_id);

struct DatedReturn {
  Date date;
  double value = 0.0;
};

/// ln(S_t / S_{t-1}), dated by the later observation.
std::vector<DatedReturn> log_returns(const PriceSeries& prices);

/// T x d log returns on a shared calendar.
struct ReturnPanel {
  std::vector<std::string> assets;
  std::vector<Date> dates;
  Eigen::MatrixXd returns;

  std::size_t rows() const noexcept { return dates.size(); }
  std::size_t cols() const noexcept { return assets.size(); }
  /// Rows [begin, end) as a new panel.
  ReturnPanel slice(std::size_t begin, std::size_t end) const;
  /// Subset of columns by index.
  ReturnPanel select(std::span<const std::size_t> columns) const;
  std::optional<std::size_t> column_of(std::string_view asset) const;
};

/// Aligns 7-day crypto series on their common calendar; every calendar day
/// in the overlap must be present for every crypto series. The optional
/// benchmark trades on fewer days and gets zero returns on the days it has no
/// observation. The benchmark, when given, becomes the last column.
/// Throws Error(alignment) for an empty overlap or a missing crypto date.
ReturnPanel align_panel(std::span<const PriceSeries> series,
                        const PriceSeries* benchmark = nullptr);

/// Rebuilds price series (base 1.0 on the day before the first return) from a
/// panel; inverse of align_panel up to exp/log rounding.
std::vector<PriceSeries> to_price_series(const ReturnPanel& panel);

/// CSV with `date` first, one column per asset. `header_comment` lines are
/// written first, each prefixed with "# ".
void write_panel_csv(const ReturnPanel& panel, const std::filesystem::path& path,
                     std::span<const std::string> header_comment = {});
ReturnPanel read_panel_csv(const std::filesystem::path& path);

}  // namespace cryptorisk::marketdata
