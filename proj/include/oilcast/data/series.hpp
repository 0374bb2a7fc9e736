#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oilcast/date.hpp"

namespace oilcast::data {

/// One daily bar. Prices are strictly positive and low <= min(open, close) <= max(open, close) <= high.
struct OhlcvBar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  std::optional<double> volume;

  friend bool operator==(const OhlcvBar&, const OhlcvBar&) = default;
};

/// Date-ascending bars of one instrument, no duplicate dates.
struct OhlcvSeries {
  std::string symbol;
  std::vector<OhlcvBar> bars;

  bool empty() const { return bars.empty(); }
  std::size_t size() const { return bars.size(); }
  bool has_volume() const;
  std::vector<double> closes() const;

  friend bool operator==(const OhlcvSeries&, const OhlcvSeries&) = default;
};

/// Throws DataError naming the bar's date when an invariant is broken.
void validate_bar(const OhlcvBar& bar);

/// Sorts by date and validates every bar; throws DataError on duplicate dates.
OhlcvSeries make_series(std::string symbol, std::vector<OhlcvBar> bars);

/// Reads `date,open,high,low,close[,volume]` CSV. Rows may come in any order.
OhlcvSeries parse_csv(std::istream& in, std::string symbol);
OhlcvSeries parse_csv(std::string_view text, std::string symbol);

/// Canonical CSV: same header as parse_csv, shortest round-trip decimals, `\n` line ends.
std::string serialize_csv(const OhlcvSeries& series);

/// Reads a series file; the symbol defaults to the file stem.
OhlcvSeries read_series_file(const std::filesystem::path& path, std::string symbol = {});
void write_series_file(const std::filesystem::path& path, const OhlcvSeries& series);

}  // namespace oilcast::data
