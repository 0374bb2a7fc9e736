#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oilcast/data/series.hpp"
#include "oilcast/date.hpp"

namespace oilcast::data {

/// Several instruments on a common, strictly increasing date axis.
///
/// Columns keep insertion order and are addressed as `<symbol>.<field>`,
/// e.g. `BP.close`. Every column has exactly one value per date.
class AlignedFrame {
 public:
  using Column = std::pair<std::string, std::vector<double>>;

  AlignedFrame() = default;
  AlignedFrame(std::vector<Date> dates, std::vector<Column> columns);

  const std::vector<Date>& dates() const { return dates_; }
  std::size_t rows() const { return dates_.size(); }
  std::size_t width() const { return columns_.size(); }
  bool empty() const { return dates_.empty(); }

  std::vector<std::string> column_names() const;
  bool has_column(std::string_view name) const;

  /// Throws DataError if the column does not exist.
  std::span<const double> column(std::string_view name) const;

  /// Rows [begin, end).
  AlignedFrame slice(std::size_t begin, std::size_t end) const;

  /// Keeps only the named columns, in the given order.
  AlignedFrame select(std::span<const std::string> names) const;

  /// Returns a copy with `name` appended (or replaced).
  AlignedFrame with_column(std::string name, std::vector<double> values) const;

  const std::vector<Column>& columns() const { return columns_; }

  friend bool operator==(const AlignedFrame& a, const AlignedFrame& b) {
    return a.dates_ == b.dates_ && a.columns_ == b.columns_;
  }

 private:
  std::size_t index_of(std::string_view name) const;

  std::vector<Date> dates_;
  std::vector<Column> columns_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Inner join on dates. Columns: `<symbol>.open/high/low/close` (+ `.volume` when the series has it).
AlignedFrame align(std::span<const OhlcvSeries> series);

struct FrameSplit {
  AlignedFrame train;
  AlignedFrame test;
};

/// train = dates <= train_last, test = dates in [test_first, test_last].
FrameSplit split_by_date(const AlignedFrame& frame, const Date& train_last, const Date& test_first,
                         const Date& test_last);

/// `date,<col>,...` CSV with shortest round-trip decimals.
std::string serialize_frame_csv(const AlignedFrame& frame);
AlignedFrame parse_frame_csv(std::string_view text);
AlignedFrame read_frame_file(const std::filesystem::path& path);
void write_frame_file(const std::filesystem::path& path, const AlignedFrame& frame);

}  // namespace oilcast::data
