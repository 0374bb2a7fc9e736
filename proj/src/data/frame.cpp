#include "oilcast/data/frame.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"

namespace oilcast::data {

AlignedFrame::AlignedFrame(std::vector<Date> dates, std::vector<Column> columns)
    : dates_(std::move(dates)), columns_(std::move(columns)) {
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i]))
      throw DataError("frame dates must be strictly increasing at " + format_date(dates_[i]));
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& [name, values] = columns_[c];
    if (values.size() != dates_.size())
      throw DataError("column " + name + " has " + std::to_string(values.size()) + " values for " +
                      std::to_string(dates_.size()) + " dates");
    if (!index_.emplace(name, c).second) throw DataError("duplicate column " + name);
  }
}

std::vector<std::string> AlignedFrame::column_names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.first);
  return out;
}

bool AlignedFrame::has_column(std::string_view name) const { return index_.contains(std::string(name)); }

std::size_t AlignedFrame::index_of(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw DataError("no column named " + std::string(name));
  return it->second;
}

std::span<const double> AlignedFrame::column(std::string_view name) const { return columns_[index_of(name)].second; }

AlignedFrame AlignedFrame::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, rows());
  begin = std::min(begin, end);
  const auto b = static_cast<std::ptrdiff_t>(begin);
  const auto e = static_cast<std::ptrdiff_t>(end);
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& [name, values] : columns_) cols.emplace_back(name, std::vector<double>(values.begin() + b, values.begin() + e));
  return AlignedFrame(std::vector<Date>(dates_.begin() + b, dates_.begin() + e), std::move(cols));
}

AlignedFrame AlignedFrame::select(std::span<const std::string> names) const {
  std::vector<Column> cols;
  cols.reserve(names.size());
  for (const auto& name : names) cols.push_back(columns_[index_of(name)]);
  return AlignedFrame(dates_, std::move(cols));
}

AlignedFrame AlignedFrame::with_column(std::string name, std::vector<double> values) const {
  auto cols = columns_;
  if (const auto it = index_.find(name); it != index_.end()) {
    cols[it->second].second = std::move(values);
  } else {
    cols.emplace_back(std::move(name), std::move(values));
  }
  return AlignedFrame(dates_, std::move(cols));
}

AlignedFrame align(std::span<const OhlcvSeries> series) {
  if (series.empty()) throw DataError("align needs at least one series");
  for (const auto& s : series) {
    if (s.empty()) throw DataError("series " + s.symbol + " is empty");
  }

  std::vector<Date> common;
  for (const auto& bar : series.front().bars) common.push_back(bar.date);
  for (const auto& s : series.subspan(1)) {
    std::vector<Date> dates;
    for (const auto& bar : s.bars) dates.push_back(bar.date);
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(), std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) throw DataError("series share no common dates");

  std::vector<AlignedFrame::Column> columns;
  for (const auto& s : series) {
    const bool with_volume = s.has_volume();
    std::vector<double> open, high, low, close, volume;
    std::size_t k = 0;
    for (const auto& bar : s.bars) {
      if (k < common.size() && bar.date == common[k]) {
        open.push_back(bar.open);
        high.push_back(bar.high);
        low.push_back(bar.low);
        close.push_back(bar.close);
        if (with_volume) volume.push_back(*bar.volume);
        ++k;
      }
    }
    columns.emplace_back(s.symbol + ".open", std::move(open));
    columns.emplace_back(s.symbol + ".high", std::move(high));
    columns.emplace_back(s.symbol + ".low", std::move(low));
    columns.emplace_back(s.symbol + ".close", std::move(close));
    if (with_volume) columns.emplace_back(s.symbol + ".volume", std::move(volume));
  }
  return AlignedFrame(std::move(common), std::move(columns));
}

FrameSplit split_by_date(const AlignedFrame& frame, const Date& train_last, const Date& test_first,
                         const Date& test_last) {
  if (!(train_last < test_first)) throw DataError("train_last must precede test_first");
  if (test_last < test_first) throw DataError("test_last precedes test_first");
  const auto& dates = frame.dates();
  const auto train_end = std::upper_bound(dates.begin(), dates.end(), train_last) - dates.begin();
  const auto test_begin = std::lower_bound(dates.begin(), dates.end(), test_first) - dates.begin();
  const auto test_end = std::upper_bound(dates.begin(), dates.end(), test_last) - dates.begin();
  FrameSplit split{frame.slice(0, static_cast<std::size_t>(train_end)),
                   frame.slice(static_cast<std::size_t>(test_begin), static_cast<std::size_t>(test_end))};
  if (split.train.empty()) throw DataError("empty train partition (no dates <= " + format_date(train_last) + ")");
  if (split.test.empty())
    throw DataError("empty test partition [" + format_date(test_first) + ", " + format_date(test_last) + "]");
  return split;
}

std::string serialize_frame_csv(const AlignedFrame& frame) {
  std::string out = "date";
  for (const auto& [name, _] : frame.columns()) out += "," + name;
  out += '\n';
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out += format_date(frame.dates()[r]);
    for (const auto& [_, values] : frame.columns()) {
      out += ',';
      out += format_real(values[r]);
    }
    out += '\n';
  }
  return out;
}

AlignedFrame parse_frame_csv(std::string_view text) {
  std::vector<Date> dates;
  std::vector<AlignedFrame::Column> columns;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      if (fields.empty() || trim(fields[0]) != "date") throw ParseError("frame header must start with 'date'", line_no);
      for (auto f : std::span(fields).subspan(1)) columns.emplace_back(std::string(trim(f)), std::vector<double>{});
      header_seen = true;
      continue;
    }
    if (fields.size() != columns.size() + 1)
      throw ParseError("expected " + std::to_string(columns.size() + 1) + " fields", line_no);
    try {
      dates.push_back(parse_date(fields[0]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    for (std::size_t c = 0; c < columns.size(); ++c) columns[c].second.push_back(parse_real(fields[c + 1], line_no));
  }
  if (!header_seen) throw ParseError("empty frame file");
  return AlignedFrame(std::move(dates), std::move(columns));
}

AlignedFrame read_frame_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_frame_csv(buf.str());
}

void write_frame_file(const std::filesystem::path& path, const AlignedFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize_frame_csv(frame);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace oilcast::data
