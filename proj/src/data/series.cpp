#include "oilcast/data/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"

namespace oilcast::data {

bool OhlcvSeries::has_volume() const {
  return !bars.empty() && std::all_of(bars.begin(), bars.end(), [](const OhlcvBar& b) { return b.volume.has_value(); });
}

std::vector<double> OhlcvSeries::closes() const {
  std::vector<double> out;
  out.reserve(bars.size());
  for (const auto& bar : bars) out.push_back(bar.close);
  return out;
}

void validate_bar(const OhlcvBar& bar) {
  const auto where = [&] { return " on " + format_date(bar.date); };
  for (double p : {bar.open, bar.high, bar.low, bar.close}) {
    if (!std::isfinite(p) || p <= 0.0) throw DataError("non-positive price" + where());
  }
  if (bar.high < bar.low) throw DataError("high < low" + where());
  if (bar.low > std::min(bar.open, bar.close)) throw DataError("low above open/close" + where());
  if (bar.high < std::max(bar.open, bar.close)) throw DataError("high below open/close" + where());
  if (bar.volume && (!std::isfinite(*bar.volume) || *bar.volume < 0.0))
    throw DataError("negative volume" + where());
}

OhlcvSeries make_series(std::string symbol, std::vector<OhlcvBar> bars) {
  std::stable_sort(bars.begin(), bars.end(), [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < bars.size(); ++i) {
    validate_bar(bars[i]);
    if (i > 0 && bars[i].date == bars[i - 1].date)
      throw DataError("duplicate date " + format_date(bars[i].date) + " in " + symbol);
  }
  return OhlcvSeries{std::move(symbol), std::move(bars)};
}

OhlcvSeries parse_csv(std::istream& in, std::string symbol) {
  std::string line;
  std::size_t line_no = 0;
  bool with_volume = false;
  bool header_seen = false;
  std::vector<OhlcvBar> bars;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (!header_seen) {
      std::vector<std::string> names;
      for (auto f : fields) {
        std::string name(trim(f));
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        names.push_back(std::move(name));
      }
      const std::vector<std::string> base{"date", "open", "high", "low", "close"};
      auto expected = base;
      if (names.size() == 6) expected.push_back("volume");
      if (names != expected) throw ParseError("expected header date,open,high,low,close[,volume]", line_no);
      with_volume = names.size() == 6;
      header_seen = true;
      continue;
    }
    const std::size_t want = with_volume ? 6 : 5;
    if (fields.size() != want)
      throw ParseError("expected " + std::to_string(want) + " fields, got " + std::to_string(fields.size()), line_no);
    OhlcvBar bar;
    try {
      bar.date = parse_date(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    bar.open = parse_real(fields[1], line_no);
    bar.high = parse_real(fields[2], line_no);
    bar.low = parse_real(fields[3], line_no);
    bar.close = parse_real(fields[4], line_no);
    if (with_volume) bar.volume = parse_real(fields[5], line_no);
    bars.push_back(bar);
  }
  if (!header_seen) throw ParseError("empty input, missing header");
  return make_series(std::move(symbol), std::move(bars));
}

OhlcvSeries parse_csv(std::string_view text, std::string symbol) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, std::move(symbol));
}

std::string serialize_csv(const OhlcvSeries& series) {
  const bool with_volume = series.has_volume();
  std::string out = with_volume ? "date,open,high,low,close,volume\n" : "date,open,high,low,close\n";
  for (const auto& bar : series.bars) {
    out += format_date(bar.date);
    for (double v : {bar.open, bar.high, bar.low, bar.close}) {
      out += ',';
      out += format_real(v);
    }
    if (with_volume) {
      out += ',';
      out += format_real(*bar.volume);
    }
    out += '\n';
  }
  return out;
}

OhlcvSeries read_series_file(const std::filesystem::path& path, std::string symbol) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  if (symbol.empty()) symbol = path.stem().string();
  return parse_csv(in, std::move(symbol));
}

void write_series_file(const std::filesystem::path& path, const OhlcvSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize_csv(series);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace oilcast::data
