#include "oilcast/market/cache.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "oilcast/error.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::market {

namespace fs = std::filesystem;

data::OhlcvSeries CacheEntry::series() const { return data::parse_csv(std::string_view(csv), symbol); }

std::string sanitize_symbol(std::string_view symbol) {
  if (symbol.empty()) throw DataError("empty symbol");
  std::string out;
  for (char c : symbol) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                      c == '-' || c == '_';
    out += keep ? c : '_';
  }
  if (out == "." || out == "..") out = "_" + out;
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

fs::path SeriesCache::csv_path(std::string_view symbol) const { return dir_ / (sanitize_symbol(symbol) + ".csv"); }

std::optional<CacheEntry> SeriesCache::load(std::string_view symbol) const {
  const fs::path csv = csv_path(symbol);
  if (!fs::exists(csv)) return std::nullopt;
  CacheEntry entry{std::string(symbol), {}, read_file(csv)};
  const fs::path meta = dir_ / (sanitize_symbol(symbol) + ".meta.json");
  if (fs::exists(meta)) {
    const auto j = nlohmann::json::parse(read_file(meta), nullptr, false);
    if (j.is_object()) entry.fetched_at = j.value("fetched_at", "");
  }
  return entry;
}

CacheEntry SeriesCache::store(const data::OhlcvSeries& series) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error("cannot create cache directory " + dir_.string() + ": " + ec.message());
  CacheEntry entry{series.symbol, utc_timestamp(), data::serialize_csv(series)};
  write_file_atomic(csv_path(series.symbol), entry.csv);
  const nlohmann::json meta{{"symbol", entry.symbol}, {"fetched_at", entry.fetched_at}};
  write_file_atomic(dir_ / (sanitize_symbol(series.symbol) + ".meta.json"), meta.dump(2) + "\n");
  return entry;
}

}  // namespace oilcast::market
