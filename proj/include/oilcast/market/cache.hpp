#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "oilcast/data/series.hpp"

namespace oilcast::market {

/// One cached download: canonical CSV plus when it was fetched (UTC, ISO-8601).
struct CacheEntry {
  std::string symbol;
  std::string fetched_at;
  std::string csv;

  data::OhlcvSeries series() const;
};

/// Directory of `<symbol>.csv` files with a `<symbol>.meta.json` sidecar.
/// Writes go through a temporary file and a rename.
class SeriesCache {
 public:
  explicit SeriesCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path csv_path(std::string_view symbol) const;

  std::optional<CacheEntry> load(std::string_view symbol) const;
  CacheEntry store(const data::OhlcvSeries& series) const;

 private:
  std::filesystem::path dir_;
};

/// File-name-safe form of a ticker: letters, digits, '.', '-' and '_' are kept, the rest become '_'.
std::string sanitize_symbol(std::string_view symbol);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp();

}  // namespace oilcast::market
