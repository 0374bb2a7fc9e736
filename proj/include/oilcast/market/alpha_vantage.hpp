#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>

#include "oilcast/data/series.hpp"
#include "oilcast/market/cache.hpp"

namespace oilcast::market {

struct ProviderConfig {
  std::string base_url = "https://www.alphavantage.co";  // requests go to <base_url>/query
  std::string api_key;
  std::chrono::milliseconds request_interval{12000};
  std::filesystem::path cache_dir = "cache";
  std::string function = "TIME_SERIES_DAILY";
  std::string outputsize = "full";
  std::chrono::seconds timeout{30};

  void validate() const;
};

/// Parses a daily-series JSON envelope. A "Note" or "Information" payload
/// raises RateLimitError, an "Error Message" payload ProviderError, anything
/// else without a daily map ParseError.
data::OhlcvSeries parse_daily_payload(std::string_view body, std::string symbol);

/// Builds a daily-series envelope for `series` (used by the stub server and tests).
std::string daily_payload(const data::OhlcvSeries& series);

/// Replaces every occurrence of `secret` in `text` with "***".
std::string redact(std::string text, std::string_view secret);

/// Blocks so that consecutive acquire() calls are at least `interval` apart.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}
  void acquire();

 private:
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_{};
  bool primed_ = false;
};

enum class CachePolicy {
  PreferCache,  // serve from cache when present, otherwise download
  Refresh,      // always download; fall back to the cache only if the transport fails
};

class AlphaVantageClient {
 public:
  explicit AlphaVantageClient(ProviderConfig config);

  data::OhlcvSeries fetch_daily(const std::string& symbol, CachePolicy policy = CachePolicy::PreferCache);

  std::size_t requests_made() const { return requests_.load(); }
  const SeriesCache& cache() const { return cache_; }

 private:
  std::string download(const std::string& symbol);

  ProviderConfig config_;
  SeriesCache cache_;
  RateLimiter limiter_;
  std::mutex request_mutex_;
  std::atomic<std::size_t> requests_{0};
};

/// One-shot convenience wrapper around AlphaVantageClient.
data::OhlcvSeries fetch_daily(const std::string& symbol, const ProviderConfig& config);

}  // namespace oilcast::market
