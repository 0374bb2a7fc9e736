#include "oilcast/market/alpha_vantage.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"

namespace oilcast::market {

using nlohmann::json;

void ProviderConfig::validate() const {
  if (request_interval.count() < 0) throw DataError("request_interval must be >= 0");
  if (base_url.find("://") == std::string::npos) throw DataError("base_url must include a scheme: " + base_url);
}

std::string redact(std::string text, std::string_view secret) {
  if (secret.empty()) return text;
  for (std::size_t pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos + 3))
    text.replace(pos, secret.size(), "***");
  return text;
}

namespace {

constexpr std::string_view kSeriesKey = "Time Series (Daily)";

double field(const json& bar, const char* key, const std::string& date) {
  const auto it = bar.find(key);
  if (it == bar.end()) throw ParseError("bar " + date + " lacks \"" + key + "\"");
  if (it->is_number()) return it->get<double>();
  if (!it->is_string()) throw ParseError("bar " + date + " has a non-numeric \"" + key + "\"");
  return parse_real(it->get<std::string>());
}

std::chrono::seconds retry_hint(const std::string& note) {
  // "... 5 calls per minute ..." style notes; default to a minute.
  return note.find("per day") != std::string::npos ? std::chrono::seconds(3600) : std::chrono::seconds(60);
}

}  // namespace

data::OhlcvSeries parse_daily_payload(std::string_view body, std::string symbol) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("provider response is not a JSON object");
  for (const char* key : {"Note", "Information"}) {
    if (doc.contains(key)) {
      const std::string note = doc[key].is_string() ? doc[key].get<std::string>() : doc[key].dump();
      throw RateLimitError("provider throttled the request for " + symbol + ": " + note, retry_hint(note));
    }
  }
  if (doc.contains("Error Message")) {
    throw ProviderError("provider rejected " + symbol + ": " + doc["Error Message"].get<std::string>());
  }
  const auto series = doc.find(kSeriesKey);
  if (series == doc.end() || !series->is_object())
    throw ParseError("provider response for " + symbol + " has no \"" + std::string(kSeriesKey) + "\" map");

  std::vector<data::OhlcvBar> bars;
  bars.reserve(series->size());
  for (const auto& [date, bar] : series->items()) {
    if (!bar.is_object()) throw ParseError("bar " + date + " is not an object");
    data::OhlcvBar b;
    b.date = parse_date(date);
    b.open = field(bar, "1. open", date);
    b.high = field(bar, "2. high", date);
    b.low = field(bar, "3. low", date);
    b.close = field(bar, "4. close", date);
    if (bar.contains("5. volume")) b.volume = field(bar, "5. volume", date);
    bars.push_back(b);
  }
  return data::make_series(std::move(symbol), std::move(bars));
}

std::string daily_payload(const data::OhlcvSeries& series) {
  json days = json::object();
  for (const auto& bar : series.bars) {
    json b{{"1. open", format_real(bar.open)},
           {"2. high", format_real(bar.high)},
           {"3. low", format_real(bar.low)},
           {"4. close", format_real(bar.close)}};
    if (bar.volume) b["5. volume"] = format_real(*bar.volume);
    days[format_date(bar.date)] = std::move(b);
  }
  json doc{{"Meta Data", {{"1. Information", "Daily Prices (open, high, low, close) and Volumes"},
                          {"2. Symbol", series.symbol}}},
           {kSeriesKey, std::move(days)}};
  return doc.dump();
}

void RateLimiter::acquire() {
  std::lock_guard lock(mutex_);
  const auto now = std::chrono::steady_clock::now();
  if (primed_ && now < last_ + interval_) std::this_thread::sleep_until(last_ + interval_);
  last_ = std::chrono::steady_clock::now();
  primed_ = true;
}

AlphaVantageClient::AlphaVantageClient(ProviderConfig config)
    : config_(std::move(config)), cache_(config_.cache_dir), limiter_(config_.request_interval) {
  config_.validate();
}

std::string AlphaVantageClient::download(const std::string& symbol) {
  const std::size_t scheme = config_.base_url.find("://");
  const std::size_t slash = config_.base_url.find('/', scheme + 3);
  const std::string origin = config_.base_url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : config_.base_url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  std::lock_guard lock(request_mutex_);
  limiter_.acquire();
  ++requests_;

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  const httplib::Params params{{"function", config_.function},
                               {"symbol", symbol},
                               {"outputsize", config_.outputsize},
                               {"apikey", config_.api_key}};
  auto res = client.Get(prefix + "/query", params, httplib::Headers{});
  if (!res) {
    throw ProviderError(redact("request for " + symbol + " to " + origin + " failed: " + httplib::to_string(res.error()),
                               config_.api_key));
  }
  if (res->status == 429) throw RateLimitError("provider returned HTTP 429 for " + symbol, std::chrono::seconds(60));
  if (res->status != 200) {
    throw ProviderError(redact("provider returned HTTP " + std::to_string(res->status) + " for " + symbol, config_.api_key));
  }
  return res->body;
}

data::OhlcvSeries AlphaVantageClient::fetch_daily(const std::string& symbol, CachePolicy policy) {
  if (policy == CachePolicy::PreferCache) {
    if (auto hit = cache_.load(symbol)) return hit->series();
  }
  std::string body;
  try {
    body = download(symbol);
  } catch (const RateLimitError&) {
    throw;
  } catch (const ProviderError&) {
    if (auto hit = cache_.load(symbol)) return hit->series();
    throw;
  }
  data::OhlcvSeries series;
  try {
    series = parse_daily_payload(body, symbol);
  } catch (const RateLimitError&) {
    throw;
  } catch (const ProviderError& e) {
    throw ProviderError(redact(e.what(), config_.api_key));
  }
  // Serve what a later cache hit would return, so both paths agree exactly.
  return cache_.store(series).series();
}

data::OhlcvSeries fetch_daily(const std::string& symbol, const ProviderConfig& config) {
  AlphaVantageClient client(config);
  return client.fetch_daily(symbol);
}

}  // namespace oilcast::market
