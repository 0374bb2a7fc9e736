#include <gtest/gtest.h>

#include <chrono>

#include "oilcast/data/series.hpp"
#include "oilcast/error.hpp"
#include "oilcast/market/alpha_vantage.hpp"
#include "oilcast/market/cache.hpp"
#include "test_support.hpp"

#include "stub_server.hpp"

using namespace oilcast;
using namespace oilcast::market;
using namespace oilcast::testing;

namespace {

constexpr const char* kThreeDays = R"json({
  "Meta Data": {"1. Information": "Daily Prices", "2. Symbol": "BP.L"},
  "Time Series (Daily)": {
    "2021-07-15": {"1. open": "4.6", "2. high": "4.7", "3. low": "4.5", "4. close": "4.65", "5. volume": "1200"},
    "2021-07-13": {"1. open": "4.4", "2. high": "4.55", "3. low": "4.35", "4. close": "4.5", "5. volume": "900"},
    "2021-07-14": {"1. open": "4.5", "2. high": "4.62", "3. low": "4.45", "4. close": "4.6", "5. volume": "1000"}
  }
})json";

constexpr const char* kSecret = "UNIT-SECRET-123";

ProviderConfig config_for(const std::string& url, const TempDir& dir) {
  ProviderConfig c;
  c.base_url = url;
  c.api_key = kSecret;
  c.request_interval = std::chrono::milliseconds(0);
  c.cache_dir = dir / "cache";
  c.timeout = std::chrono::seconds(5);
  return c;
}

}  // namespace

// ---- payload --------------------------------------------------------------------

TEST(Payload, ThreeDayEnvelopeParsesAscending) {
  const auto s = parse_daily_payload(kThreeDays, "BP.L");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.bars[0].date, day(2021, 7, 13));
  EXPECT_EQ(s.bars[2].date, day(2021, 7, 15));
  EXPECT_EQ(s.bars[1].close, 4.6);
  EXPECT_EQ(s.bars[0].volume, 900.0);
}

TEST(Payload, RoundTripsThroughEnvelope) {
  Rng rng(60);
  const auto s = random_series(rng, "WTI", 30, day(2020, 1, 1));
  EXPECT_EQ(parse_daily_payload(daily_payload(s), "WTI"), s);
}

TEST(Payload, ProviderSignals) {
  try {
    parse_daily_payload(R"({"Note": "Thank you for using Alpha Vantage! Our standard API call frequency is 5 calls per minute."})",
                        "X");
    FAIL();
  } catch (const RateLimitError& e) {
    EXPECT_EQ(e.retry_after(), std::chrono::seconds(60));
  }
  try {
    parse_daily_payload(R"({"Information": "You have reached the 25 requests per day limit."})", "X");
    FAIL();
  } catch (const RateLimitError& e) {
    EXPECT_EQ(e.retry_after(), std::chrono::seconds(3600));
  }
  EXPECT_THROW(parse_daily_payload(R"({"Error Message": "Invalid API call."})", "X"), ProviderError);
  EXPECT_THROW(parse_daily_payload(R"({"Meta Data": {}})", "X"), ParseError);
  EXPECT_THROW(parse_daily_payload("<html>", "X"), ParseError);
  EXPECT_THROW(parse_daily_payload(R"json({"Time Series (Daily)": {"2021-01-04": {"1. open": "1"}}})json", "X"), ParseError);
}

TEST(Redact, HidesEveryOccurrence) {
  EXPECT_EQ(redact("a KEY b KEY", "KEY"), "a *** b ***");
  EXPECT_EQ(redact("nothing here", ""), "nothing here");
}

TEST(Config, Validation) {
  ProviderConfig c;
  EXPECT_NO_THROW(c.validate());
  c.request_interval = std::chrono::milliseconds(-1);
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.base_url = "localhost:80";
  EXPECT_THROW(c.validate(), Error);
}

// ---- cache ----------------------------------------------------------------------

TEST(Cache, StoreLoadAndSanitize) {
  TempDir dir;
  SeriesCache cache(dir / "c");
  EXPECT_FALSE(cache.load("BP.L"));
  Rng rng(61);
  const auto s = random_series(rng, "BP.L", 10, day(2021, 1, 1));
  const auto entry = cache.store(s);
  EXPECT_EQ(entry.series(), s);
  const auto loaded = cache.load("BP.L");
  ASSERT_TRUE(loaded);
  EXPECT_EQ(loaded->csv, data::serialize_csv(s));
  EXPECT_EQ(loaded->fetched_at.size(), 20u);
  EXPECT_EQ(sanitize_symbol("A/B C:D.e-f_g"), "A_B_C_D.e-f_g");
  EXPECT_EQ(cache.csv_path("../x").filename().string(), ".._x.csv");
}

// ---- client against a local stub ----------------------------------------------

TEST(Client, FetchesThreeDayPayloadAndCachesIt) {
  TempDir dir;
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.set_content(kThreeDays, "application/json"); });
  AlphaVantageClient client(config_for(stub.url(), dir));
  const auto s = client.fetch_daily("BP.L");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(client.requests_made(), 1u);
  const auto q = stub.queries().front();
  EXPECT_NE(q.find("function=TIME_SERIES_DAILY"), std::string::npos);
  EXPECT_NE(q.find("symbol=BP.L"), std::string::npos);
  EXPECT_NE(q.find("outputsize=full"), std::string::npos);
  EXPECT_EQ(client.fetch_daily("BP.L"), s);
  EXPECT_EQ(stub.requests(), 1u);
  EXPECT_EQ(client.fetch_daily("BP.L", CachePolicy::Refresh), s);
  EXPECT_EQ(stub.requests(), 2u);
}

TEST(Client, WarmCacheServesWithoutNetwork) {
  TempDir dir;
  Rng rng(62);
  const auto s = random_series(rng, "WTI", 12, day(2021, 2, 1));
  SeriesCache(dir / "cache").store(s);
  AlphaVantageClient client(config_for(closed_port_url(), dir));
  EXPECT_EQ(client.fetch_daily("WTI"), s);
  EXPECT_EQ(client.fetch_daily("WTI", CachePolicy::Refresh), s);
  EXPECT_THROW(client.fetch_daily("GOLD"), ProviderError);
}

TEST(Client, RateLimitLeavesCacheUntouched) {
  TempDir dir;
  Rng rng(63);
  const auto s = random_series(rng, "USD", 8, day(2021, 2, 1));
  SeriesCache cache(dir / "cache");
  cache.store(s);
  const auto before = read_text(cache.csv_path("USD"));
  const auto meta_before = read_text(dir / "cache" / "USD.meta.json");
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"Note": "API call frequency is 5 calls per minute"})", "application/json");
  });
  AlphaVantageClient client(config_for(stub.url(), dir));
  EXPECT_THROW(client.fetch_daily("USD", CachePolicy::Refresh), RateLimitError);
  EXPECT_THROW(client.fetch_daily("GOLD"), RateLimitError);
  EXPECT_EQ(read_text(cache.csv_path("USD")), before);
  EXPECT_EQ(read_text(dir / "cache" / "USD.meta.json"), meta_before);
  EXPECT_FALSE(cache.load("GOLD"));
}

TEST(Client, Http429IsRateLimit) {
  TempDir dir;
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  AlphaVantageClient client(config_for(stub.url(), dir));
  EXPECT_THROW(client.fetch_daily("X"), RateLimitError);
}

TEST(Client, MalformedPayloadIsParseError) {
  TempDir dir;
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.set_content("{not json", "application/json"); });
  AlphaVantageClient client(config_for(stub.url(), dir));
  EXPECT_THROW(client.fetch_daily("X"), ParseError);
  EXPECT_FALSE(client.cache().load("X"));
}

TEST(Client, KeyNeverAppearsInErrors) {
  TempDir dir;
  StubServer echo([](const httplib::Request& req, httplib::Response& res) {
    res.set_content(R"({"Error Message": "bad key )" + req.get_param_value("apikey") + R"("})", "application/json");
  });
  StubServer broken([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  for (const auto& url : {echo.url(), broken.url(), closed_port_url()}) {
    AlphaVantageClient client(config_for(url, dir));
    try {
      client.fetch_daily("X");
      FAIL() << url;
    } catch (const ProviderError& e) {
      EXPECT_EQ(std::string(e.what()).find(kSecret), std::string::npos) << e.what();
    }
  }
  EXPECT_NE(echo.queries().front().find(kSecret), std::string::npos);
}

TEST(Client, RequestIntervalIsHonoured) {
  TempDir dir;
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.set_content(kThreeDays, "application/json"); });
  auto cfg = config_for(stub.url(), dir);
  cfg.request_interval = std::chrono::milliseconds(150);
  AlphaVantageClient client(cfg);
  for (const char* sym : {"A", "B", "C"}) client.fetch_daily(sym);
  const auto t = stub.arrivals();
  ASSERT_EQ(t.size(), 3u);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GE(t[i] - t[i - 1], std::chrono::milliseconds(140));
}

TEST(RateLimiter, SpacesAcquisitions) {
  RateLimiter limiter(std::chrono::milliseconds(50));
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) limiter.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(150));
}
