#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oilcast/data/series.hpp"
#include "oilcast/date.hpp"

namespace oilcast::experiment {

/// Deterministic stand-in market: an oil producer (OILCO) driven by crude (WTI),
/// plus a dollar index (USD) and gold (GOLD). Each instrument skips a few
/// weekdays of its own, so aligning them exercises the inner join.
struct SyntheticMarketOptions {
  std::size_t days = 700;  // weekdays generated before holiday removal
  std::uint64_t seed = 2023;
  Date start{std::chrono::year{2018}, std::chrono::month{1}, std::chrono::day{1}};
  double holiday_rate = 0.02;
};

std::vector<data::OhlcvSeries> make_synthetic_market(const SyntheticMarketOptions& options = {});

/// Weekdays starting at `start` (inclusive when it is a weekday).
std::vector<Date> weekdays(const Date& start, std::size_t count);

/// OHLC bars around the given closes; open/high/low jitter is drawn from `seed`.
data::OhlcvSeries bars_from_closes(std::string symbol, std::span<const Date> dates, std::span<const double> closes,
                                   std::uint64_t seed);

/// Series whose close at date t equals `source`'s close at t+1 (last date dropped).
data::OhlcvSeries make_lead_series(const data::OhlcvSeries& source, std::string symbol);

/// Positive white noise around `level` on the given dates (flat bars).
data::OhlcvSeries make_noise_series(std::span<const Date> dates, std::string symbol, std::uint64_t seed,
                                    double level = 100.0, double scale = 5.0);

/// Noiseless sine (period in samples) with a positive offset, flat bars.
data::OhlcvSeries make_sine_series(std::span<const Date> dates, std::string symbol, double period,
                                   double level = 100.0, double amplitude = 10.0);

}  // namespace oilcast::experiment
