#include "oilcast/experiment/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oilcast/error.hpp"
#include "oilcast/random.hpp"

namespace oilcast::experiment {

std::vector<Date> weekdays(const Date& start, std::size_t count) {
  std::vector<Date> out;
  out.reserve(count);
  for (Date d = start; out.size() < count; d = add_days(d, 1)) {
    if (!is_weekend(d)) out.push_back(d);
  }
  return out;
}

data::OhlcvSeries bars_from_closes(std::string symbol, std::span<const Date> dates, std::span<const double> closes,
                                   std::uint64_t seed) {
  if (dates.size() != closes.size()) throw DataError("dates and closes differ in length");
  Rng rng(seed);
  std::vector<data::OhlcvBar> bars;
  bars.reserve(closes.size());
  for (std::size_t i = 0; i < closes.size(); ++i) {
    data::OhlcvBar bar;
    bar.date = dates[i];
    bar.close = closes[i];
    bar.open = (i == 0 ? closes[i] : closes[i - 1]) * std::exp(0.002 * rng.normal());
    bar.high = std::max(bar.open, bar.close) * (1.0 + 0.004 * std::abs(rng.normal()));
    bar.low = std::min(bar.open, bar.close) * (1.0 - 0.004 * std::abs(rng.normal()));
    bar.volume = std::round(1e6 * std::exp(0.3 * rng.normal()));
    bars.push_back(bar);
  }
  return data::make_series(std::move(symbol), std::move(bars));
}

namespace {

data::OhlcvSeries flat_bars(std::string symbol, std::span<const Date> dates, std::span<const double> closes) {
  std::vector<data::OhlcvBar> bars;
  for (std::size_t i = 0; i < closes.size(); ++i) bars.push_back({dates[i], closes[i], closes[i], closes[i], closes[i], {}});
  return data::make_series(std::move(symbol), std::move(bars));
}

data::OhlcvSeries drop_holidays(data::OhlcvSeries series, double rate, Rng& rng) {
  std::vector<data::OhlcvBar> kept;
  for (std::size_t i = 0; i < series.bars.size(); ++i) {
    if (i == 0 || !rng.bernoulli(rate)) kept.push_back(series.bars[i]);
  }
  series.bars = std::move(kept);
  return series;
}

}  // namespace

std::vector<data::OhlcvSeries> make_synthetic_market(const SyntheticMarketOptions& options) {
  const auto dates = weekdays(options.start, options.days);
  Rng rng(options.seed);

  const double wti_mean = std::log(60.0);
  const double usd_mean = std::log(95.0);
  const double gold_mean = std::log(1300.0);
  double wti = wti_mean, usd = usd_mean, gold = gold_mean, idio = 0.0;

  std::vector<double> wti_close, usd_close, gold_close, oil_close;
  for (std::size_t t = 0; t < dates.size(); ++t) {
    const double e_w = rng.normal(), e_u = rng.normal(), e_g = rng.normal(), e_o = rng.normal();
    wti += 0.02 * (wti_mean - wti) + 0.025 * e_w;
    usd += 0.02 * (usd_mean - usd) + 0.004 * e_u;
    gold += 0.015 * (gold_mean - gold) + 0.009 * (e_g - 0.4 * e_u);
    idio += -0.03 * idio + 0.012 * e_o;
    const double oil = std::log(400.0) + 0.6 * (wti - wti_mean) - 0.5 * (usd - usd_mean) + idio;
    wti_close.push_back(std::exp(wti));
    usd_close.push_back(std::exp(usd));
    gold_close.push_back(std::exp(gold));
    oil_close.push_back(std::exp(oil));
  }

  Rng holidays(derive_seed(options.seed, "holidays"));
  std::vector<data::OhlcvSeries> out;
  out.push_back(bars_from_closes("OILCO", dates, oil_close, derive_seed(options.seed, "OILCO")));
  out.push_back(bars_from_closes("WTI", dates, wti_close, derive_seed(options.seed, "WTI")));
  out.push_back(bars_from_closes("USD", dates, usd_close, derive_seed(options.seed, "USD")));
  out.push_back(bars_from_closes("GOLD", dates, gold_close, derive_seed(options.seed, "GOLD")));
  for (auto& s : out) s = drop_holidays(std::move(s), options.holiday_rate, holidays);
  return out;
}

data::OhlcvSeries make_lead_series(const data::OhlcvSeries& source, std::string symbol) {
  if (source.size() < 2) throw DataError("lead series needs at least two bars");
  std::vector<Date> dates;
  std::vector<double> closes;
  for (std::size_t i = 0; i + 1 < source.size(); ++i) {
    dates.push_back(source.bars[i].date);
    closes.push_back(source.bars[i + 1].close);
  }
  return flat_bars(std::move(symbol), dates, closes);
}

data::OhlcvSeries make_noise_series(std::span<const Date> dates, std::string symbol, std::uint64_t seed, double level,
                                    double scale) {
  Rng rng(seed);
  std::vector<double> closes;
  for (std::size_t i = 0; i < dates.size(); ++i) closes.push_back(std::max(level + scale * rng.normal(), 1e-3));
  return flat_bars(std::move(symbol), dates, closes);
}

data::OhlcvSeries make_sine_series(std::span<const Date> dates, std::string symbol, double period, double level,
                                   double amplitude) {
  std::vector<double> closes;
  for (std::size_t i = 0; i < dates.size(); ++i)
    closes.push_back(level + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period));
  return flat_bars(std::move(symbol), dates, closes);
}

}  // namespace oilcast::experiment
