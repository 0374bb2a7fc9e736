#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oilcast/data/frame.hpp"
#include "oilcast/data/scaler.hpp"
#include "oilcast/data/series.hpp"
#include "oilcast/data/supervised.hpp"
#include "oilcast/error.hpp"
#include "oilcast/format.hpp"
#include "test_support.hpp"

using namespace oilcast;
using namespace oilcast::testing;

// ---- format / date ----------------------------------------------------------------

TEST(Format, ShortestRealRoundTripsRandomDoubles) {
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.index(200)) - 100);
    EXPECT_EQ(parse_real(format_real(v)), v);
  }
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(250.0), "250");
}

TEST(Format, FixedNeverPrintsNegativeZero) {
  EXPECT_EQ(format_fixed(-0.0001, 2), "0.00");
  EXPECT_EQ(format_fixed(1.005, 1), "1.0");
  EXPECT_EQ(format_fixed(-2.5, 3), "-2.500");
}

TEST(Format, ParseRealRejectsGarbage) {
  EXPECT_EQ(parse_real("+1.5"), 1.5);
  EXPECT_THROW(parse_real("1.5x"), ParseError);
  EXPECT_THROW(parse_real(""), ParseError);
  try {
    parse_real("abc", 7);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
  }
}

TEST(Date, ParsesStrictIsoDays) {
  EXPECT_EQ(parse_date("2020-07-20"), day(2020, 7, 20));
  EXPECT_EQ(format_date(day(2009, 8, 3)), "2009-08-03");
  EXPECT_THROW(parse_date("2021-02-30"), ParseError);
  EXPECT_THROW(parse_date("2021-2-03"), ParseError);
  EXPECT_THROW(parse_date("20210203"), ParseError);
}

// ---- parse_csv ------------------------------------------------------------------

constexpr const char* kFiveRows =
    "date,open,high,low,close,volume\n"
    "2020-01-06,10.5,11.25,10.125,11,1200\n"
    "2020-01-02,10,10.75,9.5,10.25,1000\n"
    "2020-01-03,10.25,10.5,9.875,10.0625,900\n"
    "2020-01-07,11,11.5,10.75,11.375,1500\n"
    "2020-01-08,11.375,12,11.25,11.875,1100\n";

TEST(ParseCsv, SortsRowsByDate) {
  const auto s = data::parse_csv(std::string_view("date,open,high,low,close\n"
                                                  "2020-01-03,2,3,1,2\n"
                                                  "2020-01-02,1,2,0.5,1.5\n"),
                                 "X");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.bars[0].date, day(2020, 1, 2));
  EXPECT_EQ(s.bars[1].date, day(2020, 1, 3));
  EXPECT_FALSE(s.has_volume());
}

TEST(ParseCsv, HighBelowLowNamesTheDate) {
  try {
    data::parse_csv(std::string_view("date,open,high,low,close\n2020-03-04,2,1,3,2\n"), "X");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2020-03-04"), std::string::npos);
  }
}

TEST(ParseCsv, RejectsDuplicatesAndNonPositivePrices) {
  EXPECT_THROW(data::parse_csv(std::string_view("date,open,high,low,close\n2020-01-02,1,2,1,1\n2020-01-02,1,2,1,1\n"), "X"),
               DataError);
  EXPECT_THROW(data::parse_csv(std::string_view("date,open,high,low,close\n2020-01-02,0,2,0,1\n"), "X"), DataError);
}

TEST(ParseCsv, MalformedRowReportsLine) {
  try {
    data::parse_csv(std::string_view("date,open,high,low,close\n2020-01-02,1,2,1,1\n2020-01-03,1,2,oops,1\n"), "X");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(data::parse_csv(std::string_view("day,open,high,low,close\n"), "X"), ParseError);
  EXPECT_THROW(data::parse_csv(std::string_view("date,open,high,low,close\n2020-01-02,1,2,1\n"), "X"), ParseError);
}

TEST(ParseCsv, FiveRowFixtureRoundTripsBitExactly) {
  const auto s = data::parse_csv(std::string_view(kFiveRows), "X");
  const std::string canonical = data::serialize_csv(s);
  const auto again = data::parse_csv(std::string_view(canonical), "X");
  EXPECT_EQ(again, s);
  EXPECT_EQ(data::serialize_csv(again), canonical);
  EXPECT_EQ(s.closes(), (std::vector<double>{10.25, 10.0625, 11, 11.375, 11.875}));
}

TEST(ParseCsv, RandomSeriesRoundTrip) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_series(rng, "R", 1 + rng.index(40), day(2015, 1, 1), trial % 2 == 0);
    EXPECT_EQ(data::parse_csv(std::string_view(data::serialize_csv(s)), "R"), s);
  }
}

TEST(SeriesFile, SymbolDefaultsToStem) {
  TempDir dir;
  Rng rng(3);
  const auto s = random_series(rng, "BP.L", 5, day(2020, 1, 1));
  data::write_series_file(dir / "BP.L.csv", s);
  EXPECT_EQ(data::read_series_file(dir / "BP.L.csv"), s);
}

// ---- align ----------------------------------------------------------------------

TEST(Align, IdenticalDatesKeepEverything) {
  Rng rng(4);
  const std::vector<data::OhlcvSeries> list{random_series(rng, "A", 10, day(2020, 1, 1)),
                                            random_series(rng, "B", 10, day(2020, 1, 1))};
  const auto f = data::align(list);
  EXPECT_EQ(f.rows(), 10u);
  EXPECT_EQ(f.column_names(), (std::vector<std::string>{"A.open", "A.high", "A.low", "A.close", "A.volume", "B.open",
                                                        "B.high", "B.low", "B.close", "B.volume"}));
}

TEST(Align, OverlapIsTheIntersection) {
  Rng rng(5);
  const std::vector<data::OhlcvSeries> list{random_series(rng, "A", 3, day(2020, 1, 1), false),
                                            random_series(rng, "B", 3, day(2020, 1, 2), false)};
  const auto f = data::align(list);
  EXPECT_EQ(f.dates(), (std::vector<Date>{day(2020, 1, 2), day(2020, 1, 3)}));
  EXPECT_EQ(f.column("B.close")[0], list[1].bars[0].close);
  EXPECT_EQ(f.column("A.close")[0], list[0].bars[1].close);
}

TEST(Align, DisjointDatesFail) {
  Rng rng(6);
  const std::vector<data::OhlcvSeries> list{random_series(rng, "A", 3, day(2020, 1, 1)),
                                            random_series(rng, "B", 3, day(2021, 1, 1))};
  EXPECT_THROW(data::align(list), DataError);
  EXPECT_THROW(data::align(std::vector<data::OhlcvSeries>{}), DataError);
}

data::OhlcvSeries with_gaps(Rng& rng, const std::string& symbol) {
  auto s = random_series(rng, symbol, 60, day(2020, 1, 1), false);
  std::vector<data::OhlcvBar> kept;
  for (const auto& b : s.bars)
    if (!rng.bernoulli(0.3)) kept.push_back(b);
  s.bars = std::move(kept);
  return s;
}

TEST(Align, PropertyMatchesSetIntersectionAndCommutes) {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::vector<data::OhlcvSeries> abc{with_gaps(rng, "A"), with_gaps(rng, "B"), with_gaps(rng, "C")};
    std::vector<Date> expected;
    for (const auto& b : abc[0].bars) {
      auto in = [&](const data::OhlcvSeries& s) {
        return std::any_of(s.bars.begin(), s.bars.end(), [&](const auto& x) { return x.date == b.date; });
      };
      if (in(abc[1]) && in(abc[2])) expected.push_back(b.date);
    }
    if (expected.empty()) continue;
    const auto f = data::align(abc);
    EXPECT_EQ(f.dates(), expected);
    const std::vector<data::OhlcvSeries> cba{abc[2], abc[1], abc[0]};
    EXPECT_EQ(data::align(cba).dates(), f.dates());
  }
}

// ---- split ----------------------------------------------------------------------

data::AlignedFrame counting_frame(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
  return data::AlignedFrame(calendar(day(2020, 1, 1), n), {{"X.close", v}});
}

TEST(Split, CountsRowsOnEachSide) {
  const auto f = counting_frame(10);
  const auto s = data::split_by_date(f, f.dates()[6], f.dates()[7], f.dates()[9]);
  EXPECT_EQ(s.train.rows(), 7u);
  EXPECT_EQ(s.test.rows(), 3u);
  EXPECT_LT(s.train.dates().back(), s.test.dates().front());
}

TEST(Split, PaperDateRanges) {
  const auto f = data::AlignedFrame(calendar(day(2020, 7, 1), 400), {{"X.close", std::vector<double>(400, 1.0)}});
  const auto s = data::split_by_date(f, day(2020, 7, 19), day(2020, 7, 20), day(2021, 7, 15));
  EXPECT_EQ(s.train.dates().back(), day(2020, 7, 19));
  EXPECT_EQ(s.test.dates().front(), day(2020, 7, 20));
  EXPECT_EQ(s.test.dates().back(), day(2021, 7, 15));
}

TEST(Split, RejectsBadOrderAndEmptyParts) {
  const auto f = counting_frame(10);
  EXPECT_THROW(data::split_by_date(f, f.dates()[7], f.dates()[6], f.dates()[9]), DataError);
  EXPECT_THROW(data::split_by_date(f, add_days(f.dates()[0], -5), f.dates()[0], f.dates()[9]), DataError);
  EXPECT_THROW(data::split_by_date(f, f.dates()[9], add_days(f.dates()[9], 1), add_days(f.dates()[9], 3)), DataError);
}

TEST(FrameCsv, RoundTrips) {
  Rng rng(8);
  const std::vector<data::OhlcvSeries> list{random_series(rng, "A", 12, day(2020, 1, 1)),
                                            random_series(rng, "B", 12, day(2020, 1, 3))};
  const auto f = data::align(list);
  EXPECT_EQ(data::parse_frame_csv(data::serialize_frame_csv(f)), f);
  EXPECT_THROW(f.column("nope"), DataError);
}

// ---- scaler ---------------------------------------------------------------------

TEST(Scaler, MapsRangeToUnitInterval) {
  const data::AlignedFrame f(calendar(day(2020, 1, 1), 3), {{"c", {2, 4, 6}}});
  const auto p = data::fit_scaler(f);
  const auto scaled = data::apply_scaler(f, p);
  const auto c = scaled.column("c");
  EXPECT_EQ(std::vector<double>(c.begin(), c.end()), (std::vector<double>{0, 0.5, 1}));
}

TEST(Scaler, ExtrapolatesAboveTrainingMax) {
  const data::AlignedFrame train(calendar(day(2020, 1, 1), 2), {{"c", {10, 20}}});
  const auto p = data::fit_scaler(train);
  const std::vector<double> test{25};
  EXPECT_DOUBLE_EQ(data::scale_values(test, "c", p)[0], 1.5);
}

TEST(Scaler, DegenerateColumnIsNamed) {
  const data::AlignedFrame f(calendar(day(2020, 1, 1), 3), {{"flat", {3, 3, 3}}, {"ok", {1, 2, 3}}});
  const auto p = data::fit_scaler(f);
  EXPECT_EQ(p.degenerate_columns(), std::vector<std::string>{"flat"});
  try {
    data::apply_scaler(f, p);
    FAIL();
  } catch (const DegenerateError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(Scaler, PropertyTrainInUnitIntervalAndExactInverse) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(100);
    const double lo = rng.uniform(-1e3, 1e3);
    auto v = random_vector(rng, n, lo, lo + rng.uniform(1e-3, 1e4));
    v[0] = lo - 1;  // guarantee a non-degenerate range
    const data::AlignedFrame f(calendar(day(2000, 1, 1), n), {{"c", v}});
    const auto p = data::fit_scaler(f);
    const auto scaled_frame = data::apply_scaler(f, p);
    const auto scaled = scaled_frame.column("c");
    for (double s : scaled) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
    const auto back = data::invert_scaler(scaled, "c", p);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(back[i] - v[i]), 1e-12 * std::max(1.0, std::abs(v[i])));
  }
}

TEST(Scaler, JsonRoundTrip) {
  const data::AlignedFrame f(calendar(day(2020, 1, 1), 3), {{"a", {0.1, 0.7, 0.3}}, {"b", {5, 5, 5}}});
  const auto p = data::fit_scaler(f);
  nlohmann::json j = p;
  EXPECT_EQ(j.at("kind"), "min-max");
  EXPECT_EQ(j.get<data::ScalerParams>(), p);
}

// ---- windows --------------------------------------------------------------------

TEST(Windows, ShapeForPaperLookback) {
  Rng rng(10);
  std::vector<data::AlignedFrame::Column> cols;
  std::vector<std::string> names;
  for (int k = 0; k < 6; ++k) {
    names.push_back("f" + std::to_string(k));
    cols.emplace_back(names.back(), random_vector(rng, 41));
  }
  const data::AlignedFrame f(calendar(day(2020, 1, 1), 41), cols);
  const auto t = data::make_supervised_windows(f, names, "f0", 40);
  EXPECT_EQ(t.samples(), 1u);
  EXPECT_EQ(t.lookback(), 40u);
  EXPECT_EQ(t.features(), 6u);
  EXPECT_EQ(t.inputs(0, 39, 5), f.column("f5")[39]);
  EXPECT_EQ(t.targets[0], f.column("f0")[40]);
}

TEST(Windows, IndexingContract) {
  const auto f = counting_frame(10);
  const std::vector<std::string> features{"X.close"};
  const auto t = data::make_supervised_windows(f, features, "X.close", 3);
  ASSERT_EQ(t.samples(), 7u);
  EXPECT_EQ(t.targets[0], 4.0);
  EXPECT_EQ(t.sample_dates[0], f.dates()[3]);
  for (std::size_t i = 0; i < t.samples(); ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t.inputs(i, j, 0), static_cast<double>(i + j + 1));
  EXPECT_THROW(data::make_supervised_windows(f, features, "X.close", 10), DataError);
  EXPECT_THROW(data::make_supervised_windows(f, features, "missing", 3), DataError);
}

TEST(Windows, PropertyTargetsAreTheShiftedColumn) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng.index(60);
    const std::size_t lookback = 1 + rng.index(n - 1);
    const auto v = random_vector(rng, n);
    const data::AlignedFrame f(calendar(day(2010, 1, 1), n), {{"y", v}, {"z", random_vector(rng, n)}});
    const std::vector<std::string> features{"z", "y"};
    const auto t = data::make_supervised_windows(f, features, "y", lookback);
    EXPECT_EQ(t.targets, std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(lookback), v.end()));
    for (std::size_t i = 0; i < t.samples(); ++i) {
      EXPECT_EQ(t.sample_dates[i], f.dates()[i + lookback]);
      EXPECT_EQ(t.inputs(i, lookback - 1, 1), v[i + lookback - 1]);
    }
  }
}
