#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sentivol/errors.hpp"
#include "sentivol/timeseries.hpp"
#include "test_support.hpp"

using namespace sentivol;
using sentivol::testing::values_of;
using sentivol::testing::normal_draws;
using sentivol::testing::series_of;
using sentivol::testing::uniform_draws;

TEST(Dates, ParseFormatRoundTrip) {
  const auto d = parse_date("2008-09-01");
  EXPECT_EQ(format_date(d), "2008-09-01");
  EXPECT_THROW(parse_date("2008-02-30"), InvalidInput);
  EXPECT_THROW(parse_date("2008/09/01"), InvalidInput);
  EXPECT_THROW(parse_date("20080901"), InvalidInput);
}

TEST(Dates, SyntheticCalendarSkipsWeekends) {
  const auto cal = synthetic_calendar(10);
  ASSERT_EQ(cal.size(), 10u);
  EXPECT_EQ(format_date(cal.front()), "2000-01-03");
  for (const auto& d : cal) {
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    EXPECT_NE(wd, std::chrono::Saturday);
    EXPECT_NE(wd, std::chrono::Sunday);
  }
  EXPECT_EQ(format_date(cal[5]), "2000-01-10");
}

TEST(ObservationSeries, RejectsInvariantViolations) {
  const auto cal = synthetic_calendar(3);
  EXPECT_THROW(ObservationSeries(cal, {1.0, 2.0}), InvalidInput);
  EXPECT_THROW(ObservationSeries(cal, {1.0, NAN, 2.0}), InvalidInput);
  EXPECT_THROW(ObservationSeries(cal, {1.0, INFINITY, 2.0}), InvalidInput);
  EXPECT_THROW(ObservationSeries({cal[1], cal[0], cal[2]}, {1.0, 2.0, 3.0}), InvalidInput);
  EXPECT_THROW(ObservationSeries({cal[0], cal[0], cal[2]}, {1.0, 2.0, 3.0}), InvalidInput);
}

TEST(ObservationSeries, BetweenIsInclusive) {
  const auto s = series_of({1, 2, 3, 4, 5});
  const auto sub = s.between(s.date(1), s.date(3));
  ASSERT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub.value(0), 2.0);
  EXPECT_EQ(sub.value(2), 4.0);
  EXPECT_TRUE(s.between(parse_date("2100-01-01"), parse_date("2100-12-31")).empty());
}

TEST(SimpleReturns, HandExample) {
  const auto r = simple_returns(series_of({100.0, 101.0, 100.495}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r.value(0), 1.0, 1e-12);
  EXPECT_NEAR(r.value(1), -0.5, 1e-12);
  EXPECT_EQ(r.unit(), kUnitPercentReturn);
}

TEST(SimpleReturns, ConstantPricesGiveZeros) {
  const auto r = simple_returns(series_of({50, 50, 50}));
  EXPECT_EQ(std::vector<double>(r.values().begin(), r.values().end()), (std::vector<double>{0.0, 0.0}));
}

TEST(SimpleReturns, MatchesElementwiseRecomputation) {
  const auto prices = uniform_draws(30, 11, 10.0, 200.0);
  const auto s = series_of(prices);
  const auto r = simple_returns(s);
  ASSERT_EQ(r.size(), 29u);
  for (std::size_t t = 1; t < prices.size(); ++t) {
    EXPECT_NEAR(r.value(t - 1), 100.0 * (prices[t] / prices[t - 1] - 1.0), 1e-12);
    EXPECT_EQ(r.date(t - 1), s.date(t));
  }
}

TEST(SimpleReturns, Errors) {
  EXPECT_THROW(simple_returns(series_of({100.0})), InsufficientData);
  EXPECT_THROW(simple_returns(series_of({})), InsufficientData);
  try {
    simple_returns(series_of({100.0, 0.0, 3.0}));
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("2000-01-04"), std::string::npos) << e.what();
  }
  EXPECT_THROW(simple_returns(series_of({100.0, -1.0})), InvalidInput);
}

// Scaling by a power of two is exact in binary floating point, so equality is bitwise.
TEST(SimpleReturns, ScaleInvariance) {
  const auto prices = uniform_draws(200, 5, 1.0, 1000.0);
  const auto base = simple_returns(series_of(prices));
  for (double k : {0.25, 2.0, 1024.0}) {
    auto scaled = prices;
    for (auto& p : scaled) p *= k;
    EXPECT_EQ(simple_returns(series_of(scaled)), base) << "k = " << k;
  }
  for (double k : {0.37, 3.0, 1234.5}) {
    auto scaled = prices;
    for (auto& p : scaled) p *= k;
    const auto r = simple_returns(series_of(scaled));
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r.value(i), base.value(i), 1e-12);
  }
}

TEST(MovingAverage, Examples) {
  const auto ma = moving_average(series_of({1, 2, 3, 4, 5}), 3);
  ASSERT_EQ(ma.size(), 3u);
  EXPECT_DOUBLE_EQ(ma.value(0), 2.0);
  EXPECT_DOUBLE_EQ(ma.value(1), 3.0);
  EXPECT_DOUBLE_EQ(ma.value(2), 4.0);
  const auto s = series_of(normal_draws(20, 3));
  EXPECT_EQ(moving_average(s, 1).values().size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(moving_average(s, 1).value(i), s.value(i));
}

TEST(MovingAverage, ConstantIsExact) {
  const auto s = series_of(std::vector<double>(600, 1234.56789));
  for (std::size_t w : {1u, 5u, 250u}) {
    for (double v : values_of(moving_average(s, w))) EXPECT_EQ(v, 1234.56789);
  }
}

TEST(MovingAverage, MatchesDirectMeanAndLength) {
  const auto x = normal_draws(800, 17, 100.0, 5.0);
  const auto s = series_of(x);
  for (std::size_t w : {2u, 7u, 250u}) {
    const auto ma = moving_average(s, w);
    ASSERT_EQ(ma.size(), x.size() - w + 1);
    for (std::size_t t = w - 1; t < x.size(); ++t) {
      const double direct = std::accumulate(x.begin() + (t + 1 - w), x.begin() + t + 1, 0.0) / w;
      EXPECT_NEAR(ma.value(t + 1 - w), direct, 1e-10);
      EXPECT_EQ(ma.date(t + 1 - w), s.date(t));
    }
  }
}

TEST(MovingAverage, Errors) {
  EXPECT_THROW(moving_average(series_of({1, 2}), 0), InvalidInput);
  try {
    moving_average(series_of({1, 2}), 3);
    FAIL();
  } catch (const InsufficientData& e) {
    EXPECT_EQ(e.required(), 3u);
    EXPECT_EQ(e.actual(), 2u);
  }
}

TEST(RollingStd, Examples) {
  const auto r = rolling_std(series_of({1, 2, 3}), 3);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r.value(0), 1.0);
  for (double v : values_of(rolling_std(series_of(std::vector<double>(50, 0.3)), 20))) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(rolling_std(series_of({1, 2, 3}), 1), InvalidInput);
  EXPECT_THROW(rolling_std(series_of({1, 2, 3}), 4), InsufficientData);
}

TEST(RollingStd, MatchesTwoPassOracle) {
  const auto x = normal_draws(500, 23);
  const auto r = rolling_std(series_of(x), 250);
  ASSERT_EQ(r.size(), 251u);
  for (std::size_t j = 0; j < r.size(); ++j) {
    double mean = 0.0;
    for (std::size_t i = j; i < j + 250; ++i) mean += x[i];
    mean /= 250.0;
    double ss = 0.0;
    for (std::size_t i = j; i < j + 250; ++i) ss += (x[i] - mean) * (x[i] - mean);
    EXPECT_NEAR(r.value(j), std::sqrt(ss / 249.0), 1e-10);
  }
}

TEST(RollingStd, LargeOffsetStaysAccurate) {
  auto x = normal_draws(400, 29, 0.0, 1e-3);
  for (auto& v : x) v += 1e6;
  const auto r = rolling_std(series_of(x), 20);
  for (std::size_t j = 0; j < r.size(); ++j) {
    double mean = 0.0;
    for (std::size_t i = j; i < j + 20; ++i) mean += x[i];
    mean /= 20.0;
    double ss = 0.0;
    for (std::size_t i = j; i < j + 20; ++i) ss += (x[i] - mean) * (x[i] - mean);
    EXPECT_NEAR(r.value(j), std::sqrt(ss / 19.0), 1e-9);
  }
}

TEST(Diff, Examples) {
  const auto d = diff(series_of({3, 5, 4}));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.value(0), 2.0);
  EXPECT_EQ(d.value(1), -1.0);
  for (double v : values_of(diff(series_of({7, 7, 7, 7})))) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(diff(series_of({1})), InsufficientData);
}

TEST(Diff, PrefixSumRoundTrip) {
  const auto x = normal_draws(1000, 31, 5.0, 2.0);
  const auto d = diff(series_of(x));
  double acc = x[0];
  for (std::size_t t = 1; t < x.size(); ++t) {
    acc += d.value(t - 1);
    EXPECT_NEAR(acc, x[t], 1e-12 * std::max(std::fabs(x[t]), 1.0) * 10);
  }
}

TEST(Align, Cases) {
  const auto a = series_of(normal_draws(10, 1));
  const auto same = align(a, a);
  ASSERT_EQ(same.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(same.left[i], a.value(i));
    EXPECT_EQ(same.right[i], a.value(i));
  }

  const auto cal = synthetic_calendar(20);
  const ObservationSeries early(std::vector<Date>(cal.begin(), cal.begin() + 10), normal_draws(10, 2));
  const ObservationSeries late(std::vector<Date>(cal.begin() + 10, cal.end()), normal_draws(10, 3));
  EXPECT_TRUE(align(early, late).empty());

  std::vector<Date> even;
  std::vector<double> vals;
  for (std::size_t i = 0; i < 10; i += 2) {
    even.push_back(a.date(i));
    vals.push_back(100.0 + static_cast<double>(i));
  }
  const auto pair = align(a, ObservationSeries(even, vals));
  ASSERT_EQ(pair.size(), 5u);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(pair.dates[j], a.date(2 * j));
    EXPECT_EQ(pair.left[j], a.value(2 * j));
    EXPECT_EQ(pair.right[j], vals[j]);
  }
}

TEST(Align, CommutesUpToSwap) {
  const auto cal = synthetic_calendar(60);
  std::vector<Date> da, db;
  std::vector<double> va, vb;
  const auto u = uniform_draws(60, 8, 0.0, 1.0);
  for (std::size_t i = 0; i < 60; ++i) {
    if (u[i] < 0.7) {
      da.push_back(cal[i]);
      va.push_back(u[i]);
    }
    if (u[i] > 0.3) {
      db.push_back(cal[i]);
      vb.push_back(-u[i]);
    }
  }
  const ObservationSeries a(da, va), b(db, vb);
  const auto ab = align(a, b);
  const auto ba = align(b, a);
  EXPECT_EQ(ab.dates, ba.dates);
  EXPECT_EQ(ab.left, ba.right);
  EXPECT_EQ(ab.right, ba.left);
  std::size_t expected = 0;
  for (double x : u) expected += (x < 0.7 && x > 0.3) ? 1 : 0;
  EXPECT_EQ(ab.size(), expected);
}

TEST(Align, AlignAllIntersectsEverySeries) {
  const auto cal = synthetic_calendar(10);
  const ObservationSeries a(std::vector<Date>(cal.begin(), cal.begin() + 8), normal_draws(8, 1));
  const ObservationSeries b(std::vector<Date>(cal.begin() + 2, cal.end()), normal_draws(8, 2));
  const ObservationSeries c(std::vector<Date>(cal.begin() + 1, cal.begin() + 7), normal_draws(6, 3));
  const std::vector<ObservationSeries> all{a, b, c};
  const auto out = align_all(all);
  ASSERT_EQ(out.size(), 3u);
  for (const auto& s : out) {
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(s.date(0), cal[2]);
    EXPECT_EQ(s.date(4), cal[6]);
  }
  EXPECT_EQ(out[1].value(0), b.value(0));
}

TEST(LagPair, Examples) {
  const auto s = series_of({1, 2, 3});
  const auto p = lag_pair(s);
  EXPECT_EQ(p.left, (std::vector<double>{2, 3}));
  EXPECT_EQ(p.right, (std::vector<double>{1, 2}));
  EXPECT_EQ(p.dates[0], s.date(1));
  const auto c = lag_pair(series_of({4, 4, 4, 4}));
  EXPECT_EQ(c.left, c.right);
  EXPECT_THROW(lag_pair(series_of({1})), InsufficientData);
}
