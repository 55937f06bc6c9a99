#include <gtest/gtest.h>

#include <cmath>

#include "sentivol/errors.hpp"
#include "sentivol/regression.hpp"
#include "sentivol/report.hpp"
#include "test_support.hpp"

using namespace sentivol;
using sentivol::testing::normal_draws;
using sentivol::testing::normal_equations;
using sentivol::testing::rel_diff;
using sentivol::testing::series_of;
using sentivol::testing::uniform_draws;
using sentivol::testing::values_of;

namespace {

ObservationSeries ar1_returns(double phi, std::size_t n, std::uint64_t seed) {
  const auto e = normal_draws(n + 200, seed);
  std::vector<double> r(n + 200);
  r[0] = e[0];
  for (std::size_t t = 1; t < r.size(); ++t) r[t] = 0.02 + phi * r[t - 1] + e[t];
  return series_of(std::vector<double>(r.begin() + 200, r.end()), std::string(kUnitPercentReturn));
}

SentimentSeries sentiment_on(const ObservationSeries& like, std::vector<double> values,
                             IndicatorKind kind = IndicatorKind::SVIX) {
  return {ObservationSeries(std::vector<Date>(like.dates().begin(), like.dates().end()), std::move(values)), kind};
}

}  // namespace

TEST(Ols, ExactLinearData) {
  const auto x = uniform_draws(50, 1, -5.0, 5.0);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 + 3.0 * x[i];
  const auto fit = ols(y, {x});
  EXPECT_NEAR(fit.coefficients[0], 2.0, 1e-10);
  EXPECT_NEAR(fit.coefficients[1], 3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(Ols, ConstantDependent) {
  const auto x = uniform_draws(40, 2, 0.0, 1.0);
  const std::vector<double> y(40, 4.25);
  const auto fit = ols(y, {x});
  EXPECT_NEAR(fit.coefficients[1], 0.0, 1e-12);
  EXPECT_NEAR(fit.coefficients[0], 4.25, 1e-12);
  EXPECT_TRUE(std::isnan(fit.r_squared));
}

TEST(Ols, MatchesNormalEquations) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = normal_draws(100, 100 + seed, 1.0, 2.0);
    const auto e = normal_draws(100, 200 + seed);
    std::vector<double> y(100);
    for (std::size_t i = 0; i < 100; ++i) y[i] = 0.3 - 1.7 * x[i] + e[i];
    const auto fit = ols(y, {x});
    const auto oracle = normal_equations(y, {x});
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LT(rel_diff(fit.coefficients[j], oracle.beta[j]), 1e-10);
      EXPECT_LT(rel_diff(fit.standard_errors[j], oracle.se[j]), 1e-10);
    }
    EXPECT_LT(rel_diff(fit.r_squared, oracle.r_squared), 1e-10);
    EXPECT_LT(rel_diff(fit.adjusted_r_squared, oracle.adjusted_r_squared), 1e-10);
  }
}

TEST(Ols, FitInvariants) {
  const auto x1 = normal_draws(200, 3);
  const auto x2 = normal_draws(200, 4, 5.0, 3.0);
  const auto e = normal_draws(200, 5);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = 1.0 + 0.5 * x1[i] - 0.2 * x2[i] + e[i];
  const auto fit = ols(y, {x1, x2});
  ASSERT_EQ(fit.k(), 3u);
  EXPECT_EQ(fit.dof(), 197u);
  for (std::size_t j = 0; j < fit.k(); ++j) EXPECT_EQ(fit.t_stats[j], fit.coefficients[j] / fit.standard_errors[j]);
  EXPECT_LE(fit.adjusted_r_squared, fit.r_squared);
  EXPECT_LE(fit.r_squared, 1.0);
  double scale = 0.0;
  for (double v : y) scale += v * v;
  double dot0 = 0.0, dot1 = 0.0, dot2 = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    EXPECT_NEAR(fit.residuals.value(i) + fit.fitted.value(i), y[i], 1e-12);
    dot0 += fit.residuals.value(i);
    dot1 += fit.residuals.value(i) * x1[i];
    dot2 += fit.residuals.value(i) * x2[i];
  }
  EXPECT_LT(std::fabs(dot0), 1e-8 * std::sqrt(scale));
  EXPECT_LT(std::fabs(dot1), 1e-8 * std::sqrt(scale));
  EXPECT_LT(std::fabs(dot2), 1e-8 * std::sqrt(scale));
}

TEST(Ols, ScalingDependentScalesCoefficients) {
  const auto x = normal_draws(120, 6);
  const auto e = normal_draws(120, 7);
  std::vector<double> y(120), yc(120);
  const double c = -3.7;
  for (std::size_t i = 0; i < 120; ++i) {
    y[i] = 2.0 + x[i] + e[i];
    yc[i] = c * y[i];
  }
  const auto a = ols(y, {x});
  const auto b = ols(yc, {x});
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LT(rel_diff(b.coefficients[j], c * a.coefficients[j]), 1e-12);
    EXPECT_LT(rel_diff(b.standard_errors[j], std::fabs(c) * a.standard_errors[j]), 1e-12);
    EXPECT_LT(rel_diff(b.t_stats[j], std::copysign(1.0, c) * a.t_stats[j]), 1e-12);
    EXPECT_LT(rel_diff(b.p_values[j], a.p_values[j]), 1e-12);
  }
  EXPECT_LT(rel_diff(b.r_squared, a.r_squared), 1e-12);
}

TEST(Ols, IrrelevantRegressorNeverLowersRSquared) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = normal_draws(80, 300 + seed);
    const auto z = normal_draws(80, 400 + seed);
    const auto e = normal_draws(80, 500 + seed);
    std::vector<double> y(80);
    for (std::size_t i = 0; i < 80; ++i) y[i] = x[i] + e[i];
    EXPECT_GE(ols(y, {x, z}).r_squared, ols(y, {x}).r_squared - 1e-15);
  }
}

TEST(Ols, Errors) {
  EXPECT_THROW(ols(std::vector<double>{1, 2, 3}, {{1, 2, 3}}), InsufficientData);
  const std::vector<double> y{1, 2, 3, 4, 5, 6};
  EXPECT_THROW(ols(y, {{1, 1, 1, 1, 1, 1}}), SingularDesign);
  EXPECT_THROW(ols(y, {{1, 2, 3, 4, 5, 6}, {2, 4, 6, 8, 10, 12}}), SingularDesign);
  EXPECT_THROW(ols(y, {{1, 2, 3}}), InvalidInput);
}

TEST(Ols, WithoutIntercept) {
  const auto x = uniform_draws(30, 8, 1.0, 2.0);
  std::vector<double> y(30);
  for (std::size_t i = 0; i < 30; ++i) y[i] = 4.0 * x[i];
  OlsOptions opts;
  opts.include_intercept = false;
  const auto fit = ols(y, {x}, opts);
  ASSERT_EQ(fit.k(), 1u);
  EXPECT_NEAR(fit.coefficients[0], 4.0, 1e-12);
}

// Sandwich (X'X)^-1 X' diag(e^2) X (X'X)^-1 scaled by N/(N-k), built from the explicit inverse.
TEST(Ols, Hc1MatchesExplicitSandwich) {
  const auto x = normal_draws(150, 9);
  const auto e = normal_draws(150, 10);
  std::vector<double> y(150);
  for (std::size_t i = 0; i < 150; ++i) y[i] = 1.0 + 2.0 * x[i] + (1.0 + std::fabs(x[i])) * e[i];
  OlsOptions opts;
  opts.covariance = CovarianceType::HC1;
  const auto fit = ols(y, {x}, opts);
  const auto oracle = normal_equations(y, {x});
  std::vector<std::vector<double>> xtx{{0, 0}, {0, 0}}, meat{{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < 150; ++i) {
    const double row[2] = {1.0, x[i]};
    const double r = y[i] - oracle.beta[0] - oracle.beta[1] * x[i];
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        xtx[a][b] += row[a] * row[b];
        meat[a][b] += r * r * row[a] * row[b];
      }
    }
  }
  const auto inv = sentivol::testing::invert(xtx);
  for (int j = 0; j < 2; ++j) {
    double v = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) v += inv[j][a] * meat[a][b] * inv[b][j];
    }
    v *= 150.0 / 148.0;
    EXPECT_LT(rel_diff(fit.standard_errors[j], std::sqrt(v)), 1e-10);
  }
}

TEST(StudentT, KnownQuantiles) {
  EXPECT_NEAR(student_t_two_sided_p(2.228138851986274, 10), 0.05, 1e-9);
  EXPECT_NEAR(student_t_two_sided_p(-2.228138851986274, 10), 0.05, 1e-9);
  EXPECT_NEAR(student_t_two_sided_p(0.0, 5), 1.0, 1e-15);
  EXPECT_NEAR(student_t_two_sided_p(1.959963984540054, 1e7), 0.05, 1e-6);
  EXPECT_TRUE(std::isnan(student_t_two_sided_p(NAN, 10)));
}

TEST(StageOne, MatchesOracleOnAr1Data) {
  const auto r = ar1_returns(0.19, 3000, 42);
  const auto fit = stage_one(r);
  EXPECT_EQ(fit.n, 2999u);
  EXPECT_EQ(fit.residuals.date(0), r.date(1));
  const auto v = values_of(r);
  const auto oracle = normal_equations(std::vector<double>(v.begin() + 1, v.end()),
                                       {std::vector<double>(v.begin(), v.end() - 1)});
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LT(rel_diff(fit.coefficients[j], oracle.beta[j]), 1e-10);
    EXPECT_LT(rel_diff(fit.standard_errors[j], oracle.se[j]), 1e-10);
  }
}

TEST(StageOne, Ar1CoefficientCoverage) {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto fit = stage_one(ar1_returns(0.19, 3000, 500 + seed));
    if (std::fabs(fit.coefficients[1] - 0.19) < 3.0 * fit.standard_errors[1]) ++covered;
  }
  EXPECT_GE(covered, 97);
}

TEST(StageOne, SizeUnderIidReturns) {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto fit = stage_one(series_of(normal_draws(3000, 1000 + seed)));
    if (std::fabs(fit.t_stats[1]) >= 3.0) ++rejections;
  }
  EXPECT_LE(rejections, 1);
}

TEST(StageOne, Errors) {
  EXPECT_THROW(stage_one(series_of(std::vector<double>(100, 0.1))), SingularDesign);
  EXPECT_THROW(stage_one(series_of(normal_draws(20, 1))), InsufficientData);
  EXPECT_NO_THROW(stage_one(series_of(normal_draws(20, 1)), 10));
}

TEST(SquaredResiduals, Examples) {
  const auto r = ar1_returns(0.1, 500, 3);
  const auto fit = stage_one(r);
  const auto sq = squared_residuals(fit);
  ASSERT_EQ(sq.size(), fit.residuals.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    EXPECT_EQ(sq.value(i), fit.residuals.value(i) * fit.residuals.value(i));
    EXPECT_GE(sq.value(i), 0.0);
    sum += sq.value(i);
  }
  EXPECT_LT(rel_diff(sum / static_cast<double>(sq.size()), fit.rss / static_cast<double>(fit.n)), 1e-12);

  RegressionFit hand;
  hand.residuals = series_of({1.0, -2.0});
  const auto s2 = squared_residuals(hand);
  EXPECT_EQ(s2.value(0), 1.0);
  EXPECT_EQ(s2.value(1), 4.0);
  hand.residuals = series_of({0.0, 0.0});
  EXPECT_EQ(squared_residuals(hand).value(1), 0.0);
}

TEST(StageTwo, UncorrelatedSentimentHasZeroSlope) {
  const auto fit = stage_one(ar1_returns(0.1, 3001, 5));
  const auto sq = squared_residuals(fit);
  const auto sent = sentiment_on(sq, uniform_draws(sq.size(), 6, 15.0, 30.0));
  const auto two = stage_two(sq, sent);
  EXPECT_LT(std::fabs(two.coefficients[1]), 3.0 * two.standard_errors[1]);
}

// Noise sd 0.01 against SENT ~ U(0, 10) gives a slope SE near 6e-5, so 1e-3 is about 16 SE.
TEST(StageTwo, PlantedSignal) {
  const auto sent_values = uniform_draws(3000, 7, 0.0, 10.0);
  const auto noise = normal_draws(3000, 8, 0.0, 0.01);
  std::vector<double> sq(3000);
  for (std::size_t i = 0; i < 3000; ++i) sq[i] = 0.5 + 0.1 * sent_values[i] + noise[i];
  const auto sq_series = series_of(sq);
  const auto fit = stage_two(sq_series, sentiment_on(sq_series, sent_values));
  EXPECT_EQ(fit.n, 3000u);
  EXPECT_NEAR(fit.coefficients[1], 0.1, 1e-3);
  EXPECT_NEAR(fit.coefficients[0], 0.5, 1e-2);
}

TEST(StageTwo, PlantedSignSeenAcrossSeeds) {
  int positive = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = uniform_draws(3000, 2000 + seed, 0.0, 10.0);
    const auto noise = normal_draws(3000, 3000 + seed, 0.0, 0.01);
    std::vector<double> sq(3000);
    for (std::size_t i = 0; i < 3000; ++i) sq[i] = 0.5 + 0.1 * s[i] + noise[i];
    const auto sqs = series_of(sq);
    if (stage_two(sqs, sentiment_on(sqs, s)).coefficients[1] > 0.0) ++positive;
  }
  EXPECT_GE(positive, 99);
}

TEST(StageTwo, AlignsOnCommonDates) {
  const auto sq = series_of(uniform_draws(100, 9, 0.0, 1.0));
  std::vector<Date> dates;
  std::vector<double> vals;
  const auto u = uniform_draws(100, 10, 0.0, 1.0);
  for (std::size_t i = 0; i < 100; i += 2) {
    dates.push_back(sq.date(i));
    vals.push_back(u[i]);
  }
  const SentimentSeries sent(ObservationSeries(dates, vals), IndicatorKind::SMSI);
  const auto fit = stage_two(sq, sent);
  EXPECT_EQ(fit.n, 50u);
  EXPECT_EQ(fit.residuals.date(1), sq.date(2));
}

TEST(StageTwo, InsufficientOverlap) {
  const auto sq = series_of(uniform_draws(100, 11, 0.0, 1.0));
  const auto cal = synthetic_calendar(20, parse_date("2010-01-04"));
  const SentimentSeries disjoint(ObservationSeries(cal, std::vector<double>(20, 1.0)), IndicatorKind::SVIX);
  try {
    stage_two(sq, disjoint);
    FAIL();
  } catch (const InsufficientData& e) {
    EXPECT_EQ(e.actual(), 0u);
  }
}

TEST(TwoStageReport, FailedProxyIsReportedInTable) {
  const auto r = ar1_returns(0.1, 400, 12);
  const auto good = sentiment_on(r, uniform_draws(r.size(), 13, 10.0, 20.0), IndicatorKind::SVIX);
  const auto short_cal = std::vector<Date>(r.dates().begin(), r.dates().begin() + 10);
  const SentimentSeries bad(ObservationSeries(short_cal, std::vector<double>(10, 1.0)), IndicatorKind::SMSI);
  const auto report = two_stage_report("stock", r, {good, bad});
  ASSERT_EQ(report.proxies.size(), 2u);
  EXPECT_TRUE(report.proxies[0].fit.has_value());
  EXPECT_FALSE(report.proxies[1].fit.has_value());
  EXPECT_FALSE(report.proxies[1].error.empty());

  const auto text = render_text(report);
  EXPECT_NE(text.find("SVIX"), std::string::npos);
  EXPECT_NE(text.find("SMSI"), std::string::npos);
  EXPECT_NE(text.find("Panel B"), std::string::npos);

  const auto empty = two_stage_report("stock", r, {});
  EXPECT_TRUE(empty.proxies.empty());
  EXPECT_TRUE(two_stage_to_json(empty)["panel_b"].empty());
}

TEST(TwoStageReport, JsonNumbersEqualFitFields) {
  const auto r = ar1_returns(0.2, 600, 14);
  const auto sent = sentiment_on(r, uniform_draws(r.size(), 15, 10.0, 20.0));
  const auto report = two_stage_report("stock", r, {sent});
  const auto j = Json::parse(two_stage_to_json(report).dump());
  const auto& a = j["panel_a"];
  EXPECT_EQ(a["n"].get<std::size_t>(), report.stage_one.n);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a["terms"][i]["coefficient"].get<double>(), report.stage_one.coefficients[i]);
    EXPECT_EQ(a["terms"][i]["std_error"].get<double>(), report.stage_one.standard_errors[i]);
    EXPECT_EQ(a["terms"][i]["t_stat"].get<double>(), report.stage_one.t_stats[i]);
    EXPECT_EQ(a["terms"][i]["p_value"].get<double>(), report.stage_one.p_values[i]);
  }
  EXPECT_EQ(a["adjusted_r_squared"].get<double>(), report.stage_one.adjusted_r_squared);
  const auto& b = j["panel_b"][0]["fit"];
  EXPECT_EQ(b["terms"][1]["coefficient"].get<double>(), report.proxies[0].fit->coefficients[1]);
  EXPECT_EQ(b["terms"][1]["name"], "SVIX");
}

TEST(TwoStageReport, CsvHasOneRowPerTerm) {
  const auto r = ar1_returns(0.2, 300, 16);
  const auto sent = sentiment_on(r, uniform_draws(r.size(), 17, 10.0, 20.0));
  const auto csv = render_csv(two_stage_report("stock", r, {sent}));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.find('*'), std::string::npos);
}
