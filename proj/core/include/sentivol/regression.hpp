#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentivol/sentiment.hpp"
#include "sentivol/timeseries.hpp"

namespace sentivol {

enum class CovarianceType {
  Classical,  // s^2 (X'X)^-1
  HC1,        // White sandwich with N/(N-k) correction
};

struct OlsOptions {
  bool include_intercept = true;
  CovarianceType covariance = CovarianceType::Classical;
  /// Dates for residual and fitted series; a synthetic calendar is used when empty.
  std::vector<Date> dates;
};

/// OLS result. Coefficients are intercept first when an intercept is included.
/// t-statistics and p-values are NaN where the standard error is zero; R^2 is NaN
/// when the dependent variable has zero variation.
struct RegressionFit {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;  // two-sided, t distribution with N-k dof
  double r_squared = 0.0;
  double adjusted_r_squared = 0.0;
  double rss = 0.0;
  ObservationSeries residuals;
  ObservationSeries fitted;
  std::size_t n = 0;
  CovarianceType covariance = CovarianceType::Classical;

  std::size_t k() const noexcept { return coefficients.size(); }
  std::size_t dof() const noexcept { return n - k(); }
};

/// Least squares via column-pivoted Householder QR.
/// Throws InsufficientData unless rows > columns + 1, SingularDesign on rank deficiency.
RegressionFit ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
                  const OlsOptions& options = {});

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// R_t = b0 + b1 R_{t-1} + e_t.
RegressionFit stage_one(const ObservationSeries& returns, std::size_t min_obs = 30,
                        CovarianceType covariance = CovarianceType::Classical);

/// Element-wise square of the residuals, same dates.
ObservationSeries squared_residuals(const RegressionFit& fit);

/// Squared residuals regressed on the sentiment level over common dates.
RegressionFit stage_two(const ObservationSeries& sq_resid, const SentimentSeries& sent, std::size_t min_overlap = 30,
                        CovarianceType covariance = CovarianceType::Classical);

struct ProxyBlock {
  IndicatorKind kind;
  std::optional<RegressionFit> fit;
  std::string error;  // set when fit is empty
};

struct TwoStageReport {
  std::string index_label;
  RegressionFit stage_one;
  std::vector<ProxyBlock> proxies;
};

/// Stage one on `returns`, then one stage-two block per proxy. Per-proxy failures are
/// captured in the block; a stage-one failure propagates.
TwoStageReport two_stage_report(const std::string& index_label, const ObservationSeries& returns,
                                const std::vector<SentimentSeries>& sentiments, std::size_t min_obs = 30,
                                CovarianceType covariance = CovarianceType::Classical);

}  // namespace sentivol
