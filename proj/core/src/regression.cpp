#include "sentivol/regression.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "sentivol/errors.hpp"

namespace sentivol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double student_t_two_sided_p(double t, double dof) {
  if (!std::isfinite(t) || !(dof > 0.0)) return kNaN;
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

RegressionFit ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
                  const OlsOptions& options) {
  const std::size_t n = y.size();
  const std::size_t k = columns.size() + (options.include_intercept ? 1 : 0);
  if (k == 0) throw InvalidInput("ols: empty design");
  for (const auto& c : columns) {
    if (c.size() != n) throw InvalidInput("ols: design column length differs from y");
  }
  if (n < k + 2) throw InsufficientData("ols", k + 2, n);
  if (!options.dates.empty() && options.dates.size() != n) throw InvalidInput("ols: dates length differs from y");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Eigen::Index col = 0;
  if (options.include_intercept) X.col(col++).setOnes();
  for (const auto& c : columns) X.col(col++) = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(n));

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(k)) {
    throw SingularDesign("ols: design matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(k) +
                         " columns");
  }
  const Eigen::VectorXd beta = qr.solve(Y);
  const Eigen::VectorXd fitted = X * beta;
  const Eigen::VectorXd resid = Y - fitted;
  const double rss = resid.squaredNorm();
  const double dof = static_cast<double>(n - k);

  // (X'X)^-1 = P R^-1 R^-T P'
  const auto ki = static_cast<Eigen::Index>(k);
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(ki, ki).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(ki, ki));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (Rinv * Rinv.transpose()) * perm.transpose();

  Eigen::MatrixXd cov;
  if (options.covariance == CovarianceType::Classical) {
    cov = (rss / dof) * bread;
  } else {
    const Eigen::MatrixXd meat = X.transpose() * resid.array().square().matrix().asDiagonal() * X;
    cov = (static_cast<double>(n) / dof) * bread * meat * bread;
  }

  RegressionFit fit;
  fit.n = n;
  fit.rss = rss;
  fit.covariance = options.covariance;
  for (std::size_t j = 0; j < k; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double b = beta(jj);
    const double se = std::sqrt(std::max(cov(jj, jj), 0.0));
    const double t = se > 0.0 ? b / se : kNaN;
    fit.coefficients.push_back(b);
    fit.standard_errors.push_back(se);
    fit.t_stats.push_back(t);
    fit.p_values.push_back(student_t_two_sided_p(t, dof));
  }

  double tss = 0.0;
  if (options.include_intercept) {
    const double mean = Y.mean();
    tss = (Y.array() - mean).square().sum();
  } else {
    tss = Y.squaredNorm();
  }
  if (tss > 0.0) {
    fit.r_squared = 1.0 - rss / tss;
    fit.adjusted_r_squared = 1.0 - (1.0 - fit.r_squared) * (static_cast<double>(n) - 1.0) / dof;
  } else {
    fit.r_squared = kNaN;
    fit.adjusted_r_squared = kNaN;
  }

  std::vector<Date> dates = options.dates.empty() ? synthetic_calendar(n) : options.dates;
  fit.residuals = ObservationSeries(dates, std::vector<double>(resid.data(), resid.data() + n));
  fit.fitted = ObservationSeries(std::move(dates), std::vector<double>(fitted.data(), fitted.data() + n));
  return fit;
}

RegressionFit stage_one(const ObservationSeries& returns, std::size_t min_obs, CovarianceType covariance) {
  if (returns.size() < min_obs) throw InsufficientData("stage_one", min_obs, returns.size());
  auto lagged = lag_pair(returns);
  OlsOptions opts;
  opts.covariance = covariance;
  opts.dates = std::move(lagged.dates);
  auto fit = ols(lagged.left, {lagged.right}, opts);
  fit.residuals = fit.residuals.with_unit(returns.unit());
  fit.fitted = fit.fitted.with_unit(returns.unit());
  return fit;
}

ObservationSeries squared_residuals(const RegressionFit& fit) {
  std::vector<double> sq(fit.residuals.values().begin(), fit.residuals.values().end());
  for (double& v : sq) v *= v;
  return {std::vector<Date>(fit.residuals.dates().begin(), fit.residuals.dates().end()), std::move(sq),
          "squared residual"};
}

RegressionFit stage_two(const ObservationSeries& sq_resid, const SentimentSeries& sent, std::size_t min_overlap,
                        CovarianceType covariance) {
  auto pair = align(sq_resid, sent.series());
  if (pair.size() < min_overlap) {
    throw InsufficientData("stage_two overlap with " + std::string(to_string(sent.kind())), min_overlap, pair.size());
  }
  OlsOptions opts;
  opts.covariance = covariance;
  opts.dates = std::move(pair.dates);
  return ols(pair.left, {pair.right}, opts);
}

TwoStageReport two_stage_report(const std::string& index_label, const ObservationSeries& returns,
                                const std::vector<SentimentSeries>& sentiments, std::size_t min_obs,
                                CovarianceType covariance) {
  TwoStageReport report{index_label, stage_one(returns, min_obs, covariance), {}};
  const auto sq = squared_residuals(report.stage_one);
  for (const auto& s : sentiments) {
    ProxyBlock block{s.kind(), std::nullopt, {}};
    try {
      block.fit = stage_two(sq, s, min_obs, covariance);
    } catch (const Error& e) {
      block.error = e.what();
    }
    report.proxies.push_back(std::move(block));
  }
  return report;
}

}  // namespace sentivol
