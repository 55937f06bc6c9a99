#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentivol/timeseries.hpp"

namespace sentivol {

/// E|z| for a standard normal z, the centering constant of the magnitude term.
inline constexpr double kExpectedAbsNormal = 0.79788456080286535588;  // sqrt(2/pi)

/// EGARCH(1,1)-X parameters:
///   r_t = mu + e_t,  z_t = e_t / sigma_t
///   log s2_t = omega + alpha (|z_{t-1}| - sqrt(2/pi)) + beta z_{t-1}
///              + gamma log s2_{t-1} + sum_i delta_i x_{i,t}
struct EgarchParams {
  double mu = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;   // leverage
  double gamma = 0.0;  // persistence
  std::vector<double> delta;

  std::size_t size() const noexcept { return 5 + delta.size(); }
  std::vector<double> to_vector() const;
  static EgarchParams from_vector(std::span<const double> v);
  bool stationary() const noexcept;

  friend bool operator==(const EgarchParams&, const EgarchParams&) = default;
};

/// Names in to_vector() order: mu, omega, alpha, beta, gamma, delta[_<name>]...
std::vector<std::string> egarch_parameter_names(const std::vector<std::string>& exog_names);

enum class SentimentTiming {
  Contemporaneous,  // x_t enters log s2_t
  Lagged,           // x_{t-1} enters log s2_t
};

enum class Sigma0Policy {
  SampleVariance,  // variance of the demeaned returns (divisor N)
  Unconditional,   // exp(omega / (1 - gamma)); falls back to SampleVariance when |gamma| >= 1
};

/// Returns and exogenous regressors on a common set of dates.
struct EgarchData {
  std::vector<Date> dates;
  std::vector<double> returns;
  std::vector<std::vector<double>> exog;  // exog[i][t]
  std::vector<std::string> exog_names;

  std::size_t size() const noexcept { return returns.size(); }
};

/// Inner-joins returns with each regressor. Names default to x1, x2, ...
EgarchData make_egarch_data(const ObservationSeries& returns, const std::vector<ObservationSeries>& exog,
                            std::vector<std::string> exog_names = {});

/// Requires identical date sets; throws InvalidInput otherwise.
EgarchData make_aligned_egarch_data(const ObservationSeries& returns, const std::vector<ObservationSeries>& exog,
                                    std::vector<std::string> exog_names = {});

struct VariancePath {
  std::vector<double> log_variance;
  std::vector<double> variance;
};

/// Runs the log-variance recursion seeded at s2_1 = sigma0_sq.
/// Throws DivergedRecursion naming the date where the path leaves the representable range.
VariancePath variance_path(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                           SentimentTiming timing = SentimentTiming::Contemporaneous);

/// Gaussian log-likelihood sum_t [-0.5 ln 2pi - 0.5 ln s2_t - e_t^2 / (2 s2_t)].
double log_likelihood(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                      SentimentTiming timing = SentimentTiming::Contemporaneous);

/// Variance of the returns around their sample mean, divisor N.
double sample_variance_seed(std::span<const double> returns);

/// Seed for a given policy and parameter point.
double sigma0_for(Sigma0Policy policy, const EgarchParams& params, double sample_seed);

struct InformationCriteria {
  double aic = 0.0;
  double sc = 0.0;
};

/// Per-observation AIC = (-2 logL + 2k)/N and SC = (-2 logL + k ln N)/N. Throws if N <= k.
InformationCriteria information_criteria(double log_likelihood, std::size_t k, std::size_t n);

/// Parameters held fixed during estimation (std::nullopt = free).
struct FixedParams {
  std::optional<double> mu, omega, alpha, beta, gamma;
  std::vector<std::optional<double>> delta;
};

struct EgarchOptions {
  std::size_t multistart = 3;
  double tolerance = 1e-7;
  std::size_t max_iterations = 500;
  Sigma0Policy sigma0 = Sigma0Policy::SampleVariance;
  SentimentTiming timing = SentimentTiming::Contemporaneous;
  std::size_t min_obs = 100;
  std::uint64_t seed = 0;  // jitter for starts beyond the fixed grid
  FixedParams fixed;
};

struct StartDiagnostic {
  std::size_t index = 0;
  std::vector<double> start;
  bool finite = false;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;
};

struct ConvergenceReport {
  std::size_t iterations = 0;
  double gradient_norm = 0.0;       // max |g_i| over free parameters
  double relative_gradient = 0.0;
  bool converged = false;
  std::size_t start_index = 0;
  std::vector<double> trace;        // log-likelihood after each accepted step
  std::vector<StartDiagnostic> starts;
};

struct EgarchFit {
  EgarchParams params;
  std::vector<std::string> parameter_names;
  std::vector<bool> free;                // per parameter
  std::vector<double> standard_errors;   // NaN when unavailable or fixed
  std::vector<double> t_stats;
  std::vector<double> p_values;          // two-sided normal
  bool standard_errors_available = false;
  double log_likelihood = 0.0;
  std::size_t k = 0;                     // free parameters
  std::size_t n = 0;
  double aic = 0.0;
  double sc = 0.0;
  /// 1 - sum (r - mu_hat)^2 / sum (r - r_bar)^2; with one mean parameter the degrees-of-
  /// freedom adjustment is the identity.
  double adjusted_r_squared = 0.0;
  double sigma0_sq = 0.0;
  ObservationSeries variance;
  ObservationSeries standardized_residuals;
  ConvergenceReport convergence;
  std::vector<std::string> warnings;
};

/// The documented multistart grid: gamma cycles through {0.95, 0.80, 0.50, 0.98, 0.0} with
/// omega = (1 - gamma) ln var(r), alpha = 0.1, beta = 0, delta = 0, mu = mean(r). Starts past
/// the grid add seeded N(0, 0.05) jitter to alpha, beta and gamma.
std::vector<std::vector<double>> starting_points(const EgarchData& data, std::size_t count, std::uint64_t seed);

/// Gaussian quasi-maximum-likelihood fit.
/// Throws InsufficientData below options.min_obs, EstimationFailed on degenerate data or when
/// every start diverges.
EgarchFit fit_egarch(const EgarchData& data, const EgarchOptions& options = {});

/// Max over coordinates of |g_central - g_5pt| / max(|g_5pt|, 1), with g_central the gradient
/// the optimizer uses and g_5pt an independent five-point stencil.
double gradient_check(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                      SentimentTiming timing = SentimentTiming::Contemporaneous);

/// Gradient the optimizer works with at `params` (central differences of log_likelihood).
std::vector<double> working_gradient(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                                     SentimentTiming timing = SentimentTiming::Contemporaneous);

}  // namespace sentivol
