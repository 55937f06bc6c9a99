#include "sentivol/egarch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sentivol/errors.hpp"
#include "sentivol/optimize.hpp"

namespace sentivol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
// |log s2| beyond this makes exp() overflow in the likelihood terms.
constexpr double kLogVarianceLimit = 700.0;
const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

struct KernelResult {
  double log_likelihood = 0.0;
  std::size_t diverged_at = kNone;
};

// One pass of the recursion over theta = (mu, omega, alpha, beta, gamma, delta...).
// When `path` is non-null the log and level variance are stored per date.
KernelResult run_recursion(std::span<const double> theta, const EgarchData& data, double sigma0_sq,
                           SentimentTiming timing, VariancePath* path) {
  const double mu = theta[0];
  const double omega = theta[1];
  const double alpha = theta[2];
  const double beta = theta[3];
  const double gamma = theta[4];
  const std::size_t m = data.exog.size();
  const std::size_t n = data.returns.size();
  const double* r = data.returns.data();
  const std::size_t lag = timing == SentimentTiming::Lagged ? 1 : 0;

  KernelResult out;
  if (n == 0) return out;
  if (path) {
    path->log_variance.resize(n);
    path->variance.resize(n);
  }

  double h = std::log(sigma0_sq);
  if (!std::isfinite(h) || std::fabs(h) > kLogVarianceLimit) {
    out.diverged_at = 0;
    return out;
  }
  double inv_sigma = std::exp(-0.5 * h);
  double eps = r[0] - mu;
  double z = eps * inv_sigma;
  double ll = -0.5 * (kLogTwoPi + h + z * z);
  if (path) {
    path->log_variance[0] = h;
    path->variance[0] = std::exp(h);
  }

  for (std::size_t t = 1; t < n; ++t) {
    double x = 0.0;
    for (std::size_t i = 0; i < m; ++i) x += theta[5 + i] * data.exog[i][t - lag];
    h = omega + alpha * (std::fabs(z) - kExpectedAbsNormal) + beta * z + gamma * h + x;
    if (!(std::fabs(h) <= kLogVarianceLimit)) {
      out.diverged_at = t;
      return out;
    }
    inv_sigma = std::exp(-0.5 * h);
    eps = r[t] - mu;
    z = eps * inv_sigma;
    ll += -0.5 * (kLogTwoPi + h + z * z);
    if (path) {
      path->log_variance[t] = h;
      path->variance[t] = std::exp(h);
    }
  }
  if (!std::isfinite(ll)) out.diverged_at = n - 1;
  out.log_likelihood = ll;
  return out;
}

void check_inputs(const EgarchParams& params, const EgarchData& data, double sigma0_sq) {
  if (params.delta.size() != data.exog.size()) {
    throw InvalidInput("EGARCH: " + std::to_string(params.delta.size()) + " delta coefficients for " +
                       std::to_string(data.exog.size()) + " regressors");
  }
  if (data.dates.size() != data.returns.size()) throw InvalidInput("EGARCH: dates/returns length mismatch");
  for (const auto& x : data.exog) {
    if (x.size() != data.returns.size()) throw InvalidInput("EGARCH: regressor length differs from returns");
  }
  if (!(sigma0_sq > 0.0) || !std::isfinite(sigma0_sq)) throw InvalidInput("EGARCH: sigma0_sq must be positive");
}

KernelResult checked_run(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                         SentimentTiming timing, VariancePath* path) {
  check_inputs(params, data, sigma0_sq);
  const auto theta = params.to_vector();
  auto res = run_recursion(theta, data, sigma0_sq, timing, path);
  if (res.diverged_at != kNone) {
    throw DivergedRecursion("EGARCH recursion diverged at " + format_date(data.dates[res.diverged_at]));
  }
  return res;
}

double normal_two_sided_p(double z) { return std::isfinite(z) ? std::erfc(std::fabs(z) / std::numbers::sqrt2) : kNaN; }

}  // namespace

std::vector<double> EgarchParams::to_vector() const {
  std::vector<double> v{mu, omega, alpha, beta, gamma};
  v.insert(v.end(), delta.begin(), delta.end());
  return v;
}

EgarchParams EgarchParams::from_vector(std::span<const double> v) {
  if (v.size() < 5) throw InvalidInput("EgarchParams: need at least 5 values");
  return {v[0], v[1], v[2], v[3], v[4], std::vector<double>(v.begin() + 5, v.end())};
}

bool EgarchParams::stationary() const noexcept { return std::fabs(gamma) < 1.0; }

std::vector<std::string> egarch_parameter_names(const std::vector<std::string>& exog_names) {
  std::vector<std::string> names{"mu", "omega", "alpha", "beta", "gamma"};
  for (const auto& n : exog_names) names.push_back("delta_" + n);
  return names;
}

EgarchData make_egarch_data(const ObservationSeries& returns, const std::vector<ObservationSeries>& exog,
                            std::vector<std::string> exog_names) {
  std::vector<ObservationSeries> all{returns};
  all.insert(all.end(), exog.begin(), exog.end());
  const auto aligned = align_all(all);
  EgarchData data;
  data.dates.assign(aligned[0].dates().begin(), aligned[0].dates().end());
  data.returns.assign(aligned[0].values().begin(), aligned[0].values().end());
  for (std::size_t i = 1; i < aligned.size(); ++i) {
    data.exog.emplace_back(aligned[i].values().begin(), aligned[i].values().end());
  }
  if (exog_names.empty()) {
    for (std::size_t i = 0; i < exog.size(); ++i) exog_names.push_back("x" + std::to_string(i + 1));
  }
  if (exog_names.size() != exog.size()) throw InvalidInput("make_egarch_data: names/regressors mismatch");
  data.exog_names = std::move(exog_names);
  return data;
}

EgarchData make_aligned_egarch_data(const ObservationSeries& returns, const std::vector<ObservationSeries>& exog,
                                    std::vector<std::string> exog_names) {
  for (const auto& x : exog) {
    if (!std::equal(x.dates().begin(), x.dates().end(), returns.dates().begin(), returns.dates().end())) {
      throw InvalidInput("EGARCH inputs are misaligned: regressor dates differ from return dates");
    }
  }
  return make_egarch_data(returns, exog, std::move(exog_names));
}

VariancePath variance_path(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                           SentimentTiming timing) {
  VariancePath path;
  checked_run(params, data, sigma0_sq, timing, &path);
  return path;
}

double log_likelihood(const EgarchParams& params, const EgarchData& data, double sigma0_sq, SentimentTiming timing) {
  return checked_run(params, data, sigma0_sq, timing, nullptr).log_likelihood;
}

double sample_variance_seed(std::span<const double> returns) {
  if (returns.empty()) return kNaN;
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(returns.size());
  double ss = 0.0;
  for (double r : returns) ss += (r - mean) * (r - mean);
  return ss / static_cast<double>(returns.size());
}

double sigma0_for(Sigma0Policy policy, const EgarchParams& params, double sample_seed) {
  if (policy == Sigma0Policy::Unconditional && std::fabs(params.gamma) < 1.0) {
    return std::exp(params.omega / (1.0 - params.gamma));
  }
  return sample_seed;
}

InformationCriteria information_criteria(double log_likelihood, std::size_t k, std::size_t n) {
  if (n <= k) throw InvalidInput("information criteria need N > k");
  const double N = static_cast<double>(n);
  const double K = static_cast<double>(k);
  return {(-2.0 * log_likelihood + 2.0 * K) / N, (-2.0 * log_likelihood + K * std::log(N)) / N};
}

std::vector<std::vector<double>> starting_points(const EgarchData& data, std::size_t count, std::uint64_t seed) {
  static constexpr double kGammaGrid[] = {0.95, 0.80, 0.50, 0.98, 0.0};
  constexpr std::size_t kGridSize = std::size(kGammaGrid);
  double mean = 0.0;
  for (double r : data.returns) mean += r;
  mean /= static_cast<double>(std::max<std::size_t>(data.returns.size(), 1));
  const double var = sample_variance_seed(data.returns);
  const double log_var = var > 0.0 ? std::log(var) : 0.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < count; ++i) {
    double gamma = kGammaGrid[i % kGridSize];
    double alpha = 0.1;
    double beta = 0.0;
    if (i >= kGridSize) {
      alpha += jitter(rng);
      beta += jitter(rng);
      gamma = std::clamp(gamma + jitter(rng), -0.99, 0.995);
    }
    std::vector<double> s{mean, (1.0 - gamma) * log_var, alpha, beta, gamma};
    s.resize(5 + data.exog.size(), 0.0);
    starts.push_back(std::move(s));
  }
  return starts;
}

namespace {

// |z_t| has a kink wherever mu crosses a return; keep mu stencils inside one smooth piece.
double mean_step_limit(const EgarchData& data, double mu) {
  double nearest = std::numeric_limits<double>::infinity();
  for (double r : data.returns) nearest = std::min(nearest, std::fabs(r - mu));
  return std::max(0.25 * nearest, 1e-12 * std::max(std::fabs(mu), 1.0));
}

StepCap mean_step_cap(const EgarchData& data, std::size_t mu_index) {
  return [&data, mu_index](std::span<const double> x, std::size_t i) {
    return i == mu_index ? mean_step_limit(data, x[i]) : std::numeric_limits<double>::infinity();
  };
}

}  // namespace

std::vector<double> working_gradient(const EgarchParams& params, const EgarchData& data, double sigma0_sq,
                                     SentimentTiming timing) {
  check_inputs(params, data, sigma0_sq);
  const Objective f = [&](std::span<const double> theta) {
    const auto r = run_recursion(theta, data, sigma0_sq, timing, nullptr);
    return r.diverged_at == kNone ? r.log_likelihood : kNegInf;
  };
  const auto theta = params.to_vector();
  return central_gradient(f, theta, mean_step_cap(data, 0));
}

double gradient_check(const EgarchParams& params, const EgarchData& data, double sigma0_sq, SentimentTiming timing) {
  check_inputs(params, data, sigma0_sq);
  const Objective f = [&](std::span<const double> theta) {
    const auto r = run_recursion(theta, data, sigma0_sq, timing, nullptr);
    return r.diverged_at == kNone ? r.log_likelihood : kNegInf;
  };
  const auto theta = params.to_vector();
  const auto cap = mean_step_cap(data, 0);
  const auto working = central_gradient(f, theta, cap);
  const auto reference = five_point_gradient(f, theta, 1e-4, cap);
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(working[i]) || !std::isfinite(reference[i])) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::fabs(working[i] - reference[i]) / std::max(std::fabs(reference[i]), 1.0));
  }
  return worst;
}

EgarchFit fit_egarch(const EgarchData& data, const EgarchOptions& options) {
  const std::size_t n = data.size();
  const std::size_t m = data.exog.size();
  const std::size_t p = 5 + m;
  if (n < options.min_obs) throw InsufficientData("EGARCH fit", options.min_obs, n);
  check_inputs(EgarchParams{0, 0, 0, 0, 0, std::vector<double>(m, 0.0)}, data, 1.0);

  const double sample_seed = sample_variance_seed(data.returns);
  if (!(sample_seed > 1e-300)) {
    throw EstimationFailed("degenerate variance: returns have zero residual variance");
  }

  // Fixed-parameter bookkeeping: theta_full[i] = fixed value or a free coordinate.
  std::vector<std::optional<double>> fixed{options.fixed.mu, options.fixed.omega, options.fixed.alpha,
                                           options.fixed.beta, options.fixed.gamma};
  if (options.fixed.delta.size() > m) throw InvalidInput("EGARCH: more fixed deltas than regressors");
  for (std::size_t i = 0; i < m; ++i) {
    fixed.push_back(i < options.fixed.delta.size() ? options.fixed.delta[i] : std::nullopt);
  }
  std::vector<std::size_t> free_index;
  for (std::size_t i = 0; i < p; ++i) {
    if (!fixed[i]) free_index.push_back(i);
  }
  if (free_index.empty()) throw InvalidInput("EGARCH: every parameter is fixed");
  const std::size_t k = free_index.size();
  if (n <= k) throw InsufficientData("EGARCH fit", k + 1, n);

  auto expand = [&](std::span<const double> free_theta) {
    std::vector<double> full(p);
    for (std::size_t i = 0; i < p; ++i) full[i] = fixed[i].value_or(0.0);
    for (std::size_t j = 0; j < k; ++j) full[free_index[j]] = free_theta[j];
    return full;
  };
  auto seed_for = [&](std::span<const double> full) {
    if (options.sigma0 == Sigma0Policy::Unconditional && std::fabs(full[4]) < 1.0) {
      return std::exp(full[1] / (1.0 - full[4]));
    }
    return sample_seed;
  };
  const Objective objective = [&](std::span<const double> free_theta) {
    const auto full = expand(free_theta);
    const double s0 = seed_for(full);
    if (!(s0 > 0.0) || !std::isfinite(s0)) return kNegInf;
    const auto r = run_recursion(full, data, s0, options.timing, nullptr);
    return r.diverged_at == kNone ? r.log_likelihood : kNegInf;
  };

  BfgsOptions bfgs;
  bfgs.max_iterations = options.max_iterations;
  bfgs.tolerance = options.tolerance;
  if (!fixed[0]) bfgs.step_cap = mean_step_cap(data, 0);

  const auto starts = starting_points(data, std::max<std::size_t>(options.multistart, 1), options.seed);
  std::vector<StartDiagnostic> diagnostics;
  std::optional<BfgsResult> best;
  std::size_t best_index = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::vector<double> x0(k);
    for (std::size_t j = 0; j < k; ++j) x0[j] = starts[s][free_index[j]];
    StartDiagnostic diag;
    diag.index = s;
    diag.start = expand(x0);
    auto res = maximize_bfgs(objective, x0, bfgs);
    if (!res || !std::isfinite(res->value)) {
      diag.message = "non-finite likelihood at start";
    } else {
      diag.finite = true;
      diag.log_likelihood = res->value;
      diag.iterations = res->iterations;
      diag.converged = res->converged;
      if (!res->converged) diag.message = "no convergence (relative gradient " + std::to_string(res->relative_gradient) + ")";
      const bool better = !best || (res->converged && !best->converged) ||
                          (res->converged == best->converged && res->value > best->value);
      if (better) {
        best = std::move(res);
        best_index = s;
      }
    }
    diagnostics.push_back(std::move(diag));
  }
  if (!best) {
    std::vector<std::string> lines;
    for (const auto& d : diagnostics) lines.push_back("start " + std::to_string(d.index) + ": " + d.message);
    throw EstimationFailed("EGARCH estimation failed: every start diverged", std::move(lines));
  }

  EgarchFit fit;
  const auto full = expand(best->x);
  fit.params = EgarchParams::from_vector(full);
  fit.parameter_names = egarch_parameter_names(data.exog_names);
  fit.free.assign(p, false);
  for (auto i : free_index) fit.free[i] = true;
  fit.log_likelihood = best->value;
  fit.k = k;
  fit.n = n;
  const auto ic = information_criteria(fit.log_likelihood, k, n);
  fit.aic = ic.aic;
  fit.sc = ic.sc;
  fit.sigma0_sq = seed_for(full);

  fit.standard_errors.assign(p, kNaN);
  fit.t_stats.assign(p, kNaN);
  fit.p_values.assign(p, kNaN);
  const auto H = numerical_hessian(objective, best->x);
  Eigen::MatrixXd info(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  bool finite_hessian = true;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      info(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -H[i][j];
      finite_hessian = finite_hessian && std::isfinite(H[i][j]);
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (finite_hessian && llt.info() == Eigen::Success) {
    const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
    fit.standard_errors_available = true;
    for (std::size_t j = 0; j < k; ++j) {
      const double se = std::sqrt(cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
      const std::size_t i = free_index[j];
      fit.standard_errors[i] = se;
      fit.t_stats[i] = se > 0.0 ? full[i] / se : kNaN;
      fit.p_values[i] = normal_two_sided_p(fit.t_stats[i]);
    }
  } else {
    fit.warnings.push_back("Hessian not negative definite at the optimum; standard errors unavailable");
  }
  if (!fit.params.stationary()) fit.warnings.push_back("|gamma| >= 1: log-variance process is non-stationary");
  if (!best->converged) fit.warnings.push_back("optimizer did not meet the convergence tolerance");

  const auto path = variance_path(fit.params, data, fit.sigma0_sq, options.timing);
  std::vector<double> z(n);
  double mean = 0.0;
  for (double r : data.returns) mean += r;
  mean /= static_cast<double>(n);
  double ss_fit = 0.0;
  double ss_mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double e = data.returns[t] - fit.params.mu;
    z[t] = e / std::sqrt(path.variance[t]);
    ss_fit += e * e;
    ss_mean += (data.returns[t] - mean) * (data.returns[t] - mean);
  }
  fit.adjusted_r_squared = 1.0 - ss_fit / ss_mean;
  fit.variance = ObservationSeries(data.dates, path.variance, "variance");
  fit.standardized_residuals = ObservationSeries(data.dates, std::move(z), "standardized residual");

  fit.convergence.iterations = best->iterations;
  fit.convergence.relative_gradient = best->relative_gradient;
  double gmax = 0.0;
  for (double g : best->gradient) gmax = std::max(gmax, std::fabs(g));
  fit.convergence.gradient_norm = gmax;
  fit.convergence.converged = best->converged;
  fit.convergence.start_index = best_index;
  fit.convergence.trace = best->trace;
  fit.convergence.starts = std::move(diagnostics);
  return fit;
}

}  // namespace sentivol
