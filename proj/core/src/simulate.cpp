#include "sentivol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sentivol/errors.hpp"

namespace sentivol {

namespace {

constexpr double kOverflowGuard = 700.0;
constexpr double kIndicatorPersistence = 0.95;

}  // namespace

SimulationResult simulate(const SimulationSpec& spec) {
  const auto& p = spec.params;
  const std::size_t m = p.delta.size();
  const std::size_t total = spec.burn_in + spec.length;
  if (spec.length < 1) throw InvalidInput("simulate: length must be >= 1");
  if (!(spec.sigma0_sq > 0.0)) throw InvalidInput("simulate: sigma0_sq must be positive");
  if (spec.dsent_policy == DsentPolicy::Supplied) {
    if (spec.supplied.size() != m) throw InvalidInput("simulate: supplied regressors do not match delta count");
    for (const auto& col : spec.supplied) {
      if (col.size() != total) {
        throw InvalidInput("simulate: supplied regressor needs burn_in + length = " + std::to_string(total) +
                           " values");
      }
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::vector<double>> x(m, std::vector<double>(total, 0.0));
  if (spec.dsent_policy == DsentPolicy::IidNormal) {
    for (std::size_t t = 0; t < total; ++t) {
      for (std::size_t i = 0; i < m; ++i) x[i][t] = spec.dsent_scale * normal(rng);
    }
  } else if (spec.dsent_policy == DsentPolicy::Supplied) {
    x = spec.supplied;
  }

  std::vector<double> returns(spec.length);
  std::vector<double> variance(spec.length);
  double log_var = 0.0;
  double prev_shock = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    if (t == 0) {
      log_var = std::log(spec.sigma0_sq);
    } else {
      double exog = 0.0;
      for (std::size_t i = 0; i < m; ++i) exog += p.delta[i] * x[i][t];
      log_var = p.omega + p.alpha * (std::fabs(prev_shock) - kExpectedAbsNormal) + p.beta * prev_shock +
                p.gamma * log_var + exog;
    }
    if (!(std::fabs(log_var) <= kOverflowGuard)) {
      throw DivergedRecursion("simulate: log-variance left [-700, 700] at step " + std::to_string(t));
    }
    const double var = std::exp(log_var);
    prev_shock = normal(rng);
    if (t >= spec.burn_in) {
      const std::size_t k = t - spec.burn_in;
      returns[k] = p.mu + std::sqrt(var) * prev_shock;
      variance[k] = var;
    }
  }

  auto dates = synthetic_calendar(spec.length, spec.start);
  SimulationResult out;
  for (std::size_t i = 0; i < m; ++i) {
    out.dsent.emplace_back(dates, std::vector<double>(x[i].begin() + static_cast<std::ptrdiff_t>(spec.burn_in), x[i].end()),
                           "change in indicator");
  }
  out.variance = ObservationSeries(dates, std::move(variance), "variance");
  out.returns = ObservationSeries(std::move(dates), std::move(returns), std::string(kUnitPercentReturn));
  return out;
}

SentimentSeries simulate_sentiment(IndicatorKind kind, std::size_t length, std::uint64_t seed, double scale,
                                   Date start) {
  if (length < 2) throw InvalidInput("simulate_sentiment: length must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(length);
  double x = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) x = kIndicatorPersistence * x + scale * normal(rng);
    switch (kind) {
      case IndicatorKind::SMMI:
      case IndicatorKind::BMMI:
        v[t] = x;
        break;
      case IndicatorKind::SVIX:
        v[t] = std::max(20.0 + x, 0.0);
        break;
      case IndicatorKind::SMSI:
        v[t] = std::exp(x);
        break;
      case IndicatorKind::BMSI:
        v[t] = 0.3 * std::exp(x);
        break;
      case IndicatorKind::DRI:
        v[t] = std::clamp(0.1 + x, 0.0, 1.0);
        break;
    }
  }
  return {ObservationSeries(synthetic_calendar(length, start), std::move(v)), kind};
}

}  // namespace sentivol
