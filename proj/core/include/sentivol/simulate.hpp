#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sentivol/egarch.hpp"
#include "sentivol/sentiment.hpp"
#include "sentivol/timeseries.hpp"

namespace sentivol {

enum class DsentPolicy { Zeros, IidNormal, Supplied };

struct SimulationSpec {
  EgarchParams params;
  std::size_t length = 1000;
  std::uint64_t seed = 0;
  DsentPolicy dsent_policy = DsentPolicy::Zeros;
  double dsent_scale = 1.0;  // standard deviation for IidNormal
  /// For Supplied: one column per delta, each of length burn_in + length.
  std::vector<std::vector<double>> supplied;
  double sigma0_sq = 1.0;
  std::size_t burn_in = 1000;
  Date start = Date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};
};

struct SimulationResult {
  ObservationSeries returns;
  std::vector<ObservationSeries> dsent;  // one per delta
  ObservationSeries variance;
};

/// Forward EGARCH(1,1)-X recursion with standard normal innovations, burn-in discarded.
/// Dates are consecutive weekdays from spec.start. Deterministic for a given seed.
/// Throws InvalidInput for an invalid spec and DivergedRecursion when |log s2| exceeds 700.
SimulationResult simulate(const SimulationSpec& spec);

/// Stationary AR(1) indicator, x_t = 0.95 x_{t-1} + scale e_t, x_0 = 0, mapped per kind:
///   SMMI, BMMI: x            SVIX: max(20 + x, 0)
///   SMSI: exp(x)             BMSI: 0.3 exp(x)          DRI: clamp(0.1 + x, 0, 1)
/// `length` observations on the synthetic calendar from `start`.
SentimentSeries simulate_sentiment(IndicatorKind kind, std::size_t length, std::uint64_t seed, double scale,
                                   Date start = Date{std::chrono::year{2000}, std::chrono::January,
                                                     std::chrono::day{3}});

}  // namespace sentivol
