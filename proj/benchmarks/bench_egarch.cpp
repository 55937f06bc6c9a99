#include <benchmark/benchmark.h>

#include "sentivol/egarch.hpp"
#include "sentivol/simulate.hpp"

namespace {

sentivol::EgarchData simulated(std::size_t length) {
  sentivol::SimulationSpec spec;
  spec.params = {0.05, -0.10, 0.15, -0.06, 0.95, {0.30}};
  spec.length = length;
  spec.seed = 1;
  spec.dsent_policy = sentivol::DsentPolicy::IidNormal;
  spec.dsent_scale = 0.5;
  const auto sim = sentivol::simulate(spec);
  return sentivol::make_aligned_egarch_data(sim.returns, sim.dsent);
}

void BM_LogLikelihood(benchmark::State& state) {
  const auto data = simulated(static_cast<std::size_t>(state.range(0)));
  const double s0 = sentivol::sample_variance_seed(data.returns);
  const sentivol::EgarchParams p{0.04, -0.12, 0.14, -0.05, 0.94, {0.28}};
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::log_likelihood(p, data, s0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Arg(2000)->Arg(20000);

void BM_WorkingGradient(benchmark::State& state) {
  const auto data = simulated(static_cast<std::size_t>(state.range(0)));
  const double s0 = sentivol::sample_variance_seed(data.returns);
  const sentivol::EgarchParams p{0.04, -0.12, 0.14, -0.05, 0.94, {0.28}};
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::working_gradient(p, data, s0));
}
BENCHMARK(BM_WorkingGradient)->Arg(2000);

void BM_FitEgarch(benchmark::State& state) {
  const auto data = simulated(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::fit_egarch(data));
}
BENCHMARK(BM_FitEgarch)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
