#include <benchmark/benchmark.h>

#include <random>

#include "sentivol/regression.hpp"
#include "sentivol/sentiment.hpp"

namespace {

std::vector<double> draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

sentivol::ObservationSeries random_walk(std::size_t n) {
  auto v = draws(n, 3);
  double level = 1000.0;
  for (auto& x : v) x = level *= 1.0 + 0.01 * x;
  return {sentivol::synthetic_calendar(n), std::move(v)};
}

void BM_Ols(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = draws(n, 1);
  auto y = draws(n, 2);
  for (std::size_t i = 0; i < n; ++i) y[i] += 0.5 * x[i];
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::ols(y, {x}));
}
BENCHMARK(BM_Ols)->Arg(100)->Arg(3000);

void BM_StageOne(benchmark::State& state) {
  const auto levels = random_walk(static_cast<std::size_t>(state.range(0)));
  const auto returns = sentivol::simple_returns(levels);
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::stage_one(returns));
}
BENCHMARK(BM_StageOne)->Arg(5000);

void BM_MomentumIndex(benchmark::State& state) {
  const auto levels = random_walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::momentum_index(levels, sentivol::IndicatorKind::SMMI));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MomentumIndex)->Arg(5000);

void BM_PutCallRatio(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cal = sentivol::synthetic_calendar(n);
  const auto u = draws(2 * n, 4);
  std::vector<sentivol::OptionVolumePair> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {cal[i], 100.0 + 10.0 * std::abs(u[i]), 100.0 + 10.0 * std::abs(u[n + i])};
  for (auto _ : state) benchmark::DoNotOptimize(sentivol::put_call_ratio(v));
}
BENCHMARK(BM_PutCallRatio)->Arg(5000);

}  // namespace
