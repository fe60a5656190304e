#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "effsel/ci.hpp"
#include "effsel/effect.hpp"
#include "effsel/numstats.hpp"
#include "effsel/select.hpp"

namespace {

effsel::Dataset synthetic(std::size_t n, std::size_t f) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> z;
  std::vector<effsel::Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 3 == 0 ? effsel::Label::positive : effsel::Label::negative;
  std::vector<std::string> names;
  std::vector<double> values(n * f);
  for (std::size_t j = 0; j < f; ++j) {
    names.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) values[j * n + i] = z(rng) + (labels[i] == effsel::Label::positive ? 0.5 : 0.0);
  }
  return {std::move(names), std::move(values), std::move(labels)};
}

void BM_EffectSizes(benchmark::State& state) {
  const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(effsel::all_effect_sizes(ds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EffectSizes)->RangeMultiplier(2)->Range(500, 4000)->Complexity(benchmark::oN);

void BM_Relief(benchmark::State& state) {
  const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(effsel::relief_weights(ds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Relief)->RangeMultiplier(2)->Range(500, 4000)->Complexity(benchmark::oNSquared)->Unit(benchmark::kMillisecond);

void BM_NctCdf(benchmark::State& state) {
  const double ncp = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(effsel::nct_cdf(ncp + 0.7, 567.0, ncp));
}
BENCHMARK(BM_NctCdf)->Arg(0)->Arg(5)->Arg(25)->Arg(40);

void BM_NcpInterval(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(effsel::ncp_interval(20.0, 567.0, 0.95));
}
BENCHMARK(BM_NcpInterval);

void BM_Bootstrap(benchmark::State& state) {
  const auto ds = synthetic(569, 1);
  const auto g = effsel::group(ds, 0);
  const effsel::BootstrapConfig cfg{static_cast<std::size_t>(state.range(0)), 50, 42, 1};
  for (auto _ : state) benchmark::DoNotOptimize(effsel::bootstrap_ci_u_all(g, cfg));
}
BENCHMARK(BM_Bootstrap)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
