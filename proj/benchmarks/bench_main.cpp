#include <benchmark/benchmark.h>

#include <memory>

#include "zopt/algorithms.hpp"
#include "zopt/heavy_tailed.hpp"
#include "zopt/hitting_time.hpp"

namespace {

using namespace zopt;

void BM_EaIteratePm1(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const TargetVector a = TargetVector::all_equal(n, 1'000'000'000);
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(1);
  for (auto _ : st) benchmark::DoNotOptimize(ea_iterate(s, a, rng));
}
BENCHMARK(BM_EaIteratePm1)->Arg(10)->Arg(100)->Arg(1000);

void BM_EaIterateHeavy(benchmark::State& st) {
  const auto sampler = std::make_shared<const HeavyTailedSampler>(HeavyTailedParams{});
  const TargetVector a = TargetVector::all_equal(10, 1'000'000'000);
  EaState s = EaState::initial(a, StepOperator::heavy_tailed(sampler));
  Rng rng(2);
  for (auto _ : st) benchmark::DoNotOptimize(ea_iterate(s, a, rng));
}
BENCHMARK(BM_EaIterateHeavy);

void BM_RlsIterate(benchmark::State& st) {
  const TargetVector a = TargetVector::all_equal(10, 1'000'000'000);
  RlsState s = RlsState::initial(a, 1.7, 0.9);
  Rng rng(3);
  for (auto _ : st) benchmark::DoNotOptimize(rls_iterate(s, a, rng));
}
BENCHMARK(BM_RlsIterate);

void BM_SampleExponent(benchmark::State& st) {
  HeavyTailedParams p;
  p.epsilon = 1.0;
  const HeavyTailedSampler sampler(p);
  Rng rng(4);
  for (auto _ : st) benchmark::DoNotOptimize(sampler.sample_exponent(rng));
}
BENCHMARK(BM_SampleExponent);

void BM_CEpsilon(benchmark::State& st) {
  HeavyTailedParams p;
  p.epsilon = 0.001;
  for (auto _ : st) {
    benchmark::DoNotOptimize(compute_c_epsilon(p, static_cast<std::uint64_t>(st.range(0)), 1.0));
  }
}
BENCHMARK(BM_CEpsilon)->Arg(100'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_HittingTimeOracle(benchmark::State& st) {
  const ChainSpec spec{2, static_cast<std::uint64_t>(st.range(0)), ChainAlgorithm::kEaPm1};
  for (auto _ : st) benchmark::DoNotOptimize(HittingTimeOracle(spec).state_count());
}
BENCHMARK(BM_HittingTimeOracle)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
