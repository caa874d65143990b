// Serial reference vs OpenMP kernel for each parallel hot path.

#include <benchmark/benchmark.h>

#include <numbers>

#include "decaylife/kernels.hpp"
#include "decaylife/montecarlo.hpp"
#include "decaylife/optimize.hpp"

namespace {

using namespace decaylife;

const RegimeConfig kCfg{0.77, 3.0};

void BM_RatioGridSerial(benchmark::State& state) {
  const auto bs = default_b_grid(static_cast<std::size_t>(state.range(0)));
  const auto ts = default_theta_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_ratio_grid_serial(kCfg, bs, ts));
}
BENCHMARK(BM_RatioGridSerial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RatioGridParallel(benchmark::State& state) {
  const auto bs = default_b_grid(static_cast<std::size_t>(state.range(0)));
  const auto ts = default_theta_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_ratio_grid(kCfg, bs, ts));
}
BENCHMARK(BM_RatioGridParallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EnvelopeSerial(benchmark::State& state) {
  const auto ks = log_grid(1.0, 1e4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(envelope_serial(1.0, ks));
}
BENCHMARK(BM_EnvelopeSerial)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnvelopeParallel(benchmark::State& state) {
  const auto ks = log_grid(1.0, 1e4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(envelope(1.0, ks));
}
BENCHMARK(BM_EnvelopeParallel)->Arg(8)->Unit(benchmark::kMillisecond);

const SystemParams kSys = SystemParams::from_ratios(0.77, 3.0);
const CoeffPair kCoeffs = restricted_coeffs(PostselectParams(0.3, std::numbers::pi / 2.0));

void BM_SampleSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_conditional_serial(kSys, kCoeffs, n, kDefaultSeed));
}
BENCHMARK(BM_SampleSerial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_SampleParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_conditional(kSys, kCoeffs, n, kDefaultSeed));
}
BENCHMARK(BM_SampleParallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
