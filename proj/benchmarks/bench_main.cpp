#include <benchmark/benchmark.h>

#include "hprec/hprec.hpp"

namespace {

using namespace hprec;

// Reference Rayleigh dimensions unless a benchmark says otherwise.
const SystemDims kDims{8, 6, 10, 12, 1.0};

ChannelSet channel(const SystemDims& d = kDims) { return normalize(gen_rayleigh(d, 1, 7)).realizations.front(); }

void BM_SumRate(benchmark::State& state) {
  const auto ch = channel();
  const auto p = init_precoders(ch, AnalogConstraint::Unconstrained, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sum_rate(p, ch));
}
BENCHMARK(BM_SumRate);

void BM_RateGradients(benchmark::State& state) {
  const auto ch = channel();
  const auto p = init_precoders(ch, AnalogConstraint::Unconstrained, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rate_gradients(p, ch, {}, GradientRequest{true, true, false}));
}
BENCHMARK(BM_RateGradients);

void BM_PgaRun(benchmark::State& state) {
  const auto ch = channel();
  const PgaSchedule sched(static_cast<int>(state.range(0)), kDims.bands, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(pga_run(ch, sched, AnalogConstraint::Unconstrained, 1).final().rate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PgaRun)->Arg(5)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PcmpRun(benchmark::State& state) {
  const auto ch = channel();
  const PcmpSchedule sched(static_cast<int>(state.range(0)), 2, kDims.bands, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pcmp_run(ch, sched, 0.05, AnalogConstraint::Unconstrained, 1, {}).final().rate);
  }
}
BENCHMARK(BM_PcmpRun)->Arg(5)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MinRateOverErrors(benchmark::State& state) {
  const auto ch = channel();
  const auto p = init_precoders(ch, AnalogConstraint::Unconstrained, 1);
  const auto es = sample_error_set(ch.dims, 0.05, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(min_rate_over_errors(p, ch, es));
}
BENCHMARK(BM_MinRateOverErrors)->Arg(20);

void BM_AdmmRun(benchmark::State& state) {
  const auto ch = channel(SystemDims{1, 6, 10, 12, 1.0});
  const AdmmParams params(100, 1.0, 1.0, 0.05, 0.05, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(admm_run(ch, params, 1, MultiplierMode::Descent).final_rate);
}
BENCHMARK(BM_AdmmRun)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
