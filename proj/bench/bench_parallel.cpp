#include <benchmark/benchmark.h>

#include "roughmax/expsum.hpp"
#include "roughmax/kernel.hpp"
#include "roughmax/maximal.hpp"

using namespace roughmax;

namespace {

const GrowthFunction& growth() {
  static const GrowthFunction g = make_growth(Variant::PurePower, 1.02, 1.0);
  return g;
}

const InverseFunction& inverse() {
  static const InverseFunction phi(growth());
  return phi;
}

const SequenceSet& sequence() {
  static const SequenceSet s = generate(growth(), std::int64_t{1} << 20);
  return s;
}

const Kernel& kernel() {
  static const Kernel k = build_kernel(sequence(), inverse(), std::int64_t{1} << 14, Normalization::PhiApprox);
  return k;
}

const ScaleFamily& family() {
  static const ScaleFamily f = build_family(sequence(), inverse(), 8, 18);
  return f;
}

void BM_PairsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::autocorrelation_pairs(kernel()));
}

void BM_PairsParallel(benchmark::State& state) {
  const Workers w{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation_pairs(kernel(), w));
}

void BM_MaximalSerial(benchmark::State& state) {
  const Signal f = random_sparse(64, 1, -4096, 4096);
  for (auto _ : state) benchmark::DoNotOptimize(serial::maximal_function(family(), f));
}

void BM_MaximalParallel(benchmark::State& state) {
  const Signal f = random_sparse(64, 1, -4096, 4096);
  const Workers w{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(maximal_function(family(), f, w));
}

void BM_ExpSumSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::single_phase_sum(inverse(), std::int64_t{1} << 18, 0, 0.3, 1, 1, 0, 0));
  }
}

void BM_ExpSumParallel(benchmark::State& state) {
  const Workers w{static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(single_phase_sum(inverse(), std::int64_t{1} << 18, 0, 0.3, 1, 1, 0, 0, std::nullopt, w));
  }
}

}  // namespace

BENCHMARK(BM_PairsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpSumSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpSumParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
