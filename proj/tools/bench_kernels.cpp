// Parallel kernels against their serial reference on a dense logistic problem.
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "adasample/batch_stats.hpp"
#include "adasample/objective.hpp"
#include "adasample/synthetic.hpp"

namespace {

using namespace adasample;

constexpr Index kN = 20000;
constexpr Index kD = 60;

const Dataset& bench_data() {
  static const Dataset data = gen_synthetic(kN, kD, 0.1, 7);
  return data;
}

ObjectiveSpec bench_spec() { return ObjectiveSpec::logistic(1.0 / static_cast<double>(kN)); }

Vector bench_x() { return Vector::LinSpaced(kD, -0.5, 0.5); }

std::vector<Index> full_batch() {
  std::vector<Index> b(kN);
  std::iota(b.begin(), b.end(), Index{0});
  return b;
}

void BM_batch_gradient_parallel(benchmark::State& state) {
  const auto& data = bench_data();
  const auto spec = bench_spec();
  const Vector x = bench_x();
  const auto batch = full_batch();
  for (auto _ : state) {
    GradientBundle b = batch_gradient(spec, data, x, batch);
    benchmark::DoNotOptimize(b.batch_mean.data());
  }
}

void BM_batch_gradient_serial(benchmark::State& state) {
  const auto& data = bench_data();
  const auto spec = bench_spec();
  const Vector x = bench_x();
  const auto batch = full_batch();
  for (auto _ : state) {
    GradientBundle b = serial::batch_gradient(spec, data, x, batch);
    benchmark::DoNotOptimize(b.batch_mean.data());
  }
}

void BM_batch_stats_parallel(benchmark::State& state) {
  const auto& data = bench_data();
  const auto spec = bench_spec();
  const Vector x = bench_x();
  const GradientBundle bundle = batch_gradient(spec, data, x, full_batch());
  for (auto _ : state) {
    BatchStats s = compute_batch_stats(bundle, bundle.batch_mean);
    benchmark::DoNotOptimize(s.var_inner);
  }
}

void BM_batch_stats_serial(benchmark::State& state) {
  const auto& data = bench_data();
  const auto spec = bench_spec();
  const Vector x = bench_x();
  const GradientBundle bundle = batch_gradient(spec, data, x, full_batch());
  for (auto _ : state) {
    BatchStats s = serial::compute_batch_stats(bundle, bundle.batch_mean);
    benchmark::DoNotOptimize(s.var_inner);
  }
}

BENCHMARK(BM_batch_gradient_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch_gradient_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch_stats_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch_stats_serial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
