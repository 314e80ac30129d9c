#include <benchmark/benchmark.h>

#include "superres/adversarial.hpp"
#include "superres/experiments.hpp"
#include "superres/oracle.hpp"
#include "superres/pencil.hpp"

using namespace superres;

static void BM_Recover(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = make_positive_signal(std::vector<double>{1.0, 1.5, 2.0}, std::vector<double>{-3.0, 0.0, 3.5});
  const auto m = sample_measurement(f, MeasurementGrid(1.0, n), 1e-6, NoiseModel::uniform_disk(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(recover(m, 3));
}
BENCHMARK(BM_Recover)->Arg(17)->Arg(33)->Arg(65)->Arg(129);

static void BM_PronyFromMoments(benchmark::State& state) {
  const auto f = make_positive_signal(std::vector<double>{1.0, 2.0, 0.5}, std::vector<double>{-0.4, 0.1, 0.3});
  const auto mu = real_moments(f, 5);
  for (auto _ : state) benchmark::DoNotOptimize(prony_from_moments(mu));
}
BENCHMARK(BM_PronyFromMoments);

static void BM_AdversarialPair(benchmark::State& state) {
  const ClusterSpec spec{.d = 3, .p = 2, .h = 0.08, .big_t = 4.0, .tau = 1.0, .eta = 0.25};
  const auto f = make_cluster_signal(spec, FixedAmplitudes{{1.0, 1.5, 1.2}}, 7, true);
  for (auto _ : state) benchmark::DoNotOptimize(build_adversarial_pair(f, spec, 1e-5, 1.0));
}
BENCHMARK(BM_AdversarialPair)->Unit(benchmark::kMillisecond);

static void BM_OracleSingleSpike(benchmark::State& state) {
  const auto f = make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0});
  const int res = static_cast<int>(state.range(0));
  const auto box = proportional_box(1, 0.1, 1.0, {});
  for (auto _ : state) benchmark::DoNotOptimize(error_set_diameters(f, 0.1, 1.0, box, res, 64, 1));
}
BENCHMARK(BM_OracleSingleSpike)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_SingleTrial(benchmark::State& state) {
  ExperimentConfig config;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_single_trial(config, 8.0, seed++));
}
BENCHMARK(BM_SingleTrial);
BENCHMARK_MAIN();
