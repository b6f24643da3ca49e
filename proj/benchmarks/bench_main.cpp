#include "pathreg/experiments.hpp"
#include "pathreg/grid.hpp"
#include "pathreg/logistic.hpp"
#include "pathreg/ridge.hpp"
#include "pathreg/sampling.hpp"
#include "pathreg/tables.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

namespace {

using namespace pathreg;

const ContingencyTable222& fixture_table() {
  static const ContingencyTable222 table = read_table_csv(PATHREG_FIXTURE_DIR "/pathological-default.csv");
  return table;
}

std::vector<Dataset> sampled_datasets(std::uint64_t n, std::size_t count) {
  std::vector<Dataset> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(encode(sample_uniform_table(n, 7, i)));
  return out;
}

void BM_ExactRegime(benchmark::State& state) {
  const auto datasets = sampled_datasets(static_cast<std::uint64_t>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathological_regime_exact(datasets[i++ % datasets.size()]));
  }
}
BENCHMARK(BM_ExactRegime)->Arg(100)->Arg(10000);

void BM_NumericRegime(benchmark::State& state) {
  const auto datasets = sampled_datasets(1000, 16);
  const RegGrid grid = RegGrid::ridge_default();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathological_regime_numeric(datasets[i++ % datasets.size()], grid));
  }
}
BENCHMARK(BM_NumericRegime);

void BM_RidgePathEvaluate(benchmark::State& state) {
  const RidgePath path(encode(fixture_table()), false);
  const RegGrid grid = RegGrid::log_spaced(1e-6, 1e6, 1000);
  for (auto _ : state) {
    double sum = 0.0;
    for (double c : grid.values()) sum += path.coefficient(0, c);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_RidgePathEvaluate);

void BM_LogisticFit(benchmark::State& state) {
  const Dataset dataset = encode(fixture_table());
  const double c = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(dataset, c));
}
BENCHMARK(BM_LogisticFit)->DenseRange(-4, 4, 4);

void BM_LogisticScan(benchmark::State& state) {
  const Dataset dataset = encode(fixture_table());
  const RegGrid grid = RegGrid::logistic_default();
  for (auto _ : state) benchmark::DoNotOptimize(scan_pathological_logistic(dataset, grid));
}
BENCHMARK(BM_LogisticScan)->Unit(benchmark::kMillisecond);

void BM_LogisticCv(benchmark::State& state) {
  const Dataset dataset = encode(fixture_table());
  const RegGrid grid = RegGrid::cv_default(dataset.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_logistic_cv(dataset, grid, 5, WeightScheme::uniform, 1));
  }
}
BENCHMARK(BM_LogisticCv)->Unit(benchmark::kMillisecond);

void BM_SampleTable(benchmark::State& state) {
  SamplerConfig config;
  config.scheme = static_cast<Scheme>(state.range(0));
  config.n = 1000;
  config.seed = 3;
  state.SetLabel(std::string(to_string(config.scheme)));
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_table(config, stream++));
}
BENCHMARK(BM_SampleTable)->DenseRange(0, 2);

void BM_SimpsonBatch(benchmark::State& state) {
  SamplerConfig config;
  config.n = 500;
  config.seed = 5;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_simpson_tables(100, config, Strata::x1, threads));
}
BENCHMARK(BM_SimpsonBatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RatioExperiment(benchmark::State& state) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::ratio_vs_n;
  spec.sizes = {100, 1000};
  spec.m = 500;
  spec.seed = 11;
  for (auto _ : state) benchmark::DoNotOptimize(run_ridge_ratio_experiment(spec));
}
BENCHMARK(BM_RatioExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
