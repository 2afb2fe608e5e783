#include <benchmark/benchmark.h>

#include "ids/classifiers.hpp"
#include "ids/cli.hpp"
#include "ids/ensemble.hpp"
#include "ids/featsel.hpp"

namespace {

using namespace ids;

const Dataset& flows() {
  static const Dataset data =
      cli::synthetic_dataset({.rows = 20000, .numeric = 24, .nominal = 4, .noise = 0.05, .seed = 1});
  return data;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp x" + std::to_string(thread_count()));
}

void BM_RankAttributes(benchmark::State& state) {
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(rank_attributes(flows(), {}, exec));
  label(state);
}
BENCHMARK(BM_RankAttributes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ForestTrain(benchmark::State& state) {
  const auto exec = exec_of(state);
  ForestConfig cfg;
  cfg.n_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(train_random_forest(flows(), cfg, exec));
  label(state);
}
BENCHMARK(BM_ForestTrain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KnnPredictAll(benchmark::State& state) {
  const auto exec = exec_of(state);
  const std::vector<std::size_t> rows = [] {
    std::vector<std::size_t> r(2000);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i * 7;
    return r;
  }();
  static const auto model = train_knn(flows(), 1);
  const Dataset queries = flows().subset(rows);
  for (auto _ : state) benchmark::DoNotOptimize(predict_all(model, queries, exec));
  label(state);
}
BENCHMARK(BM_KnnPredictAll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MetaFeatures(benchmark::State& state) {
  const auto exec = exec_of(state);
  auto cfg = StackingConfig::hybrid(0);
  for (auto& base : cfg.base_learners) base.forest.n_trees = 10;
  for (auto _ : state) benchmark::DoNotOptimize(generate_meta_features(flows(), cfg, {}, exec));
  label(state);
}
BENCHMARK(BM_MetaFeatures)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
