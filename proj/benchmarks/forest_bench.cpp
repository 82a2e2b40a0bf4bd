#include <benchmark/benchmark.h>

#include "ssarf/dataset.hpp"
#include "ssarf/forest.hpp"
#include "ssarf/tuner.hpp"

namespace {

auto synthetic(std::size_t rows) -> ssarf::LabeledData
{
    return ssarf::encode(ssarf::make_synthetic_dataset(rows, 0.1, 7));
}

void BM_FitForest(benchmark::State& state)
{
    auto const data = synthetic(static_cast<std::size_t>(state.range(0)));
    auto params = ssarf::default_params(data.features.cols());
    params.n_trees = 100;
    for (auto _ : state) {
        auto forest = ssarf::fit(data.features, data.labels, params, 1);
        benchmark::DoNotOptimize(forest);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(params.n_trees));
}
BENCHMARK(BM_FitForest)->Arg(500)->Arg(1400)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state)
{
    auto const data = synthetic(1400);
    auto const forest = ssarf::fit(data.features, data.labels, ssarf::default_params(data.features.cols()), 1);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssarf::predict(forest, data.features.row(i++ % data.size())));
    }
}
BENCHMARK(BM_Predict);

void BM_CvFitness(benchmark::State& state)
{
    auto const data = synthetic(1400);
    auto const v = ssarf::encode_search_vector(ssarf::default_params(data.features.cols()));
    auto const trees = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssarf::cv_fitness(v, data, 5, 3, trees));
    }
}
BENCHMARK(BM_CvFitness)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace
