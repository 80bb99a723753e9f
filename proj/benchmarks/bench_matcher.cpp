#include <random>

#include <benchmark/benchmark.h>

#include "ouroboros/matcher.hpp"

using namespace ouroboros;

namespace {

void BM_AssignExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> weights(n);
    std::vector<std::vector<double>> scores(n, std::vector<double>(n));
    for (auto& w : weights) w = u(rng);
    for (auto& row : scores)
        for (auto& s : row) s = u(rng) < 0.3 ? 0.0 : u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(assign_exact(weights, scores));
}
BENCHMARK(BM_AssignExact)->DenseRange(2, 14, 4);

void BM_ConsumptionAnalysis(benchmark::State& state) {
    Schema face;
    face.id = "FACE";
    for (const char* d : {"eye", "eye", "nose", "mouth", "ear", "ear", "chin", "brow"})
        face.slots.push_back({DimensionId(d), ExactSymbol{d}, 0.7, std::nullopt});
    SchemaStore store;
    store.insert(face);
    std::vector<FeatureDatum> features;
    for (const char* d : {"eye", "nose", "ear", "brow", "eye", "tail"})
        features.push_back({DimensionId(d), std::string(d), std::nullopt, 0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(consumption_analysis(store, "FACE", features, 1));
}
BENCHMARK(BM_ConsumptionAnalysis);

}  // namespace
