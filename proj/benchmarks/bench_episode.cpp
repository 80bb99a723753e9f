#include <filesystem>

#include <benchmark/benchmark.h>

#include "ouroboros/loop_engine.hpp"

using namespace ouroboros;

namespace {

std::filesystem::path data(const char* name) { return std::filesystem::path(OUROBOROS_DATA_DIR) / name; }

void BM_FaceEpisode(benchmark::State& state) {
    const auto store = load_store(data("face.store"));
    const auto scenario = build_scenario(data("face.scenario"));
    for (auto _ : state) benchmark::DoNotOptimize(run_episode(store, MonitorState{}, scenario, EngineConfig{}));
}
BENCHMARK(BM_FaceEpisode);

void BM_FlipEpisode(benchmark::State& state) {
    const auto store = load_store(data("duck_rabbit.store"));
    const auto scenario = build_scenario(data("duck_rabbit.scenario"));
    const EpisodeLimits limits{state.range(0), false};
    for (auto _ : state)
        benchmark::DoNotOptimize(run_episode(store, MonitorState{}, scenario, EngineConfig{}, limits));
}
BENCHMARK(BM_FlipEpisode)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
