#include <benchmark/benchmark.h>

#include <cstdint>
#include <variant>

#include "mmgeo/montecarlo.hpp"
#include "mmgeo/scenario.hpp"

using namespace mmgeo;

namespace {

Scenario open_scenario() {
    Scenario s;
    s.d = 75.0;
    s.theta_bt = s.theta_br = deg2rad(30.0);
    s.phi_t = deg2rad(94.0);
    s.phi_r = deg2rad(51.0);
    s.lambda_b = 2e-5;
    s.moments = {15.0, 15.0, 225.0, 225.0};
    return s;
}

void BM_GenerateScene(benchmark::State& state) {
    const Scenario s = open_scenario();
    SceneConfig cfg;
    std::uint64_t index = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_scene(s, cfg, index++));
}
BENCHMARK(BM_GenerateScene);

void BM_GenerateSceneDense(benchmark::State& state) {
    Scenario s = open_scenario();
    s.lambda_b = 12e-5;
    s.moments = {25.0, 25.0, 625.0, 625.0};
    SceneConfig cfg;
    std::uint64_t index = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_scene(s, cfg, index++));
}
BENCHMARK(BM_GenerateSceneDense);

void BM_TraceFirstOrder(benchmark::State& state) {
    const Scenario s = open_scenario();
    SceneConfig cfg;
    const Scene sc = generate_scene(s, cfg, 7);
    for (auto _ : state) benchmark::DoNotOptimize(trace_first_order(sc, s));
}
BENCHMARK(BM_TraceFirstOrder);

void BM_TraceSecondOrder(benchmark::State& state) {
    const Scenario s = open_scenario();
    SceneConfig cfg;
    const Scene sc = generate_scene(s, cfg, 7);
    for (auto _ : state) benchmark::DoNotOptimize(trace_second_order(sc, s));
}
BENCHMARK(BM_TraceSecondOrder);

void BM_EstimateCount(benchmark::State& state) {
    const Scenario s = open_scenario();
    SceneConfig cfg;
    cfg.realizations = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.master_seed = seed++;
        benchmark::DoNotOptimize(
            std::get<EstimateWithCI>(estimate(s, cfg, EstimateKind::Count)));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(cfg.realizations));
}
BENCHMARK(BM_EstimateCount)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
