#include <benchmark/benchmark.h>

#include "mmgeo/first_order.hpp"
#include "mmgeo/pdp.hpp"
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

void BM_AvgFirstOrderExact(benchmark::State& state) {
    const Scenario s = open_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(avg_first_order_exact(s));
}
BENCHMARK(BM_AvgFirstOrderExact);

void BM_AvgFirstOrderClosed(benchmark::State& state) {
    const Scenario s = open_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(avg_first_order_closed(s));
}
BENCHMARK(BM_AvgFirstOrderClosed);

void BM_AvgFirstOrderExactUniform(benchmark::State& state) {
    Scenario s = open_scenario();
    s.orientation = OrientationModel::UniformOverPi;
    for (auto _ : state) benchmark::DoNotOptimize(avg_first_order_exact(s));
}
BENCHMARK(BM_AvgFirstOrderExactUniform);

void BM_PathLossExact(benchmark::State& state) {
    const Scenario s = open_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(path_loss_exact(s));
}
BENCHMARK(BM_PathLossExact);

void BM_DelayStats(benchmark::State& state) {
    const Scenario s = open_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(delay_stats(s));
}
BENCHMARK(BM_DelayStats);

void BM_DelayStatsFirstOrderOnly(benchmark::State& state) {
    Scenario s = open_scenario();
    s.second_order = false;
    for (auto _ : state) benchmark::DoNotOptimize(delay_stats(s));
}
BENCHMARK(BM_DelayStatsFirstOrderOnly);

void BM_PdpEval(benchmark::State& state) {
    const Scenario s = open_scenario();
    const PdpModel m = pdp_model(s);
    const double tau = 0.5 * (m.tau_min + m.tau_max);
    for (auto _ : state) benchmark::DoNotOptimize(pdp(m, tau));
}
BENCHMARK(BM_PdpEval);

void BM_PdpCurve(benchmark::State& state) {
    const Scenario s = open_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(pdp_curve(s));
}
BENCHMARK(BM_PdpCurve);

}  // namespace

BENCHMARK_MAIN();
