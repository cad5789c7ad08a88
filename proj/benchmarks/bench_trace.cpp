// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include <benchmark/benchmark.h>

#include "owsim/metrics.hpp"
#include "owsim/raytrace.hpp"
#include "owsim/scene.hpp"
#include "owsim/steering.hpp"

using namespace owsim;

namespace {

const Scenario& scenario() {
    static const Scenario s = default_scenario();
    return s;
}

void BM_BuildRoom(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_room(scenario().room));
    }
}
BENCHMARK(BM_BuildRoom)->Unit(benchmark::kMillisecond);

void BM_TraceDirect(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_unsteered(scenario(), {2.0, 4.0, 1.0}, 0));
    }
}
BENCHMARK(BM_TraceDirect)->Unit(benchmark::kMicrosecond);

void BM_TraceFirstOrder(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_unsteered(scenario(), {2.0, 4.0, 1.0}, 1));
    }
}
BENCHMARK(BM_TraceFirstOrder)->Unit(benchmark::kMillisecond);

void BM_TraceSecondOrder(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_unsteered(scenario(), {2.0, 4.0, 1.0}, 2));
    }
}
BENCHMARK(BM_TraceSecondOrder)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_SteeredTrace(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(steered_trace(scenario(), {2.0, 4.0, 1.0}, {1.0, 3.0, 3.0}, 2.0));
    }
}
BENCHMARK(BM_SteeredTrace)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ProbeSnr(benchmark::State& state) {
    Region region;
    region.center = {1.0, 3.0, 3.0};
    region.half_x = 0.42;
    region.half_y = 0.42;
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_snr(scenario(), {2.0, 4.0, 1.0}, region));
    }
}
BENCHMARK(BM_ProbeSnr)->Unit(benchmark::kMicrosecond);

void BM_Acquisition(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_acquisition(scenario(), {2.0, 4.0, 1.0}));
    }
}
BENCHMARK(BM_Acquisition)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
