#include <benchmark/benchmark.h>

#include <cmath>

#include "semiheat/diagnostics.hpp"
#include "semiheat/dynamics.hpp"
#include "semiheat/grid.hpp"

namespace {

using namespace semiheat;

Field gaussian(const RadialGrid& g, double a, double w) {
    Field f;
    f.frame = Frame::VFrame;
    f.values.assign(g.size(), 0.0);
    for (int i = 0; i < g.m; ++i)
        f.values[i] = a * std::exp(-g.nodes[i] * g.nodes[i] / (w * w));
    return f;
}

void BM_imex_step(benchmark::State& state) {
    const RadialGrid g = build_grid(3, static_cast<int>(state.range(0)), 16.0);
    ProblemParams params;
    ImexStepper stepper(g, params, Frame::VFrame, 1e-3);
    std::vector<double> v = gaussian(g, 0.1, 2.0).values;
    for (auto _ : state) {
        stepper.step(v);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_imex_step)->Arg(256)->Arg(1024)->Arg(4096);

void BM_diagnostics_sample(benchmark::State& state) {
    const RadialGrid g = build_grid(3, static_cast<int>(state.range(0)), 16.0);
    ProblemParams params;
    Field v = gaussian(g, 0.1, 2.0);
    v.clock = 1.0;
    for (auto _ : state) {
        auto d = compute_sample(g, params, v, {});
        benchmark::DoNotOptimize(d.entropy);
    }
}
BENCHMARK(BM_diagnostics_sample)->Arg(1024);

void BM_weighted_inner(benchmark::State& state) {
    const RadialGrid g = build_grid(3, static_cast<int>(state.range(0)), 16.0);
    const Field v = gaussian(g, 0.1, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_inner(g, v.values, v.values));
    }
}
BENCHMARK(BM_weighted_inner)->Arg(1024)->Arg(4096);

void BM_rhs_v(benchmark::State& state) {
    const RadialGrid g = build_grid(3, static_cast<int>(state.range(0)), 16.0);
    ProblemParams params;
    const Field v = gaussian(g, 0.1, 2.0);
    for (auto _ : state) {
        auto r = rhs_v(g, params, v.values);
        benchmark::DoNotOptimize(r.data());
    }
}
BENCHMARK(BM_rhs_v)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
