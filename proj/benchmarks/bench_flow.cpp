#include <benchmark/benchmark.h>

#include "loewner/flow.hpp"
#include "loewner/rng.hpp"
#include "loewner/slit_map.hpp"

using namespace loewner;

static void BM_SlitForward(benchmark::State& state) {
    Complex z(0.3, 0.7);
    for (auto _ : state) {
        z = slit_forward(z, 0.1, 1e-3, 1.0);
        benchmark::DoNotOptimize(z);
        if (z.imag() > 10.0) z = Complex(0.3, 0.7);
    }
}
BENCHMARK(BM_SlitForward);

static void BM_ForwardFlow(benchmark::State& state) {
    auto chain = chain_from_path(sample_brownian(2.0, state.range(0), 1e-3, 7));
    for (auto _ : state) {
        auto r = forward_flow(chain, HalfPlanePoint(0.0, 1.0));
        benchmark::DoNotOptimize(r.value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardFlow)->Arg(1000)->Arg(10000);

static void BM_ReverseTipDeriv(benchmark::State& state) {
    auto path = sample_brownian(2.0, state.range(0), 1e-3, 11);
    for (auto _ : state) {
        auto r = reverse_flow_tip(path, state.range(0), Complex(0.0, 0.1), 1.0);
        benchmark::DoNotOptimize(r.deriv);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReverseTipDeriv)->Arg(1000)->Arg(10000);

static void BM_BrownianSample(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto path = sample_brownian(2.0, 10000, 1e-3, seed++);
        benchmark::DoNotOptimize(path.values.back());
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BrownianSample);

BENCHMARK_MAIN();
