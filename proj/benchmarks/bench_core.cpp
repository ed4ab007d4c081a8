#include <benchmark/benchmark.h>

#include <cmath>

#include "hartree/operators.hpp"
#include "hartree/solver.hpp"

namespace {

hartree::Field gaussian(const hartree::Grid& grid) {
    return hartree::sample(grid, [](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::exp(-r2);
    });
}

void BM_ForwardInverse(benchmark::State& state) {
    const hartree::Grid grid(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)), 40.0);
    const auto f = gaussian(grid);
    for (auto _ : state) benchmark::DoNotOptimize(hartree::inverse_transform(hartree::forward_transform(f)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ForwardInverse)->Args({1, 1024})->Args({1, 4096})->Args({1, 65536})->Args({2, 128})->Args({2, 512});

void BM_FreeSpaceConvolution(benchmark::State& state) {
    const hartree::Grid grid(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)), 40.0);
    const hartree::FreeSpaceConvolver conv(grid, hartree::KernelSpec::riesz(0.5));
    const auto f = gaussian(grid);
    for (auto _ : state) benchmark::DoNotOptimize(conv.apply(f));
}
BENCHMARK(BM_FreeSpaceConvolution)->Args({1, 1024})->Args({1, 4096})->Args({2, 128});

// Kernel spectrum setup dominates single convolutions, so it is timed on its own.
void BM_ConvolverSetup(benchmark::State& state) {
    const hartree::Grid grid(1, static_cast<std::size_t>(state.range(0)), 40.0);
    for (auto _ : state) benchmark::DoNotOptimize(hartree::FreeSpaceConvolver(grid, hartree::KernelSpec::riesz(0.5)));
}
BENCHMARK(BM_ConvolverSetup)->Arg(1024)->Arg(4096);

void BM_EtdStep(benchmark::State& state) {
    hartree::ProblemSpec spec(hartree::Grid(1, static_cast<std::size_t>(state.range(0)), 40.0));
    spec.p = 2.0;
    spec.q = 1.0;
    const hartree::EtdStepper stepper(spec);
    const auto u = hartree::sample_initial_data(spec.initial, spec.grid);
    for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u, 1e-3));
}
BENCHMARK(BM_EtdStep)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
