// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include <vector>

#include "skorokhod/diffusion.hpp"
#include "skorokhod/obstacle_solver.hpp"
#include "skorokhod/rng.hpp"

using namespace skorokhod;

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
    Philox4x32::Counter ctr{0, 0, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(Philox4x32::generate(ctr, {7, 11}));
        ++ctr[0];
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_PhiloxBlock);

void BM_GaussianPotential(benchmark::State& state) {
    const auto m = Measure::gaussian(0.0, 1.0);
    std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -8.0 + 16.0 * static_cast<double>(i) / xs.size();
    for (auto _ : state) benchmark::DoNotOptimize(m.potential(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussianPotential)->Arg(600)->Arg(6000);

void BM_SolveUniform(benchmark::State& state) {
    SolveGrid g;
    g.x_min = -2.0;
    g.x_max = 2.0;
    g.n_x = static_cast<int>(state.range(0)) + 1;
    g.n_t = static_cast<int>(state.range(0));
    const EmbeddingProblem p{Measure::dirac(0.0), Measure::uniform(-1.0, 1.0), DiffusionSpec::brownian()};
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, g));
}
BENCHMARK(BM_SolveUniform)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SimulateConstantBarrier(benchmark::State& state) {
    SimParams sim;
    sim.n_paths = 2000;
    sim.dt = 1e-3;
    sim.seed = 1;
    sim.threads = 1;
    const auto r = Barrier::constant({-10.0, 10.0}, 1.0, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_stopped(DiffusionSpec::brownian(), Measure::dirac(0.0), r, sim));
    }
    // steps per path = r / dt
    state.SetItemsProcessed(state.iterations() * sim.n_paths * 1000);
}
BENCHMARK(BM_SimulateConstantBarrier)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
