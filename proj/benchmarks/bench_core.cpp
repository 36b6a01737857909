#include "snrd/attractor.hpp"
#include "snrd/kernel.hpp"
#include "snrd/noise.hpp"
#include "snrd/semigroup.hpp"
#include "snrd/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace snrd;

Field test_field(const Grid& g) {
    return Field::sample(g, [](double x) { return x * std::exp(-x / 2.0); });
}

void BM_ApplyK(benchmark::State& state) {
    const Grid g(20.0, static_cast<int>(state.range(0)));
    const NonlocalOperator k(KernelParams(1.0), g);
    const Field f = test_field(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.apply(f));
    }
}
BENCHMARK(BM_ApplyK)->Arg(200)->Arg(400);

void BM_SemigroupMatrix(benchmark::State& state) {
    const Grid g(20.0, static_cast<int>(state.range(0)));
    const DirichletSemigroup s(SemigroupParams(1.0, g));
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.matrix(0.5));
    }
}
BENCHMARK(BM_SemigroupMatrix)->Arg(200)->Arg(400);

void BM_OUValue(benchmark::State& state) {
    const double dt = 0.01;
    const WienerPath w = sample_wiener(1, -45.0, 1.0, dt, 1);
    const OUKernel ou(OUParams(1.0), dt);
    long k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ou.at_knot(w, 0, k));
        k = (k + 1) % 100;
    }
}
BENCHMARK(BM_OUValue);

// One unit of simulated time: 100 method-of-steps updates at N = 200.
void BM_SolveUnitTime(benchmark::State& state) {
    const Grid g(20.0, 200);
    const ModelParams p;
    SolverConfig cfg;
    cfg.dt = 0.01;
    const DelaySolver solver(p, cfg, g);
    const WienerPath w = sample_wiener(1, -25.0, 1.5, cfg.dt, 2);
    const Segment psi = Segment::constant(g, p.tau, cfg.dt, test_field(g));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(psi, w, 1.0));
    }
}
BENCHMARK(BM_SolveUnitTime)->Unit(benchmark::kMillisecond);

void BM_PullbackSolve(benchmark::State& state) {
    const Grid g(20.0, 200);
    const ModelParams p;
    SolverConfig cfg;
    cfg.dt = 0.025;
    const DelaySolver solver(p, cfg, g);
    const WienerPath w = sample_wiener(1, -35.0, 0.5, cfg.dt, 3);
    const Segment phi = Segment::constant(g, p.tau, cfg.dt, test_field(g));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pullback_solve(solver, phi, w, 10.0));
    }
}
BENCHMARK(BM_PullbackSolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
