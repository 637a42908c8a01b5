#include <benchmark/benchmark.h>

#include "mechsq/core_model.hpp"
#include "mechsq/feedback.hpp"
#include "mechsq/fock_space.hpp"
#include "mechsq/gaussian_dynamics.hpp"
#include "mechsq/master_equation.hpp"
#include "mechsq/observables.hpp"

using namespace mechsq;

namespace {

const SystemParams kWorkingPoint{0.1, 8.0, 1.0, 0.1, 0.0};

CMatrix initial_joint(const FockSpace& space) {
    return joint_state(kQubitExcited, thermal_state(0.5, space), space).matrix();
}

void BM_LindbladRhs(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    const MasterEquation eq(build_h1(kWorkingPoint, space), kWorkingPoint, space);
    const CMatrix rho = initial_joint(space);
    CMatrix out(rho.rows(), rho.cols());
    for (auto _ : state) {
        eq.rhs(rho, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_LindbladRhs)->Arg(20)->Arg(40)->Arg(80)->Arg(160);

void BM_PropagatorQubitPeriod(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    Propagator prop(build_h1(kWorkingPoint, space), kWorkingPoint, space, default_fock_step(kWorkingPoint));
    CMatrix rho = initial_joint(space);
    for (auto _ : state) {
        prop.advance(rho, optimal_dt(kWorkingPoint));
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(BM_PropagatorQubitPeriod)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_MeasureAndReset(benchmark::State& state) {
    const FockSpace space(40);
    const auto rho = DensityMatrix::unchecked(initial_joint(space));
    for (auto _ : state) benchmark::DoNotOptimize(measure_and_reset(rho, space));
}
BENCHMARK(BM_MeasureAndReset);

void BM_LyapunovSteady(benchmark::State& state) {
    const auto dd = build_drift_diffusion(kWorkingPoint, build_effective_hamiltonian_matrix(kWorkingPoint));
    for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov_steady(dd));
}
BENCHMARK(BM_LyapunovSteady);

void BM_WignerGrid(benchmark::State& state) {
    const FockSpace space(40);
    const auto rho = DensityMatrix::unchecked(initial_joint(space));
    const auto axis = linspace(-4.0, 4.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wigner_grid(rho, space, axis, axis));
}
BENCHMARK(BM_WignerGrid)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
