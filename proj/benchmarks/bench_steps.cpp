#include <benchmark/benchmark.h>

#include "spinsplit/diagnostics.hpp"
#include "spinsplit/fields.hpp"
#include "spinsplit/flows.hpp"
#include "spinsplit/integrators.hpp"

using namespace spinsplit;

namespace {

ModelParams thermo_params(int n) {
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 0.9};
    p.temperature = 0.04;
    p.alpha0 = -0.5;
    p.coupling = 1.0 / n;
    return p;
}

ThermoState make_state(int n) {
    return ThermoState{random_lattice(n, 1, BoundaryCondition::periodic()), 0.0};
}

void BM_ConservativeStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    ThermoState s = make_state(n);
    for (auto _ : state) {
        s = conservative_step(std::move(s), p, 0.05);
        benchmark::DoNotOptimize(s.lat.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_DissipativeStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    ThermoState s = make_state(n);
    for (auto _ : state) {
        s = dissipative_step(std::move(s), p, 0.05);
        benchmark::DoNotOptimize(s.lat.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_ThermostatStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    ThermoState s = make_state(n);
    for (auto _ : state) {
        s = thermostat_step(std::move(s), p, 0.01);
        benchmark::DoNotOptimize(s.lat.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_Rk4ProjectedStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    ThermoState s = make_state(n);
    for (auto _ : state) {
        s = rk4_projected_step(std::move(s), p, Dynamics::Thermostatted, 0.005);
        benchmark::DoNotOptimize(s.lat.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_TotalEnergy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    const ThermoState s = make_state(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(total_energy(s.lat, p));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_AlphaRate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = thermo_params(n);
    const ThermoState s = make_state(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(alpha_rate(s.lat, p));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_MaxLaplacian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ThermoState s = make_state(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_laplacian_norm(s.lat));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

}  // namespace

BENCHMARK(BM_ConservativeStep)->Arg(50)->Arg(128)->Arg(256);
BENCHMARK(BM_DissipativeStep)->Arg(50)->Arg(128)->Arg(256);
BENCHMARK(BM_ThermostatStep)->Arg(50)->Arg(128)->Arg(256);
BENCHMARK(BM_Rk4ProjectedStep)->Arg(50)->Arg(128);
BENCHMARK(BM_TotalEnergy)->Arg(50)->Arg(256);
BENCHMARK(BM_AlphaRate)->Arg(50)->Arg(256);
BENCHMARK(BM_MaxLaplacian)->Arg(50)->Arg(256);

BENCHMARK_MAIN();
