#include <benchmark/benchmark.h>

#include <vector>

#include "dwm/boost.hpp"
#include "dwm/dynamics.hpp"
#include "dwm/spectral.hpp"

namespace {

dwm::TridiagonalHamiltonian pt_hamiltonian(int sites) {
  dwm::LatticeModel model{(sites - 1) / 2, {}};
  dwm::PotentialSpec spec{dwm::PoschlTeller{1.27, 5.0, 0.0}, 0.0};
  return dwm::assemble_hamiltonian(model, spec, 0.0);
}

void BM_Eigendecompose(benchmark::State& state) {
  const auto h = pt_hamiltonian(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto rep = dwm::eigendecompose(h);
    benchmark::DoNotOptimize(rep.eigenvalues.data());
  }
}
BENCHMARK(BM_Eigendecompose)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_SturmCount(benchmark::State& state) {
  const auto h = pt_hamiltonian(401);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dwm::sturm_count_below(h, -2.0));
  }
}
BENCHMARK(BM_SturmCount);

void BM_Rk4Step(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  dwm::LatticeModel model{(sites - 1) / 2, {}};
  dwm::PotentialSpec spec{dwm::PoschlTeller{0.97, 5.0, 0.0}, 1.5};
  dwm::WaveState c = dwm::harmonic_ground_state(model, 0.02, 1.0, 0.0);
  for (auto _ : state) {
    c = dwm::rk4_step(c, spec, model, 0.01);
    benchmark::DoNotOptimize(c.amplitudes.data());
  }
}
BENCHMARK(BM_Rk4Step)->Arg(401)->Arg(1601);

void BM_SolveBoost(benchmark::State& state) {
  double v = 0.0;
  for (auto _ : state) {
    v += 1e-9;
    benchmark::DoNotOptimize(dwm::solve_boost(v > 1.9 ? 1.5 : v));
  }
}
BENCHMARK(BM_SolveBoost);

void BM_MomentumExtrema(benchmark::State& state) {
  for (auto _ : state) {
    auto ext = dwm::momentum_potential_extrema(0.4);
    benchmark::DoNotOptimize(ext.data());
  }
}
BENCHMARK(BM_MomentumExtrema);

}  // namespace

BENCHMARK_MAIN();
