// Microbenchmarks for the hot paths: operator construction, closed-system
// propagation per unit time, the reduced-density-matrix sampling, and a full
// stochastic trajectory with jumps.
//
// Run with --benchmark_min_time=0.1 for a quick sweep.

#include <benchmark/benchmark.h>

#include <vector>

#include "msgate/dynamics.hpp"
#include "msgate/effective.hpp"
#include "msgate/fockspace.hpp"
#include "msgate/open_system.hpp"

using namespace msgate;

namespace {

const std::vector<DriveField> kMonoPair = {{1, 0.1, +0.9, 0.0}, {2, 0.1, -0.9, 0.0}};
const std::vector<DriveField> kBichromatic = {
    {1, 0.1, +0.9, 0.0}, {1, 0.1, -0.9, 0.0}, {2, 0.1, +0.9, 0.0}, {2, 0.1, -0.9, 0.0}};

SimParams make_params(int n_max, double t_final) {
  SimParams p;
  p.eta = 0.1;
  p.basis.n_max = n_max;
  p.t_final = t_final;
  return p;
}

}  // namespace

static void BM_DisplacementUnitary(benchmark::State& state) {
  BasisSpec basis{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(displacement_unitary(0.1, basis).mat);
  state.SetLabel("eigendecomposition build");
}
BENCHMARK(BM_DisplacementUnitary)->Arg(15)->Arg(30)->Arg(60);

static void BM_HamiltonianBuild(benchmark::State& state) {
  SimParams p = make_params(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_hamiltonian(kBichromatic, DetuningSchedule{}, p, 0.37).mat);
}
BENCHMARK(BM_HamiltonianBuild)->Arg(15)->Arg(30);

static void BM_ClosedEvolutionPerPeriod(benchmark::State& state) {
  // One trap period (2*pi) of closed evolution, including sampling.
  SimParams p = make_params(static_cast<int>(state.range(0)), 2.0 * 3.14159265358979323846);
  const StateVector psi0 =
      product_state(Eigen::Vector4cd::Unit(GG), make_vib_state(Fock{0}, p.basis), p.basis);
  EvolveOptions opts;
  opts.sample_dt = p.t_final;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi0, kMonoPair, DetuningSchedule{}, p, opts));
}
BENCHMARK(BM_ClosedEvolutionPerPeriod)->Arg(10)->Arg(20)->Arg(30);

static void BM_PartialTrace(benchmark::State& state) {
  BasisSpec basis{static_cast<int>(state.range(0))};
  const StateVector psi = product_state(
      (Eigen::Vector4cd() << 0.5, 0.5, 0.5, 0.5).finished(),
      make_vib_state(Coherent{{1.0, 0.5}}, basis), basis);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace_internal(psi));
}
BENCHMARK(BM_PartialTrace)->Arg(30)->Arg(120);

static void BM_StochasticTrajectory(benchmark::State& state) {
  // Short heated trajectory: dominated by the stepper plus jump bookkeeping.
  SimParams p = make_params(14, 100.0);
  const StateVector psi0 =
      product_state(Eigen::Vector4cd::Unit(GG), make_vib_state(Fock{1}, p.basis), p.basis);
  const HeatingParams heating{0.01, 1.0};
  EvolveOptions opts;
  opts.sample_dt = 10.0;
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mcwf_trajectory(psi0, kMonoPair, DetuningSchedule{}, p, heating, seed++, opts));
}
BENCHMARK(BM_StochasticTrajectory);

static void BM_EffectivePropagator(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bichromatic_propagator(-1e-3, 1570.0));
}
BENCHMARK(BM_EffectivePropagator);

BENCHMARK_MAIN();
