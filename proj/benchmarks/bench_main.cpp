#include <benchmark/benchmark.h>

#include <vector>

#include "bosecool/analysis.hpp"
#include "bosecool/kinetics.hpp"
#include "bosecool/oscillator.hpp"
#include "bosecool/rates1d.hpp"
#include "bosecool/rates3d.hpp"

using namespace bosecool;

static void BM_FranckCondon(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oscillator::franck_condon(l, 20, 3.0));
}
BENCHMARK(BM_FranckCondon)->Arg(5)->Arg(25)->Arg(45);

static void BM_DeltaC(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oscillator::delta_c(n, n, n / 2));
}
BENCHMARK(BM_DeltaC)->Arg(5)->Arg(20)->Arg(39);

static void BM_RateTables1D(benchmark::State& state) {
  TrapModel trap;
  trap.levels = static_cast<int>(state.range(0));
  rates1d::CoolingParams cool;
  for (auto _ : state)
    benchmark::DoNotOptimize(rates1d::build_rate_tables(cool, trap));
}
BENCHMARK(BM_RateTables1D)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

namespace {

OccupationState thermal_state(int atoms, int levels, double mean_n,
                              TrapMode mode) {
  Rng rng(99);
  return analysis::sample_thermal(mean_n, atoms, levels, mode, rng);
}

}  // namespace

static void BM_Engine1DThinnedEvent(benchmark::State& state) {
  TrapModel trap;
  trap.r = 0.4;
  rates1d::CoolingParams cool;
  const rates1d::RateTables tables = rates1d::build_rate_tables(cool, trap);
  kinetics::Channels1D ch;
  ch.tables = &tables;
  ch.cooling = cool;
  ch.collisions = rates1d::Collision1DParams::from_r(0.4);
  kinetics::Engine1D engine(ch, thermal_state(133, 40, 6.0, TrapMode::one_d));
  kinetics::PulseSpec pulse;
  pulse.s = -9;
  engine.begin_pulse(pulse);
  Rng rng(7);
  kinetics::Event ev;
  for (auto _ : state) {
    if (!engine.step(rng, 1e30, &ev)) state.SkipWithError("rate vanished");
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(BM_Engine1DThinnedEvent);

static void BM_KernelFreeze3D(benchmark::State& state) {
  const rates3d::ShellGeometry geo = rates3d::ShellGeometry::ergodic(
      static_cast<int>(state.range(0)), 2.0,
      rates1d::EmissionPattern::isotropic);
  rates3d::ShellCoolingKernel kernel(geo, 0.04, 1.0);
  kernel.set_pulse(-4.0, {cplx(1, 0), cplx(1, 0), cplx(1, 0)});
  const OccupationState occ =
      thermal_state(133, geo.nshells(), 6.0, TrapMode::three_d_ergodic);
  for (auto _ : state) {
    kernel.freeze(occ);
    benchmark::DoNotOptimize(kernel.strength(1, 0));
  }
}
BENCHMARK(BM_KernelFreeze3D)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_Engine3DCollisionEvent(benchmark::State& state) {
  const rates3d::ShellGeometry geo =
      rates3d::ShellGeometry::ergodic(15, 2.0,
                                      rates1d::EmissionPattern::isotropic);
  kinetics::Channels3D ch;
  ch.geometry = &geo;
  ch.shells.nmax = 14;
  ch.shells.Delta = 1.5e-5;
  kinetics::Engine3D engine(
      ch, thermal_state(133, 15, 6.0, TrapMode::three_d_ergodic));
  Rng rng(7);
  kinetics::Event ev;
  for (auto _ : state) {
    if (!engine.step(rng, 1e30, &ev)) state.SkipWithError("rate vanished");
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(BM_Engine3DCollisionEvent);

BENCHMARK_MAIN();
