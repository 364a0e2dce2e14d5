#include <benchmark/benchmark.h>

#include "qtopo/evolution.hpp"
#include "qtopo/geometry.hpp"
#include "qtopo/phasescan.hpp"
#include "qtopo/spectra.hpp"

namespace {

using namespace qtopo;

void BM_Eigensystem(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 1.1, kPi, 0.7, 0.6);
  const Operator4 h = build_rotating_hamiltonian(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(eigensystem(h));
}
BENCHMARK(BM_Eigensystem);

void BM_SectorEigenstates(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 1.1, kPi, 0.0, 0.6);
  const Operator4 h = build_hamiltonian(cfg, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(sector_eigenstates(h, PhaseBranch::opposed));
}
BENCHMARK(BM_SectorEigenstates);

void BM_WilsonAllBands(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 1.0, kPi, 0.0, 0.6);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(berry_phases_wilson(cfg, 1.0, steps));
}
BENCHMARK(BM_WilsonAllBands)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_ChernLattice(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 0.0, kPi, 1.5, 1.0);
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chern_lattice(cfg, n, n, Regime::nonadiabatic, threads));
  }
}
BENCHMARK(BM_ChernLattice)
    ->Args({50, 1})
    ->Args({100, 1})
    ->Args({100, 4})
    ->Args({200, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ScanClosed(benchmark::State& state) {
  ScanRequest req;
  req.n_b = req.n_omega = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_diagram(req));
}
BENCHMARK(BM_ScanClosed)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_ScanLattice(benchmark::State& state) {
  ScanRequest req;
  req.n_b = req.n_omega = 8;
  req.method = ScanMethod::lattice;
  req.lattice_size = 40;
  req.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_diagram(req));
}
BENCHMARK(BM_ScanLattice)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PropagatorRk4(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 1.1, kPi, 0.7, 0.6);
  const double period = drive_period(cfg);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagator_rk4(cfg, period, steps));
}
BENCHMARK(BM_PropagatorRk4)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ExtractPhases(benchmark::State& state) {
  const DriveConfig cfg = DriveConfig::make(2.0, 1.1, kPi, 0.7, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(extract_phases(cfg, {1, -1}));
}
BENCHMARK(BM_ExtractPhases)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
