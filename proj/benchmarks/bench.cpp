#include <benchmark/benchmark.h>

#include <vector>

#include "glj/density.hpp"
#include "glj/field.hpp"
#include "glj/meissner.hpp"
#include "glj/polar.hpp"
#include "glj/vortex.hpp"

using namespace glj;

namespace {

ModelParams thin(double eps, std::size_t nr) {
  ModelParams p;
  p.eps = eps;
  p.nr = nr;
  return p;
}

DensityProfile profile(double eps, std::size_t nr) {
  const auto p = thin(eps, nr);
  const auto g = p.geometry();
  return solve_density(p, g, build_mesh(g, eps, nr));
}

void BM_density(benchmark::State& state) {
  const auto p = thin(0.01, static_cast<std::size_t>(state.range(0)));
  const auto g = p.geometry();
  const auto mesh = build_mesh(g, p.eps, p.nr);
  for (auto _ : state) benchmark::DoNotOptimize(solve_density(p, g, mesh).c0_energy);
}
BENCHMARK(BM_density)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_london(benchmark::State& state) {
  const auto prof = profile(0.01, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_london(prof).j0_energy);
}
BENCHMARK(BM_london)->Arg(4000)->Arg(16000)->Unit(benchmark::kMicrosecond);

void BM_field(benchmark::State& state) {
  const auto prof = profile(0.01, static_cast<std::size_t>(state.range(0)));
  const auto lf = solve_london(prof);
  auto p = prof.params;
  p.H = std::nullopt;
  for (auto _ : state) benchmark::DoNotOptimize(solve_field_state(p, prof, lf).residual);
}
BENCHMARK(BM_field)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_polar_solve(benchmark::State& state) {
  const auto nt = static_cast<std::size_t>(state.range(0));
  const auto g = make_geometry(ThinRegime{1.0}, 0.04, 0.5);
  const auto grid = make_polar_grid(build_mesh(g, 0.04, 256), nt);
  PolarFvSolver solver(grid, std::vector<double>(grid.nr() - 1, 1.0), std::vector<double>(grid.nr(), 1.0), 1.0,
                       Boundary::dirichlet);
  std::vector<double> load(grid.size(), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(load).data());
}
BENCHMARK(BM_polar_solve)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_pinned(benchmark::State& state) {
  const auto prof = profile(0.04, 4000);
  const auto grid = make_polar_grid(build_mesh(prof.geometry, 0.04, 256), 512);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_pinned_configuration(n, prof.params, prof, grid).phase_residual);
}
BENCHMARK(BM_pinned)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
