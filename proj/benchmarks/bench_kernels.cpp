// Microbenchmarks for the hot kernels: stencil sweeps, right-hand-side
// assembly, full integrator steps and the shock lattice update.

#include <benchmark/benchmark.h>

#include <cmath>

#include "rwave/evolve.hpp"
#include "rwave/shock.hpp"

using namespace rwave;

namespace {

std::shared_ptr<const InitialData> bench_data(int dim, int n, double length,
                                              double lambda) {
  const Grid g = make_grid(dim, n, length);
  BumpDataOptions opts;
  opts.spatial_radius = 2.0;
  opts.measure_order = 2;
  return std::make_shared<InitialData>(
      make_bump_data(BumpProfile::polynomial, 1.0, lambda, g, opts));
}

void BM_partial_derivative_1d(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 32.0);
  const ScalarField f = field_from_function(
      g, [](const std::array<double, 3>& x) { return std::sin(0.3 * x[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(partial_derivative(f, 0, 4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_partial_derivative_1d)->Arg(1024)->Arg(4096);

void BM_laplacian_3d(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 16.0);
  const ScalarField f = field_from_function(g, [](const std::array<double, 3>& x) {
    return std::sin(0.4 * x[0]) * std::cos(0.3 * x[1] + 0.2 * x[2]);
  });
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_laplacian_3d)->Arg(32)->Arg(48);

void BM_regularized_rhs_3d(benchmark::State& state) {
  auto data = bench_data(3, static_cast<int>(state.range(0)), 16.0, 4.0);
  const RenormalizedState s = make_initial_state(data);
  RhsOptions opts;
  opts.accuracy_order = 2;
  const WeightFunction w = WeightFunction::power_shifted(1);
  for (auto _ : state) benchmark::DoNotOptimize(regularized_rhs(s, w, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.psi0.size()));
}
BENCHMARK(BM_regularized_rhs_3d)->Arg(32)->Arg(48);

void BM_rk4_step_1d(benchmark::State& state) {
  auto data = bench_data(1, static_cast<int>(state.range(0)), 48.0, 8.0);
  const RenormalizedState s = make_initial_state(data);
  RhsOptions opts;
  const WeightFunction w = WeightFunction::power_shifted(1);
  const double dt = 0.4 * s.grid().spacing();
  for (auto _ : state) benchmark::DoNotOptimize(step_rk4(s, dt, w, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.psi0.size()));
}
BENCHMARK(BM_rk4_step_1d)->Arg(1024);

void BM_controlling_quantity(benchmark::State& state) {
  auto data = bench_data(1, 1024, 48.0, 8.0);
  const RenormalizedState s = make_initial_state(data);
  const WeightFunction w = WeightFunction::power_shifted(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(controlling_quantity(s, w, data->params.eps_ring, 5, 4));
}
BENCHMARK(BM_controlling_quantity);

void BM_shock_rhs(benchmark::State& state) {
  const CharacteristicState s =
      shock_initial_data(BumpProfile::polynomial, 0.02, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(shock_rhs(s, 0.025));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.samples()));
}
BENCHMARK(BM_shock_rhs)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
