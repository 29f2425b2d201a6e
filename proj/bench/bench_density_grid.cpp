#include "logkle/density.hpp"
#include "logkle/quadrature.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace logkle;

namespace {

Problem problem(int which, int N)
{
  if (which == 1)
    return { KleProcess::wiener(1.5), InitialLaw::truncated_beta(7, 10, 0.1, 0.9), N, {}, 10 };
  return { KleProcess::exponential(1.0, 0.5, XiLaw::UniformSym), InitialLaw::truncated_beta(7, 10, 0.1, 0.9), N, {},
           10 };
}

const std::vector<double>& p_grid()
{
  static const auto p = linspace(0.005, 0.995, 201);
  return p;
}

void BM_Serial(benchmark::State& state)
{
  const Problem pr = problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto& d = pr.process.domain();
  const auto t = linspace(d.t0, d.T, 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(density_grid_serial(pr, p_grid(), t, DensityPath::Tensor));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p_grid().size() * t.size()));
}

void BM_OpenMP(benchmark::State& state)
{
  const Problem pr = problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto& d = pr.process.domain();
  const auto t = linspace(d.t0, d.T, 5);
  omp_set_num_threads(static_cast<int>(state.range(2)));
  for (auto _ : state)
    benchmark::DoNotOptimize(density_grid(pr, p_grid(), t, DensityPath::Tensor));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p_grid().size() * t.size()));
}

} // namespace

// args: example, N, threads
BENCHMARK(BM_Serial)->Args({ 1, 2 })->Args({ 1, 3 })->Args({ 3, 2 })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)
  ->Args({ 1, 2, 1 })
  ->Args({ 1, 2, 4 })
  ->Args({ 1, 3, 1 })
  ->Args({ 1, 3, 4 })
  ->Args({ 3, 2, 1 })
  ->Args({ 3, 2, 4 })
  ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
