#include "logkle/density.hpp"
#include "logkle/errors.hpp"

#include <algorithm>
#include <cstdint>

namespace logkle {

namespace {

void require_sorted(std::span<const double> v, const char* what)
{
  if (v.empty())
    throw DomainError(std::string("density_grid: empty ") + what);
  if (!std::is_sorted(v.begin(), v.end()))
    throw DomainError(std::string("density_grid: ") + what + " must be sorted");
}

DensityGrid make_grid(const Problem& problem,
                      std::span<const double> p_grid,
                      std::span<const double> t_grid,
                      DensityPath path)
{
  problem.validate();
  require_sorted(p_grid, "p grid");
  require_sorted(t_grid, "t grid");
  DensityGrid g;
  g.p.assign(p_grid.begin(), p_grid.end());
  g.t.assign(t_grid.begin(), t_grid.end());
  g.values.assign(g.p.size() * g.t.size(), 0.0);
  g.N = problem.N;
  g.quad_orders = problem.resolved_orders();
  g.process = problem.process.name();
  g.initial = problem.initial.name();
  g.path = path;
  return g;
}

} // namespace

DensityGrid density_grid(const Problem& problem,
                         std::span<const double> p_grid,
                         std::span<const double> t_grid,
                         DensityPath path)
{
  DensityGrid g = make_grid(problem, p_grid, t_grid, path);
  std::vector<TimeSlice> slices;
  slices.reserve(g.t.size());
  for (double t : g.t)
    slices.emplace_back(problem, t, path);

  const std::size_t np = g.p.size();
  const auto total = static_cast<std::int64_t>(g.values.size());
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      g.values[idx] = slices[idx / np](g.p[idx % np]);
    } catch (const std::exception& e) {
#pragma omp critical(logkle_grid_error)
      {
        if (!failed)
          message = e.what();
        failed = true;
      }
    }
  }
  if (failed)
    throw DomainError(message);
  return g;
}

DensityGrid density_grid_serial(const Problem& problem,
                                std::span<const double> p_grid,
                                std::span<const double> t_grid,
                                DensityPath path)
{
  DensityGrid g = make_grid(problem, p_grid, t_grid, path);
  const std::size_t np = g.p.size();
  for (std::size_t it = 0; it < g.t.size(); ++it)
    for (std::size_t ip = 0; ip < np; ++ip)
      g.values[it * np + ip] = evaluate_density(problem, g.p[ip], g.t[it], path);
  return g;
}

} // namespace logkle
