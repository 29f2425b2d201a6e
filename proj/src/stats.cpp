#include "logkle/stats.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace logkle {

namespace {

void require_grid(const UniformGrid& g)
{
  if (g.points < 3 || g.points % 2 == 0)
    throw DomainError("grid: Simpson needs an odd number of points >= 3");
  if (!(g.lower >= 0.0 && g.lower < g.upper && g.upper <= 1.0))
    throw DomainError("grid: need 0 <= lower < upper <= 1");
  if (!g.zero_ends && (g.lower == 0.0 || g.upper == 1.0))
    throw DomainError("grid: endpoints 0 and 1 require zero_ends");
}

// density sampled on the grid, endpoint values forced to 0 when requested
std::vector<double> sample(const TimeSlice& slice, const UniformGrid& grid)
{
  const auto p = grid.nodes();
  std::vector<double> f(p.size(), 0.0);
  const std::size_t first = grid.zero_ends ? 1 : 0;
  const std::size_t last = grid.zero_ends ? p.size() - 1 : p.size();
  for (std::size_t i = first; i < last; ++i)
    f[i] = slice(p[i]);
  return f;
}

Moments slice_moments(const TimeSlice& slice, const UniformGrid& grid)
{
  require_grid(grid);
  const auto p = grid.nodes();
  const auto f = sample(slice, grid);
  const auto w = simpson_weights(p.size(), grid.step());
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    m1 += w[i] * p[i] * f[i];
    m2 += w[i] * p[i] * p[i] * f[i];
  }
  return { m1, std::max(m2 - m1 * m1, 0.0) };
}

DensityPath resolve(const Problem& problem, std::optional<DensityPath> path)
{
  return path.value_or(default_path(problem));
}

void require_wiener(const Problem& problem)
{
  if (problem.process.kind() != ProcessKind::Wiener)
    throw DomainError("no exact reference density for process " + problem.process.name());
}

void require_consecutive(const Problem& problem)
{
  if (problem.N < 2)
    throw DomainError("consecutive error needs N >= 2");
}

std::vector<double> time_grid(const Problem& problem, std::size_t points)
{
  if (points < 3 || points % 2 == 0)
    throw DomainError("time grid: Simpson needs an odd number of points >= 3");
  const auto& d = problem.process.domain();
  return linspace(d.t0, d.T, points);
}

double pick(const Moments& m, MomentKind kind)
{
  return kind == MomentKind::Mean ? m.mean : m.variance;
}

ErrorKind moment_error_kind(MomentKind kind, bool exact)
{
  if (exact)
    return kind == MomentKind::Mean ? ErrorKind::MeanVsExact : ErrorKind::VarianceVsExact;
  return kind == MomentKind::Mean ? ErrorKind::MeanConsecutive : ErrorKind::VarianceConsecutive;
}

} // namespace

std::vector<double> UniformGrid::nodes() const
{
  return linspace(lower, upper, points);
}

double UniformGrid::step() const
{
  return (upper - lower) / static_cast<double>(points - 1);
}

UniformGrid default_moment_grid()
{
  return { 0.001, 0.999, 2001, false };
}

UniformGrid default_error_grid()
{
  return { 0.0, 1.0, 2001, true };
}

double density_moment(const TimeSlice& slice, const UniformGrid& grid, int k)
{
  require_grid(grid);
  if (k < 0)
    throw DomainError("density_moment: k must be >= 0");
  const auto p = grid.nodes();
  auto f = sample(slice, grid);
  for (std::size_t i = 0; i < p.size(); ++i)
    f[i] *= std::pow(p[i], k);
  return simpson(f, grid.step());
}

Moments moments_n(const Problem& problem,
                  double t,
                  std::optional<DensityPath> path,
                  const UniformGrid& grid)
{
  const TimeSlice slice(problem, t, resolve(problem, path));
  return slice_moments(slice, grid);
}

Moments moments_exact_wiener(const Problem& problem, double t, const UniformGrid& grid)
{
  require_wiener(problem);
  const TimeSlice slice(problem, t, DensityPath::Exact);
  return slice_moments(slice, grid);
}

std::vector<Moments> moment_curve(const Problem& problem,
                                  std::span<const double> times,
                                  DensityPath path,
                                  const UniformGrid& grid)
{
  require_grid(grid);
  problem.validate();
  std::vector<Moments> out(times.size());
  const auto n = static_cast<std::int64_t>(times.size());
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const TimeSlice slice(problem, times[i], path);
      out[i] = slice_moments(slice, grid);
    } catch (const std::exception& e) {
#pragma omp critical(logkle_curve_error)
      {
        if (!failed)
          message = e.what();
        failed = true;
      }
    }
  }
  if (failed)
    throw DomainError(message);
  return out;
}

std::string to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::PdfVsExact:
      return "pdf_vs_exact";
    case ErrorKind::PdfConsecutive:
      return "pdf_consecutive";
    case ErrorKind::MeanVsExact:
      return "mean_vs_exact";
    case ErrorKind::VarianceVsExact:
      return "variance_vs_exact";
    case ErrorKind::MeanConsecutive:
      return "mean_consecutive";
    case ErrorKind::VarianceConsecutive:
      return "variance_consecutive";
  }
  return "?";
}

double l1_distance(const TimeSlice& a, const TimeSlice& b, const UniformGrid& grid)
{
  require_grid(grid);
  const auto fa = sample(a, grid);
  const auto fb = sample(b, grid);
  std::vector<double> d(fa.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::abs(fa[i] - fb[i]);
  return simpson(d, grid.step());
}

ErrorReport e_pdf_exact(const Problem& problem,
                        double t,
                        std::optional<DensityPath> path,
                        const UniformGrid& grid)
{
  require_wiener(problem);
  const TimeSlice approx(problem, t, resolve(problem, path));
  const TimeSlice exact(problem, t, DensityPath::Exact);
  return { ErrorKind::PdfVsExact, t, problem.N, l1_distance(exact, approx, grid) };
}

ErrorReport e_pdf_consecutive(const Problem& problem,
                              double t,
                              std::optional<DensityPath> path,
                              const UniformGrid& grid)
{
  require_consecutive(problem);
  const Problem previous = problem.with_N(problem.N - 1);
  const DensityPath route = resolve(problem, path);
  const TimeSlice a(problem, t, route);
  const TimeSlice b(previous, t, route);
  return { ErrorKind::PdfConsecutive, t, problem.N, l1_distance(a, b, grid) };
}

ErrorReport e_moment_exact(const Problem& problem,
                           MomentKind kind,
                           std::size_t time_points,
                           std::optional<DensityPath> path,
                           const UniformGrid& grid)
{
  require_wiener(problem);
  const auto times = time_grid(problem, time_points);
  const auto approx = moment_curve(problem, times, resolve(problem, path), grid);
  const auto exact = moment_curve(problem, times, DensityPath::Exact, grid);
  const double dt = times[1] - times[0];
  return { moment_error_kind(kind, true), std::nullopt, problem.N,
           moment_curve_distance(exact, approx, kind, dt) };
}

ErrorReport e_moment_consecutive(const Problem& problem,
                                 MomentKind kind,
                                 std::size_t time_points,
                                 std::optional<DensityPath> path,
                                 const UniformGrid& grid)
{
  require_consecutive(problem);
  const Problem previous = problem.with_N(problem.N - 1);
  const DensityPath route = resolve(problem, path);
  const auto times = time_grid(problem, time_points);
  const auto a = moment_curve(problem, times, route, grid);
  const auto b = moment_curve(previous, times, route, grid);
  const double dt = times[1] - times[0];
  return { moment_error_kind(kind, false), std::nullopt, problem.N,
           moment_curve_distance(a, b, kind, dt) };
}

double moment_curve_distance(const std::vector<Moments>& a,
                             const std::vector<Moments>& b,
                             MomentKind kind,
                             double dt)
{
  if (a.size() != b.size())
    throw DomainError("moment_curve_distance: curves differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = std::abs(pick(a[i], kind) - pick(b[i], kind));
  return simpson(d, dt);
}

} // namespace logkle
