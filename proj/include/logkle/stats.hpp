#pragma once

#include "logkle/density.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace logkle {

/// Equally spaced integration grid. `zero_ends` forces the integrand to 0 at
/// both endpoints (used for the [0, 1] error grids, where the density
/// formula is undefined at p = 0 and p = 1).
struct UniformGrid
{
  double lower = 0.0;
  double upper = 1.0;
  std::size_t points = 2001;
  bool zero_ends = false;

  std::vector<double> nodes() const;
  double step() const;
};

/// p-grid for moments: 2001 points on [0.001, 0.999].
UniformGrid default_moment_grid();
/// p-grid for L1 density errors: 2001 points on [0, 1], endpoint values 0.
UniformGrid default_error_grid();
inline constexpr std::size_t kDefaultTimePoints = 151;

struct Moments
{
  double mean = 0.0;
  double variance = 0.0;
};

/// Raw moment k of a density sampled on `grid`, by composite Simpson.
double density_moment(const TimeSlice& slice, const UniformGrid& grid, int k);

/// E[P_N(t)] and V[P_N(t)] from the density.
Moments moments_n(const Problem& problem,
                  double t,
                  std::optional<DensityPath> path = std::nullopt,
                  const UniformGrid& grid = default_moment_grid());

/// Same, for the exact Wiener-driven density.
Moments moments_exact_wiener(const Problem& problem,
                             double t,
                             const UniformGrid& grid = default_moment_grid());

/// Moments on a whole time grid (one entry per t), parallel over t.
std::vector<Moments> moment_curve(const Problem& problem,
                                  std::span<const double> times,
                                  DensityPath path,
                                  const UniformGrid& grid = default_moment_grid());

enum class ErrorKind
{
  PdfVsExact,
  PdfConsecutive,
  MeanVsExact,
  VarianceVsExact,
  MeanConsecutive,
  VarianceConsecutive
};

std::string to_string(ErrorKind kind);

enum class MomentKind
{
  Mean,
  Variance
};

struct ErrorReport
{
  ErrorKind kind = ErrorKind::PdfVsExact;
  std::optional<double> t;
  int N = 0;
  double value = 0.0;
};

/// L1 distance between two time slices over `grid`.
double l1_distance(const TimeSlice& a, const TimeSlice& b, const UniformGrid& grid);

/// e_N^PDF(t) = int_0^1 |f_1 - f_1^N| dp. Wiener processes only.
ErrorReport e_pdf_exact(const Problem& problem,
                        double t,
                        std::optional<DensityPath> path = std::nullopt,
                        const UniformGrid& grid = default_error_grid());

/// e^PDF_N(t) = int_0^1 |f_1^N - f_1^{N-1}| dp, problem.N >= 2.
ErrorReport e_pdf_consecutive(const Problem& problem,
                              double t,
                              std::optional<DensityPath> path = std::nullopt,
                              const UniformGrid& grid = default_error_grid());

/// int_{t0}^{T} |moment(exact) - moment(N)| dt by Simpson over `time_points`.
ErrorReport e_moment_exact(const Problem& problem,
                           MomentKind kind,
                           std::size_t time_points = kDefaultTimePoints,
                           std::optional<DensityPath> path = std::nullopt,
                           const UniformGrid& grid = default_moment_grid());

/// int_{t0}^{T} |moment(N) - moment(N-1)| dt, problem.N >= 2.
ErrorReport e_moment_consecutive(const Problem& problem,
                                 MomentKind kind,
                                 std::size_t time_points = kDefaultTimePoints,
                                 std::optional<DensityPath> path = std::nullopt,
                                 const UniformGrid& grid = default_moment_grid());

/// Integral over the time domain of |a - b| for two moment curves sampled on
/// the same uniform time grid.
double moment_curve_distance(const std::vector<Moments>& a,
                             const std::vector<Moments>& b,
                             MomentKind kind,
                             double dt);

} // namespace logkle
