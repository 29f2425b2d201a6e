#pragma once

#include "logkle/density.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace logkle {

struct McConfig
{
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
  int bins = 100;

  void validate() const;
};

/// Uniform deviate in (0, 1) built from the top 53 bits of one 64-bit draw.
double uniform_open01(std::mt19937_64& rng);

/// Draws P_N(t): P0 first, then xi_1..xi_N, one 64-bit word each.
double sample_pn(const Problem& problem, double t, std::mt19937_64& rng);

struct McReport
{
  int density_N = 0;
  int sampler_N = 0;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<std::uint64_t> counts;
  std::vector<double> expected; // bin probability from the density
  std::vector<double> z;
  double max_abs_z = 0.0;
  double l1 = 0.0;
  double mc_mean = 0.0;
  double mc_variance = 0.0;
  double mc_mean_se = 0.0;
  double mc_variance_se = 0.0;
  double density_mean = 0.0;
  double density_variance = 0.0;
  double mean_z = 0.0;
  double variance_z = 0.0;

  /// Human-readable summary; byte-identical for identical inputs.
  std::string to_text() const;
  /// bin,lower,upper,count,expected,z
  std::string to_csv() const;
};

/// Histograms 'samples' draws of P_N(t) on the flow image of [p01, p02] and
/// compares bin frequencies with the density. `sampler` overrides the
/// problem used for drawing (used to check the test has power).
McReport mc_density_check(const Problem& problem,
                          double t,
                          const McConfig& cfg,
                          std::optional<DensityPath> path = std::nullopt,
                          const Problem* sampler = nullptr);

} // namespace logkle
