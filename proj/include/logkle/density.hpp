#pragma once

#include "logkle/distributions.hpp"
#include "logkle/kle.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace logkle {

/// Per-dimension Gauss order used by the tensor path when none is given:
/// N<=2 -> 40, N=3 -> 25, N=4 -> 15, N>=5 -> 10.
int default_quad_order(int N);

/// Random logistic IVP truncated at N KLE terms.
struct Problem
{
  KleProcess process;
  InitialLaw initial;
  int N = 1;
  /// Tensor-path orders: empty -> default_quad_order(N), one value ->
  /// broadcast, otherwise one per dimension.
  std::vector<int> quad_orders;
  /// Gauss-Legendre nodes per panel on support-restricted 1-D segments.
  int panel_order = 10;

  std::vector<int> resolved_orders() const;
  void validate() const;
  Problem with_N(int n) const;
};

/// Inverse flow map p -> p0 at integrated coefficient K, and its Jacobian.
struct RvtValue
{
  double arg = 0.0;
  double jac = 0.0;
};

/// arg = p e^{-K} / (1 + p(e^{-K} - 1)), jac = e^{-K} / (1 + p(e^{-K} - 1))^2,
/// evaluated on the branch that never exponentiates a positive number.
RvtValue rvt_kernel(double p, double K);

/// K_N(t, xi) = m(t) + sum_j H_j(t) xi_j with N = xi.size().
double k_n(const KleProcess& process, double t, std::span<const double> xi);

enum class DensityPath
{
  Tensor,    // N-dimensional integral over the xi coordinates
  Collapsed, // 1-D integral over the Gaussian law of K_N
  Exact      // Wiener-driven reference density
};

std::string to_string(DensityPath path);
/// Collapsed for Gaussian xi, tensor otherwise.
DensityPath default_path(const Problem& problem);

/// f_1^N(p, t) by tensor quadrature over xi.
double f1n_eval(const Problem& problem, double p, double t);
/// f_1^N(p, t) through the Gaussian law of K_N. Requires Gaussian xi.
double f1n_collapsed(const Problem& problem, double p, double t);
/// Exact 1-PDF when the coefficient is the standard Wiener process on [0, T].
double f1_exact_wiener(const InitialLaw& initial,
                       double p,
                       double t,
                       double T,
                       int panel_order = 10);

double evaluate_density(const Problem& problem,
                        double p,
                        double t,
                        DensityPath path);

/// All time-dependent state needed to evaluate a density at fixed t, built
/// once and then queried for many p. Queries are const and thread-safe.
class TimeSlice
{
public:
  TimeSlice(const Problem& problem, double t, DensityPath path);

  double operator()(double p) const;
  double t() const { return t_; }
  /// Closed interval outside of which the density is exactly zero.
  std::pair<double, double> support() const { return support_; }

private:
  const Problem* problem_;
  double t_;
  DensityPath path_;
  bool identity_ = false; // K is deterministic (t = t0 or all H_j = 0)
  double shift_ = 0.0;    // K when identity_
  // outer tensor nodes: residual K' and weight; slope of the pivot coordinate
  std::vector<double> base_;
  std::vector<double> weight_;
  double slope_ = 0.0;
  XiLaw pivot_law_ = XiLaw::StandardGaussian;
  std::pair<double, double> support_{ 0.0, 1.0 };
};

/// f_1^N values on a rectangular grid, stored row-major by time.
struct DensityGrid
{
  std::vector<double> p;
  std::vector<double> t;
  std::vector<double> values; // values[it * p.size() + ip]
  int N = 0;
  std::vector<int> quad_orders;
  std::string process;
  std::string initial;
  DensityPath path = DensityPath::Collapsed;

  double at(std::size_t it, std::size_t ip) const
  {
    return values[it * p.size() + ip];
  }
};

/// OpenMP fill: one TimeSlice per t, points distributed across threads.
DensityGrid density_grid(const Problem& problem,
                         std::span<const double> p_grid,
                         std::span<const double> t_grid,
                         DensityPath path);

/// Reference fill: plain nested loop over the point operations.
DensityGrid density_grid_serial(const Problem& problem,
                                std::span<const double> p_grid,
                                std::span<const double> t_grid,
                                DensityPath path);

namespace detail {

/// Integral over x of f_P0(arg(p, base + slope x)) jac(p, base + slope x)
/// f_xi(x), restricted to the x-interval where arg lies in the support of
/// P0. Gaussian law: composite Gauss-Legendre panels. Uniform law: exact, as
/// a difference of the P0 CDF (composite panels when the K-width is below
/// 1e-3). slope must be nonzero.
double restricted_line_integral(const InitialLaw& initial,
                                XiLaw law,
                                double p,
                                double base,
                                double slope,
                                int panel_order);

/// Range of K for which arg(p, K) lies in the support of P0.
struct Window
{
  double k_lo = 0.0;
  double k_hi = 0.0;
};

Window window(const InitialLaw& initial, double p);

/// Same, with the window of p precomputed.
double restricted_line_integral(const InitialLaw& initial,
                                XiLaw law,
                                double p,
                                const Window& win,
                                double base,
                                double slope,
                                int panel_order);

inline double logit(double x)
{
  return std::log(x) - std::log1p(-x);
}

} // namespace detail

} // namespace logkle
