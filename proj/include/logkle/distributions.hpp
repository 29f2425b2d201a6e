#pragma once

#include <string>
#include <utility>
#include <vector>

namespace logkle {

/// Law of the KLE coordinates xi_j. Both have mean 0 and variance 1.
enum class XiLaw
{
  StandardGaussian,
  UniformSym // uniform on (-sqrt(3), sqrt(3))
};

std::string to_string(XiLaw law);

double xi_pdf(XiLaw law, double x);
/// Inverse CDF, u in (0, 1).
double xi_quantile(XiLaw law, double u);
/// Interval carrying all (Gaussian: all but ~1e-32) of the mass.
std::pair<double, double> xi_support(XiLaw law);

enum class InitialKind
{
  TruncatedBeta,
  TruncatedExponential
};

/// Law of the initial condition P0: a density restricted to
/// [lower, upper] ⊂ (0, 1) and renormalized.
class InitialLaw
{
public:
  static InitialLaw truncated_beta(double alpha,
                                   double beta,
                                   double lower,
                                   double upper);
  /// Rate parameterization: kernel rate * exp(-rate * p).
  static InitialLaw truncated_exponential(double rate,
                                          double lower,
                                          double upper);

  InitialKind kind() const { return kind_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double norm_const() const { return norm_; }
  /// (alpha, beta) or (rate, 0).
  std::pair<double, double> params() const { return { p1_, p2_ }; }
  std::string name() const;

  /// Density; exactly 0 outside [lower, upper].
  double pdf(double p) const;
  double cdf(double p) const;
  /// Inverse-CDF sample for a uniform deviate u in (0, 1).
  double sample(double u) const;

private:
  InitialLaw() = default;

  double kernel(double p) const;
  void build_cdf_table();
  double cell_integral(double from, double to) const;

  InitialKind kind_ = InitialKind::TruncatedBeta;
  double p1_ = 1.0;
  double p2_ = 1.0;
  double lower_ = 0.0;
  double upper_ = 1.0;
  double norm_ = 1.0;
  // integer exponents for the Beta kernel, -1 when not integral
  int int_a_ = -1;
  int int_b_ = -1;
  std::vector<double> cum_; // normalized CDF at the cell edges
  double table_total_ = 1.0;
};

} // namespace logkle
