#pragma once

#include "logkle/distributions.hpp"

#include <string>
#include <vector>

namespace logkle {

/// Closed time interval [t0, T] on which the coefficient process lives.
struct TimeDomain
{
  double t0 = 0.0;
  double T = 1.0;

  bool contains(double t) const { return t >= t0 && t <= T; }
  void require(double t) const;
};

enum class ProcessKind
{
  Wiener,
  BrownianBridge,
  ExponentialCov
};

std::string to_string(ProcessKind kind);

/// Which transcendental branch an exponential-covariance mode came from.
/// Closed-form models have no parity.
enum class Parity
{
  None,
  Odd,  // c - w tan(w a) = 0, cosine eigenfunction
  Even  // w + c tan(w a) = 0, sine eigenfunction
};

enum class Basis
{
  Sine,
  Cosine
};

/// One KLE mode: eigenvalue plus enough data to evaluate the eigenfunction
///   phi(t) = sin(frequency * t) / norm_const     (Basis::Sine)
///   phi(t) = cos(frequency * t) / norm_const     (Basis::Cosine)
/// and its antiderivative in closed form.
struct EigenPair
{
  int index = 0;
  double value = 0.0;
  double frequency = 0.0;
  double norm_const = 1.0;
  Basis basis = Basis::Sine;
  Parity parity = Parity::None;

  double phi(double t) const;
  /// Integral of phi over [from, to].
  double integral(double from, double to) const;
};

EigenPair wiener_eigenpair(int j, double T);
EigenPair bridge_eigenpair(int j);

struct ExpCovRoot
{
  Parity parity = Parity::Odd;
  int k = 0; // 1-based index within its parity branch
  double root = 0.0;
};

/// First `count` roots of each parity, returned as odd_1, even_1, odd_2, ...
/// Each root is bracketed between consecutive poles of tan(w a), bisected to
/// 1e-12 width and polished with one Newton step.
std::vector<ExpCovRoot> expcov_roots(double c, double a, int count);

/// Residual of the transcendental equation a root is supposed to satisfy.
double expcov_residual(Parity parity, double w, double c, double a);

/// Eigenpair j of exp(-c|s-t|) on [-a, a], using the interleaved index
/// convention: odd j -> odd branch root (j+1)/2, even j -> even branch root j/2.
EigenPair expcov_eigenpair(int j, double c, double a);

/// True if the interleaved eigenvalue sequence nu_1, nu_2, ..., nu_count is
/// strictly decreasing. Used as a diagnostic only.
bool expcov_interleaving_descending(double c, double a, int count);

/// Mean and standard deviation of K_N(t) = m(t) + sum_j H_j(t) xi_j.
struct KnMoments
{
  double mean = 0.0;
  double std = 0.0;
};

/// A zero-mean second-order process described by its KLE ingredients.
/// Immutable after construction and safe to share across threads.
class KleProcess
{
public:
  static KleProcess wiener(double T, XiLaw xi = XiLaw::StandardGaussian);
  static KleProcess brownian_bridge(XiLaw xi = XiLaw::StandardGaussian);
  static KleProcess exponential(double c,
                                double a,
                                XiLaw xi = XiLaw::UniformSym,
                                int cached_modes = 20);

  ProcessKind kind() const { return kind_; }
  const TimeDomain& domain() const { return domain_; }
  XiLaw xi_law() const { return xi_; }
  double c() const { return c_; }
  double a() const { return a_; }
  std::string name() const;

  EigenPair eigenpair(int j) const;

  /// H_j(t) = sqrt(nu_j) * integral_{t0}^{t} phi_j(s) ds.
  double primitive_h(int j, double t) const;
  /// (H_1(t), ..., H_N(t)).
  std::vector<double> primitives(double t, int N) const;
  /// m(t) = integral_{t0}^{t} mu_A(s) ds; identically zero for the
  /// supported models.
  double mean_primitive(double t) const;

  KnMoments kn_sigma(double t, int N) const;

private:
  KleProcess() = default;

  ProcessKind kind_ = ProcessKind::Wiener;
  TimeDomain domain_;
  XiLaw xi_ = XiLaw::StandardGaussian;
  double c_ = 0.0;
  double a_ = 0.0;
  std::vector<EigenPair> cache_;
};

} // namespace logkle
