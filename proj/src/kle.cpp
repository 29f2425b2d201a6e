#include "logkle/kle.hpp"
#include "logkle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace logkle {

namespace {

constexpr double pi = std::numbers::pi;

void require_index(int j, const char* who)
{
  if (j < 1)
    throw DomainError(std::string(who) + ": index must be >= 1, got " +
                      std::to_string(j));
}

double odd_residual(double w, double c, double a)
{
  return c - w * std::tan(w * a);
}

double even_residual(double w, double c, double a)
{
  return w + c * std::tan(w * a);
}

// Root of f on (lo, hi) where f(lo+) has sign `sign_lo` and f changes sign
// exactly once. Endpoints may be poles, so f is only evaluated inside.
template<class F>
double bracketed_root(F f, double lo, double hi, double sign_lo)
{
  constexpr int max_iter = 200;
  constexpr double width_tol = 1e-12;
  int it = 0;
  while (hi - lo > width_tol) {
    if (++it > max_iter)
      throw ConvergenceError("expcov_roots: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0.0) == (sign_lo > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double odd_root(int k, double c, double a)
{
  const double lo = (k - 1) * pi / a;
  const double hi = (2 * k - 1) * pi / (2 * a);
  auto f = [&](double w) { return odd_residual(w, c, a); };
  double w = bracketed_root(f, lo, hi, +1.0);
  // one Newton polish step: f'(w) = -tan(wa) - w a sec^2(wa)
  const double tn = std::tan(w * a);
  const double df = -tn - w * a * (1.0 + tn * tn);
  const double step = f(w) / df;
  if (std::isfinite(step) && w - step > lo && w - step < hi)
    w -= step;
  return w;
}

double even_root(int k, double c, double a)
{
  const double lo = (2 * k - 1) * pi / (2 * a);
  const double hi = k * pi / a;
  auto f = [&](double w) { return even_residual(w, c, a); };
  double w = bracketed_root(f, lo, hi, -1.0);
  const double tn = std::tan(w * a);
  const double df = 1.0 + c * a * (1.0 + tn * tn);
  const double step = f(w) / df;
  if (std::isfinite(step) && w - step > lo && w - step < hi)
    w -= step;
  return w;
}

// 1e-10, widened to the rounding floor of tan near its poles for high roots
double residual_tolerance(Parity parity, double w, double c, double a)
{
  const double tn = std::tan(w * a);
  const double sec2 = 1.0 + tn * tn;
  const double slope = parity == Parity::Even ? c * sec2 : w * sec2;
  return std::max(1e-10, 16.0 * std::numeric_limits<double>::epsilon() * w * a * slope);
}

void check_residual(Parity parity, double w, double c, double a)
{
  if (!(std::abs(expcov_residual(parity, w, c, a)) < residual_tolerance(parity, w, c, a))) {
    std::ostringstream os;
    os << "expcov_roots: residual tolerance not met at w=" << w
       << " (c=" << c << ", a=" << a << ")";
    throw ConvergenceError(os.str());
  }
}

void require_expcov_params(double c, double a)
{
  if (!(c > 0.0) || !(a > 0.0))
    throw DomainError("exponential covariance: c and a must be positive");
}

EigenPair expcov_pair_from_root(int j, Parity parity, double w, double c, double a)
{
  EigenPair e;
  e.index = j;
  e.frequency = w;
  e.value = 2.0 * c / (w * w + c * c);
  e.parity = parity;
  if (parity == Parity::Odd) {
    e.basis = Basis::Cosine;
    e.norm_const = std::sqrt(a + std::sin(2.0 * w * a) / (2.0 * w));
  } else {
    e.basis = Basis::Sine;
    e.norm_const = std::sqrt(a - std::sin(2.0 * w * a) / (2.0 * w));
  }
  return e;
}

} // namespace

void TimeDomain::require(double t) const
{
  if (!contains(t)) {
    std::ostringstream os;
    os << "time " << t << " outside [" << t0 << ", " << T << "]";
    throw DomainError(os.str());
  }
}

std::string to_string(ProcessKind kind)
{
  switch (kind) {
    case ProcessKind::Wiener:
      return "wiener";
    case ProcessKind::BrownianBridge:
      return "brownian_bridge";
    case ProcessKind::ExponentialCov:
      return "exponential";
  }
  return "?";
}

double EigenPair::phi(double t) const
{
  const double s = basis == Basis::Sine ? std::sin(frequency * t)
                                        : std::cos(frequency * t);
  return s / norm_const;
}

double EigenPair::integral(double from, double to) const
{
  const double w = frequency;
  if (basis == Basis::Sine)
    return (std::cos(w * from) - std::cos(w * to)) / (w * norm_const);
  return (std::sin(w * to) - std::sin(w * from)) / (w * norm_const);
}

EigenPair wiener_eigenpair(int j, double T)
{
  require_index(j, "wiener_eigenpair");
  if (!(T > 0.0))
    throw DomainError("wiener_eigenpair: T must be positive");
  const double m = 2.0 * j - 1.0;
  EigenPair e;
  e.index = j;
  e.value = 4.0 * T * T / (m * m * pi * pi);
  e.frequency = m * pi / (2.0 * T);
  e.norm_const = std::sqrt(T / 2.0);
  e.basis = Basis::Sine;
  return e;
}

EigenPair bridge_eigenpair(int j)
{
  require_index(j, "bridge_eigenpair");
  EigenPair e;
  e.index = j;
  e.value = 1.0 / (pi * pi * j * j);
  e.frequency = j * pi;
  e.norm_const = 1.0 / std::sqrt(2.0);
  e.basis = Basis::Sine;
  return e;
}

double expcov_residual(Parity parity, double w, double c, double a)
{
  return parity == Parity::Even ? even_residual(w, c, a)
                                : odd_residual(w, c, a);
}

std::vector<ExpCovRoot> expcov_roots(double c, double a, int count)
{
  require_expcov_params(c, a);
  if (count < 1)
    throw DomainError("expcov_roots: count must be >= 1");
  std::vector<ExpCovRoot> roots;
  roots.reserve(2 * static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double wo = odd_root(k, c, a);
    check_residual(Parity::Odd, wo, c, a);
    roots.push_back({ Parity::Odd, k, wo });
    const double we = even_root(k, c, a);
    check_residual(Parity::Even, we, c, a);
    roots.push_back({ Parity::Even, k, we });
  }
  return roots;
}

EigenPair expcov_eigenpair(int j, double c, double a)
{
  require_index(j, "expcov_eigenpair");
  require_expcov_params(c, a);
  if (j % 2 == 1) {
    const int k = (j + 1) / 2;
    const double w = odd_root(k, c, a);
    check_residual(Parity::Odd, w, c, a);
    return expcov_pair_from_root(j, Parity::Odd, w, c, a);
  }
  const int k = j / 2;
  const double w = even_root(k, c, a);
  check_residual(Parity::Even, w, c, a);
  return expcov_pair_from_root(j, Parity::Even, w, c, a);
}

bool expcov_interleaving_descending(double c, double a, int count)
{
  double prev = INFINITY;
  for (int j = 1; j <= count; ++j) {
    const double v = expcov_eigenpair(j, c, a).value;
    if (!(v < prev))
      return false;
    prev = v;
  }
  return true;
}

KleProcess KleProcess::wiener(double T, XiLaw xi)
{
  if (!(T > 0.0))
    throw DomainError("wiener process: T must be positive");
  KleProcess p;
  p.kind_ = ProcessKind::Wiener;
  p.domain_ = { 0.0, T };
  p.xi_ = xi;
  return p;
}

KleProcess KleProcess::brownian_bridge(XiLaw xi)
{
  KleProcess p;
  p.kind_ = ProcessKind::BrownianBridge;
  p.domain_ = { 0.0, 1.0 };
  p.xi_ = xi;
  return p;
}

KleProcess KleProcess::exponential(double c, double a, XiLaw xi, int cached_modes)
{
  require_expcov_params(c, a);
  KleProcess p;
  p.kind_ = ProcessKind::ExponentialCov;
  p.domain_ = { -a, a };
  p.xi_ = xi;
  p.c_ = c;
  p.a_ = a;
  const auto roots = expcov_roots(c, a, (cached_modes + 1) / 2);
  for (int j = 1; j <= cached_modes; ++j) {
    const auto& r = roots[static_cast<std::size_t>(j - 1)];
    p.cache_.push_back(expcov_pair_from_root(j, r.parity, r.root, c, a));
  }
  return p;
}

std::string KleProcess::name() const
{
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == ProcessKind::Wiener)
    os << "(T=" << domain_.T << ")";
  else if (kind_ == ProcessKind::ExponentialCov)
    os << "(c=" << c_ << ",a=" << a_ << ")";
  os << "/xi=" << to_string(xi_);
  return os.str();
}

EigenPair KleProcess::eigenpair(int j) const
{
  switch (kind_) {
    case ProcessKind::Wiener:
      return wiener_eigenpair(j, domain_.T);
    case ProcessKind::BrownianBridge:
      return bridge_eigenpair(j);
    case ProcessKind::ExponentialCov:
      require_index(j, "eigenpair");
      if (static_cast<std::size_t>(j) <= cache_.size())
        return cache_[static_cast<std::size_t>(j - 1)];
      return expcov_eigenpair(j, c_, a_);
  }
  throw DomainError("unknown process kind");
}

double KleProcess::primitive_h(int j, double t) const
{
  domain_.require(t);
  const EigenPair e = eigenpair(j);
  return std::sqrt(e.value) * e.integral(domain_.t0, t);
}

std::vector<double> KleProcess::primitives(double t, int N) const
{
  domain_.require(t);
  std::vector<double> h(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) {
    const EigenPair e = eigenpair(j);
    h[static_cast<std::size_t>(j - 1)] = std::sqrt(e.value) * e.integral(domain_.t0, t);
  }
  return h;
}

double KleProcess::mean_primitive(double t) const
{
  domain_.require(t);
  return 0.0;
}

KnMoments KleProcess::kn_sigma(double t, int N) const
{
  if (N < 1)
    throw DomainError("kn_sigma: N must be >= 1");
  double s2 = 0.0;
  for (double h : primitives(t, N))
    s2 += h * h;
  return { mean_primitive(t), std::sqrt(s2) };
}

} // namespace logkle
