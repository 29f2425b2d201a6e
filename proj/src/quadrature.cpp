#include "logkle/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace logkle {

namespace {

constexpr int kMaxNewton = 100;

void normalize(std::vector<double>& w)
{
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w)
    v /= s;
}

// Orthonormal probabilists' Hermite polynomials w.r.t. N(0,1):
//   psi_0 = 1, psi_j = (x psi_{j-1} - sqrt(j-1) psi_{j-2}) / sqrt(j),
//   psi_n' = sqrt(n) psi_{n-1}, weight_i = 1 / (n psi_{n-1}(x_i)^2).
QuadratureRule hermite_prob(int n)
{
  QuadratureRule r;
  r.kind = RuleKind::GaussHermiteProb;
  r.order = n;
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  const double nn = static_cast<double>(n);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // asymptotic guesses for the physicists' roots, largest first, scaled
    // by sqrt(2) to the probabilists' convention
    if (i == 0)
      z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(nn, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0] / std::numbers::sqrt2;
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1] / std::numbers::sqrt2;
    else
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)] / std::numbers::sqrt2;

    double xp = z * std::numbers::sqrt2;
    double psi_prev = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = (xp * p1 - std::sqrt(j - 1.0) * p2) / std::sqrt(static_cast<double>(j));
      }
      psi_prev = p1;
      const double dp = std::sqrt(nn) * p1;
      const double step = p0 / dp;
      xp -= step;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(xp))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("make_rule: Hermite Newton iteration did not converge");
    // refresh psi_{n-1} at the converged node
    {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = (xp * p1 - std::sqrt(j - 1.0) * p2) / std::sqrt(static_cast<double>(j));
      }
      psi_prev = p1;
    }
    z = xp / std::numbers::sqrt2;
    const auto hi = static_cast<std::size_t>(i);
    const auto lo = static_cast<std::size_t>(n - 1 - i);
    x[hi] = xp;
    x[lo] = -xp;
    w[hi] = w[lo] = 1.0 / (nn * psi_prev * psi_prev);
  }
  if (n % 2 == 1)
    x[static_cast<std::size_t>(m - 1)] = 0.0;
  // ascending order
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  normalize(w);
  r.nodes = std::move(x);
  r.weights = std::move(w);
  return r;
}

} // namespace

LegendreRule gauss_legendre_unit(int n)
{
  if (n < 1 || n > 1024)
    throw DomainError("gauss_legendre_unit: order out of range");
  LegendreRule r;
  r.nodes.assign(static_cast<std::size_t>(n), 0.0);
  r.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("make_rule: Legendre Newton iteration did not converge");
    // derivative at the converged node
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -z;
    r.nodes[hi] = z;
    r.weights[lo] = r.weights[hi] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  if (n % 2 == 1)
    r.nodes[static_cast<std::size_t>(m - 1)] = 0.0;
  return r;
}

QuadratureRule make_rule(RuleKind kind, int order)
{
  if (order < 1 || order > kMaxRuleOrder) {
    std::ostringstream os;
    os << "make_rule: order must be in [1, " << kMaxRuleOrder << "], got " << order;
    throw DomainError(os.str());
  }
  if (kind == RuleKind::GaussHermiteProb) {
    if (order == 1)
      return { kind, 1, { 0.0 }, { 1.0 } };
    return hermite_prob(order);
  }
  const LegendreRule unit = gauss_legendre_unit(order);
  QuadratureRule r;
  r.kind = kind;
  r.order = order;
  r.nodes.resize(unit.nodes.size());
  r.weights = unit.weights;
  for (std::size_t i = 0; i < unit.nodes.size(); ++i)
    r.nodes[i] = std::numbers::sqrt3 * unit.nodes[i];
  normalize(r.weights);
  return r;
}

RuleKind rule_kind_for(XiLaw law)
{
  return law == XiLaw::StandardGaussian ? RuleKind::GaussHermiteProb
                                        : RuleKind::GaussLegendreSym;
}

std::size_t tensor_size(std::span<const QuadratureRule> rules)
{
  std::size_t total = 1;
  for (const auto& r : rules) {
    const std::size_t n = r.nodes.size();
    if (n == 0 || total > kMaxTensorNodes / n) {
      std::ostringstream os;
      os << "tensor grid too large: " << rules.size() << " dimensions with orders";
      for (const auto& q : rules)
        os << ' ' << q.order;
      os << " exceed " << kMaxTensorNodes << " nodes";
      throw TensorSizeError(os.str());
    }
    total *= n;
  }
  return total;
}

std::vector<double> simpson_weights(std::size_t n, double h)
{
  if (n < 3 || n % 2 == 0)
    throw DomainError("simpson: need an odd number of points >= 3");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  for (double& v : w)
    v *= h / 3.0;
  return w;
}

double simpson(std::span<const double> y, double h)
{
  const auto w = simpson_weights(y.size(), h);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    acc += w[i] * y[i];
  return acc;
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + h * static_cast<double>(i);
  v[n - 1] = hi;
  return v;
}

} // namespace logkle
