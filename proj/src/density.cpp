#include "logkle/density.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace logkle {

namespace {

constexpr int kMaxPanelOrder = 64;
// panel widths for the support-restricted segments
constexpr double kPanelWidthK = 0.5;
constexpr double kPanelWidthGaussian = 1.0;
constexpr int kMaxPanels = 512;
constexpr double kClosedFormMinWidthK = 1e-3;

const LegendreRule& panel_rule(int order)
{
  static const std::array<LegendreRule, kMaxPanelOrder + 1> rules = [] {
    std::array<LegendreRule, kMaxPanelOrder + 1> r;
    for (int n = 1; n <= kMaxPanelOrder; ++n)
      r[static_cast<std::size_t>(n)] = gauss_legendre_unit(n);
    return r;
  }();
  return rules[static_cast<std::size_t>(order)];
}

void require_open_unit(double p)
{
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "p must lie in (0, 1), got " << p;
    throw DomainError(os.str());
  }
}

double logistic(double y)
{
  if (y >= 0.0)
    return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

} // namespace

int default_quad_order(int N)
{
  if (N <= 2)
    return 40;
  if (N == 3)
    return 25;
  if (N == 4)
    return 15;
  return 10;
}

std::vector<int> Problem::resolved_orders() const
{
  if (quad_orders.empty())
    return std::vector<int>(static_cast<std::size_t>(std::max(N, 0)), default_quad_order(N));
  if (quad_orders.size() == 1)
    return std::vector<int>(static_cast<std::size_t>(std::max(N, 0)), quad_orders.front());
  return quad_orders;
}

void Problem::validate() const
{
  if (N < 1)
    throw DomainError("problem: N must be >= 1");
  const auto orders = resolved_orders();
  if (orders.size() != static_cast<std::size_t>(N))
    throw DomainError("problem: quad_orders must have 1 or N entries");
  for (int o : orders)
    if (o < 1 || o > kMaxRuleOrder)
      throw DomainError("problem: quadrature order out of range");
  if (panel_order < 1 || panel_order > kMaxPanelOrder)
    throw DomainError("problem: panel_order must be in [1, 64]");
}

Problem Problem::with_N(int n) const
{
  Problem q = *this;
  q.N = n;
  if (q.quad_orders.size() > 1)
    q.quad_orders.resize(static_cast<std::size_t>(std::max(n, 1)), q.quad_orders.back());
  return q;
}

RvtValue rvt_kernel(double p, double K)
{
  if (K >= 0.0) {
    const double E = std::exp(-K);
    const double d = (1.0 - p) + p * E;
    return { p * E / d, E / (d * d) };
  }
  const double F = std::exp(K);
  const double d = (1.0 - p) * F + p;
  return { p / d, F / (d * d) };
}

double k_n(const KleProcess& process, double t, std::span<const double> xi)
{
  const auto h = process.primitives(t, static_cast<int>(xi.size()));
  double k = process.mean_primitive(t);
  for (std::size_t j = 0; j < xi.size(); ++j)
    k += h[j] * xi[j];
  return k;
}

std::string to_string(DensityPath path)
{
  switch (path) {
    case DensityPath::Tensor:
      return "tensor";
    case DensityPath::Collapsed:
      return "collapsed";
    case DensityPath::Exact:
      return "exact";
  }
  return "?";
}

DensityPath default_path(const Problem& problem)
{
  return problem.process.xi_law() == XiLaw::StandardGaussian ? DensityPath::Collapsed
                                                             : DensityPath::Tensor;
}

namespace detail {

Window window(const InitialLaw& initial, double p)
{
  // arg(p, K) in [lower, upper]  <=>  K in [logit p - logit upper, logit p - logit lower]
  const double lp = logit(p);
  return { lp - logit(initial.upper()), lp - logit(initial.lower()) };
}

double restricted_line_integral(const InitialLaw& initial,
                                XiLaw law,
                                double p,
                                double base,
                                double slope,
                                int panel_order)
{
  return restricted_line_integral(initial, law, p, window(initial, p), base, slope, panel_order);
}

double restricted_line_integral(const InitialLaw& initial,
                                XiLaw law,
                                double p,
                                const Window& win,
                                double base,
                                double slope,
                                int panel_order)
{
  double x_lo = (win.k_lo - base) / slope;
  double x_hi = (win.k_hi - base) / slope;
  if (slope < 0.0)
    std::swap(x_lo, x_hi);
  const auto [s_lo, s_hi] = xi_support(law);
  x_lo = std::max(x_lo, s_lo);
  x_hi = std::min(x_hi, s_hi);
  if (!(x_hi > x_lo))
    return 0.0;

  const double width = x_hi - x_lo;
  if (law == XiLaw::UniformSym && width * std::abs(slope) >= kClosedFormMinWidthK) {
    // jac dK = -d(arg) / (p (1 - p)), so the segment integral is a CDF difference
    const double u_a = std::clamp(rvt_kernel(p, base + slope * x_lo).arg, initial.lower(), initial.upper());
    const double u_b = std::clamp(rvt_kernel(p, base + slope * x_hi).arg, initial.lower(), initial.upper());
    const double mass = std::abs(initial.cdf(u_a) - initial.cdf(u_b));
    return mass * xi_pdf(law, 0.0) / (p * (1.0 - p) * std::abs(slope));
  }
  int panels = static_cast<int>(std::ceil(width * std::abs(slope) / kPanelWidthK));
  if (law == XiLaw::StandardGaussian)
    panels = std::max(panels, static_cast<int>(std::ceil(width / kPanelWidthGaussian)));
  panels = std::clamp(panels, 1, kMaxPanels);

  const LegendreRule& rule = panel_rule(panel_order);
  const double h = width / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = x_lo + (k + 0.5) * h;
    double part = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + 0.5 * h * rule.nodes[i];
      const RvtValue r = rvt_kernel(p, base + slope * x);
      part += rule.weights[i] * initial.pdf(r.arg) * r.jac * xi_pdf(law, x);
    }
    acc += part;
  }
  return 0.5 * h * acc;
}

} // namespace detail

TimeSlice::TimeSlice(const Problem& problem, double t, DensityPath path)
  : problem_(&problem)
  , t_(t)
  , path_(path)
{
  problem.validate();
  const KleProcess& proc = problem.process;
  proc.domain().require(t);
  const bool at_start = (t == proc.domain().t0);
  const XiLaw law = proc.xi_law();
  double reach = 0.0; // max |K - K_center| over the integration region

  switch (path) {
    case DensityPath::Exact: {
      if (proc.kind() != ProcessKind::Wiener)
        throw DomainError("exact density is only available for the Wiener process");
      pivot_law_ = XiLaw::StandardGaussian;
      if (at_start) {
        identity_ = true;
        break;
      }
      slope_ = std::sqrt(t * t * t / 3.0);
      base_ = { 0.0 };
      weight_ = { 1.0 };
      reach = slope_ * xi_support(XiLaw::StandardGaussian).second;
      break;
    }
    case DensityPath::Collapsed: {
      if (law != XiLaw::StandardGaussian)
        throw DomainError("collapsed path requires Gaussian KLE coordinates");
      pivot_law_ = law;
      const KnMoments km = proc.kn_sigma(t, problem.N);
      if (at_start || km.std == 0.0) {
        identity_ = true;
        shift_ = km.mean;
        break;
      }
      slope_ = km.std;
      shift_ = km.mean;
      base_ = { km.mean };
      weight_ = { 1.0 };
      reach = slope_ * xi_support(law).second;
      break;
    }
    case DensityPath::Tensor: {
      pivot_law_ = law;
      const auto h = proc.primitives(t, problem.N);
      const double m = proc.mean_primitive(t);
      std::size_t pivot = 0;
      for (std::size_t j = 1; j < h.size(); ++j)
        if (std::abs(h[j]) > std::abs(h[pivot]))
          pivot = j;
      if (at_start || h[pivot] == 0.0) {
        identity_ = true;
        shift_ = m;
        break;
      }
      slope_ = h[pivot];
      shift_ = m;
      const double x_max = xi_support(law).second;
      if (h.size() == 1) {
        base_ = { m };
        weight_ = { 1.0 };
        reach = std::abs(slope_) * x_max;
        break;
      }
      const auto orders = problem.resolved_orders();
      std::vector<QuadratureRule> rules;
      std::vector<double> outer_h;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (j == pivot)
          continue;
        rules.push_back(make_rule(rule_kind_for(law), orders[j]));
        outer_h.push_back(h[j]);
      }
      const std::size_t total = tensor_size(rules);
      base_.reserve(total);
      weight_.reserve(total);
      double outer_reach = 0.0;
      for_each_tensor_node(std::span<const QuadratureRule>(rules),
                           [&](std::span<const double> xi, double w) {
                             double k = m;
                             for (std::size_t d = 0; d < xi.size(); ++d)
                               k += outer_h[d] * xi[d];
                             base_.push_back(k);
                             weight_.push_back(w);
                             outer_reach = std::max(outer_reach, std::abs(k - m));
                           });
      reach = outer_reach + std::abs(slope_) * x_max;
      break;
    }
  }

  // density is exactly zero where no admissible K maps p into [p01, p02]
  const double ll = detail::logit(problem.initial.lower());
  const double lu = detail::logit(problem.initial.upper());
  support_ = { logistic(ll + shift_ - reach), logistic(lu + shift_ + reach) };
}

double TimeSlice::operator()(double p) const
{
  require_open_unit(p);
  const InitialLaw& initial = problem_->initial;
  if (identity_) {
    if (shift_ == 0.0)
      return initial.pdf(p);
    const RvtValue r = rvt_kernel(p, shift_);
    return initial.pdf(r.arg) * r.jac;
  }
  if (p < support_.first || p > support_.second)
    return 0.0;
  const detail::Window win = detail::window(initial, p);
  double acc = 0.0;
  for (std::size_t i = 0; i < base_.size(); ++i)
    acc += weight_[i] * detail::restricted_line_integral(
                          initial, pivot_law_, p, win, base_[i], slope_, problem_->panel_order);
  return acc;
}

double f1n_eval(const Problem& problem, double p, double t)
{
  return TimeSlice(problem, t, DensityPath::Tensor)(p);
}

double f1n_collapsed(const Problem& problem, double p, double t)
{
  return TimeSlice(problem, t, DensityPath::Collapsed)(p);
}

double f1_exact_wiener(const InitialLaw& initial, double p, double t, double T, int panel_order)
{
  require_open_unit(p);
  if (!(t >= 0.0 && t <= T))
    throw DomainError("f1_exact_wiener: t outside [0, T]");
  if (panel_order < 1 || panel_order > kMaxPanelOrder)
    throw DomainError("f1_exact_wiener: panel_order must be in [1, 64]");
  if (t == 0.0)
    return initial.pdf(p);
  // integral of W over [0, t] is N(0, t^3/3)
  const double sigma = std::sqrt(t * t * t / 3.0);
  return detail::restricted_line_integral(
    initial, XiLaw::StandardGaussian, p, 0.0, sigma, panel_order);
}

double evaluate_density(const Problem& problem, double p, double t, DensityPath path)
{
  switch (path) {
    case DensityPath::Tensor:
      return f1n_eval(problem, p, t);
    case DensityPath::Collapsed:
      return f1n_collapsed(problem, p, t);
    case DensityPath::Exact:
      if (problem.process.kind() != ProcessKind::Wiener)
        throw DomainError("exact density is only available for the Wiener process");
      return f1_exact_wiener(problem.initial, p, t, problem.process.domain().T, problem.panel_order);
  }
  throw DomainError("unknown density path");
}

} // namespace logkle
