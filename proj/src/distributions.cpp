#include "logkle/distributions.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace logkle {

namespace {

constexpr double sqrt3 = std::numbers::sqrt3;
constexpr std::size_t kCdfCells = 1024;
constexpr int kCellOrder = 12;

double ipow(double x, int n)
{
  double r = 1.0;
  while (n > 0) {
    if (n & 1)
      r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

int as_small_int(double v)
{
  const double r = std::round(v);
  return (r == v && r >= 0.0 && r <= 64.0) ? static_cast<int>(r) : -1;
}

void require_support(double lower, double upper)
{
  if (!(lower > 0.0 && lower < upper && upper < 1.0))
    throw DomainError("initial law: support must satisfy 0 < lower < upper < 1");
}

const LegendreRule& cell_rule()
{
  static const LegendreRule rule = gauss_legendre_unit(kCellOrder);
  return rule;
}

} // namespace

std::string to_string(XiLaw law)
{
  return law == XiLaw::StandardGaussian ? "gaussian" : "uniform";
}

double xi_pdf(XiLaw law, double x)
{
  if (law == XiLaw::StandardGaussian)
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
  return (x > -sqrt3 && x < sqrt3) ? 1.0 / (2.0 * sqrt3) : 0.0;
}

double xi_quantile(XiLaw law, double u)
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("xi_quantile: u must lie in (0, 1)");
  if (law == XiLaw::StandardGaussian)
    return boost::math::quantile(boost::math::normal_distribution<double>(), u);
  return -sqrt3 + 2.0 * sqrt3 * u;
}

std::pair<double, double> xi_support(XiLaw law)
{
  if (law == XiLaw::StandardGaussian)
    return { -12.0, 12.0 };
  return { -sqrt3, sqrt3 };
}

InitialLaw InitialLaw::truncated_beta(double alpha, double beta, double lower, double upper)
{
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw DomainError("truncated beta: alpha and beta must be positive");
  require_support(lower, upper);
  InitialLaw law;
  law.kind_ = InitialKind::TruncatedBeta;
  law.p1_ = alpha;
  law.p2_ = beta;
  law.lower_ = lower;
  law.upper_ = upper;
  law.int_a_ = as_small_int(alpha - 1.0);
  law.int_b_ = as_small_int(beta - 1.0);
  law.norm_ = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
    [&law](double p) { return law.kernel(p); }, lower, upper, 20, 1e-14);
  law.build_cdf_table();
  return law;
}

InitialLaw InitialLaw::truncated_exponential(double rate, double lower, double upper)
{
  if (!(rate > 0.0))
    throw DomainError("truncated exponential: rate must be positive");
  require_support(lower, upper);
  InitialLaw law;
  law.kind_ = InitialKind::TruncatedExponential;
  law.p1_ = rate;
  law.p2_ = 0.0;
  law.lower_ = lower;
  law.upper_ = upper;
  law.norm_ = std::exp(-rate * lower) - std::exp(-rate * upper);
  law.build_cdf_table();
  return law;
}

std::string InitialLaw::name() const
{
  std::ostringstream os;
  if (kind_ == InitialKind::TruncatedBeta)
    os << "beta(" << p1_ << "," << p2_ << ")";
  else
    os << "exponential(rate=" << p1_ << ")";
  os << "[" << lower_ << "," << upper_ << "]";
  return os.str();
}

double InitialLaw::kernel(double p) const
{
  if (kind_ == InitialKind::TruncatedExponential)
    return p1_ * std::exp(-p1_ * p);
  const double a = int_a_ >= 0 ? ipow(p, int_a_) : std::pow(p, p1_ - 1.0);
  const double b = int_b_ >= 0 ? ipow(1.0 - p, int_b_) : std::pow(1.0 - p, p2_ - 1.0);
  return a * b;
}

double InitialLaw::pdf(double p) const
{
  if (!(p >= lower_ && p <= upper_))
    return 0.0;
  return kernel(p) / norm_;
}

double InitialLaw::cell_integral(double from, double to) const
{
  const auto& r = cell_rule();
  const double half = 0.5 * (to - from);
  const double mid = 0.5 * (to + from);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    acc += r.weights[i] * kernel(mid + half * r.nodes[i]);
  return acc * half;
}

void InitialLaw::build_cdf_table()
{
  cum_.assign(kCdfCells + 1, 0.0);
  const double h = (upper_ - lower_) / static_cast<double>(kCdfCells);
  for (std::size_t i = 0; i < kCdfCells; ++i) {
    const double a = lower_ + h * static_cast<double>(i);
    cum_[i + 1] = cum_[i] + cell_integral(a, a + h);
  }
  table_total_ = cum_.back();
  for (double& c : cum_)
    c /= table_total_;
  cum_.back() = 1.0;
}

double InitialLaw::cdf(double p) const
{
  if (p <= lower_)
    return 0.0;
  if (p >= upper_)
    return 1.0;
  const double h = (upper_ - lower_) / static_cast<double>(kCdfCells);
  auto cell = static_cast<std::size_t>((p - lower_) / h);
  cell = std::min(cell, kCdfCells - 1);
  const double a = lower_ + h * static_cast<double>(cell);
  return std::min(1.0, cum_[cell] + cell_integral(a, p) / table_total_);
}

double InitialLaw::sample(double u) const
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("initial sample: u must lie in (0, 1)");
  // cell containing u, then safeguarded Newton inside it
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t cell = static_cast<std::size_t>(std::distance(cum_.begin(), it));
  cell = std::clamp<std::size_t>(cell, 1, kCdfCells) - 1;
  const double h = (upper_ - lower_) / static_cast<double>(kCdfCells);
  double lo = lower_ + h * static_cast<double>(cell);
  double hi = (cell + 1 == kCdfCells) ? upper_ : lo + h;

  double x = lo + h * (u - cum_[cell]) / std::max(cum_[cell + 1] - cum_[cell], 1e-300);
  x = std::clamp(x, lo, hi);
  for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
    const double g = cdf(x) - u;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    const double d = kernel(x) / table_total_;
    double next = (d > 0.0) ? x - g / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

} // namespace logkle
