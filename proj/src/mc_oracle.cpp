#include "logkle/mc_oracle.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"
#include "logkle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace logkle {

namespace {

// fixed shard count: the sample stream depends on the seed only, never on
// the number of threads
constexpr std::size_t kShards = 16;
constexpr int kBinRuleOrder = 4;
// shard seed = seed xor (shard * kShardSpread)
constexpr std::uint64_t kShardSpread = 0x9E3779B97F4A7C15ULL;

struct ShardResult
{
  std::vector<std::uint64_t> counts;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0; // powers of (x - shift)
};

double flow(double p0, double K)
{
  if (K >= 0.0) {
    const double E = std::exp(-K);
    return p0 / (p0 + (1.0 - p0) * E);
  }
  const double F = std::exp(K);
  return p0 * F / (p0 * F + (1.0 - p0));
}

double logistic(double y)
{
  if (y >= 0.0)
    return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

double draw(const InitialLaw& initial,
            XiLaw law,
            const std::vector<double>& h,
            double m,
            std::mt19937_64& rng)
{
  const double p0 = initial.sample(uniform_open01(rng));
  double k = m;
  for (double hj : h)
    k += hj * xi_quantile(law, uniform_open01(rng));
  return flow(p0, k);
}

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

} // namespace

void McConfig::validate() const
{
  if (samples < 10'000)
    throw DomainError("mc: samples must be >= 10000");
  if (bins < 20)
    throw DomainError("mc: bins must be >= 20");
}

double uniform_open01(std::mt19937_64& rng)
{
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_pn(const Problem& problem, double t, std::mt19937_64& rng)
{
  const auto h = problem.process.primitives(t, problem.N);
  return draw(problem.initial, problem.process.xi_law(), h, problem.process.mean_primitive(t), rng);
}

McReport mc_density_check(const Problem& problem,
                          double t,
                          const McConfig& cfg,
                          std::optional<DensityPath> path,
                          const Problem* sampler)
{
  cfg.validate();
  problem.validate();
  const Problem& src = sampler ? *sampler : problem;
  src.validate();
  const DensityPath route = path.value_or(default_path(problem));
  const TimeSlice slice(problem, t, route);

  McReport r;
  r.density_N = problem.N;
  r.sampler_N = src.N;
  r.t = t;
  r.seed = cfg.seed;
  r.samples = cfg.samples;

  const KnMoments km = problem.process.kn_sigma(t, problem.N);
  r.lower = logistic(detail::logit(problem.initial.lower()) + km.mean - 6.0 * km.std);
  r.upper = logistic(detail::logit(problem.initial.upper()) + km.mean + 6.0 * km.std);
  const auto nb = static_cast<std::size_t>(cfg.bins);
  const double width = (r.upper - r.lower) / static_cast<double>(nb);

  const Moments dm = moments_n(problem, t, route);
  r.density_mean = dm.mean;
  r.density_variance = dm.variance;
  const double shift = dm.mean;

  const auto h = src.process.primitives(t, src.N);
  const double m = src.process.mean_primitive(t);
  const XiLaw law = src.process.xi_law();

  std::vector<ShardResult> shards(kShards);
  const auto n_shards = static_cast<std::int64_t>(kShards);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < n_shards; ++s) {
    const auto si = static_cast<std::size_t>(s);
    const std::size_t begin = cfg.samples * si / kShards;
    const std::size_t end = cfg.samples * (si + 1) / kShards;
    std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(si) * kShardSpread));
    ShardResult& out = shards[si];
    out.counts.assign(nb, 0);
    for (std::size_t i = begin; i < end; ++i) {
      const double x = draw(src.initial, law, h, m, rng);
      if (x >= r.lower && x < r.upper) {
        auto b = static_cast<std::size_t>((x - r.lower) / width);
        out.counts[std::min(b, nb - 1)] += 1;
      }
      const double d = x - shift;
      const double d2 = d * d;
      out.s1 += d;
      out.s2 += d2;
      out.s3 += d2 * d;
      out.s4 += d2 * d2;
    }
  }

  r.counts.assign(nb, 0);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (const auto& sh : shards) {
    for (std::size_t b = 0; b < nb; ++b)
      r.counts[b] += sh.counts[b];
    s1 += sh.s1;
    s2 += sh.s2;
    s3 += sh.s3;
    s4 += sh.s4;
  }

  const double n = static_cast<double>(cfg.samples);
  const double a1 = s1 / n;
  const double a2 = s2 / n;
  const double a3 = s3 / n;
  const double a4 = s4 / n;
  const double mu2 = a2 - a1 * a1;
  const double mu4 = a4 - 4.0 * a1 * a3 + 6.0 * a1 * a1 * a2 - 3.0 * a1 * a1 * a1 * a1;
  r.mc_mean = shift + a1;
  r.mc_variance = mu2 * n / (n - 1.0);
  r.mc_mean_se = std::sqrt(mu2 / n);
  r.mc_variance_se = std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / n);
  r.mean_z = (r.mc_mean - r.density_mean) / r.mc_mean_se;
  r.variance_z = (r.mc_variance - r.density_variance) / r.mc_variance_se;

  // bin probability: bin-averaged density times width
  const LegendreRule rule = gauss_legendre_unit(kBinRuleOrder);
  r.expected.assign(nb, 0.0);
  r.z.assign(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    const double lo = r.lower + width * static_cast<double>(b);
    const double mid = lo + 0.5 * width;
    double prob = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      prob += rule.weights[i] * slice(mid + 0.5 * width * rule.nodes[i]);
    prob *= 0.5 * width;
    r.expected[b] = prob;
    const double c = static_cast<double>(r.counts[b]);
    const double var = std::max(n * prob * (1.0 - prob), 1.0);
    r.z[b] = (c - n * prob) / std::sqrt(var);
    r.max_abs_z = std::max(r.max_abs_z, std::abs(r.z[b]));
    r.l1 += std::abs(c / n - prob);
  }
  return r;
}

std::string McReport::to_text() const
{
  std::ostringstream os;
  os << "mc density check\n"
     << "  density_N      " << density_N << '\n'
     << "  sampler_N      " << sampler_N << '\n'
     << "  t              " << fmt(t) << '\n'
     << "  seed           " << seed << '\n'
     << "  samples        " << samples << '\n'
     << "  bins           " << counts.size() << '\n'
     << "  range          [" << fmt(lower) << ", " << fmt(upper) << "]\n"
     << "  max_abs_z      " << fmt(max_abs_z) << '\n'
     << "  l1             " << fmt(l1) << '\n'
     << "  mean           mc " << fmt(mc_mean) << " +- " << fmt(mc_mean_se)
     << "  density " << fmt(density_mean) << "  z " << fmt(mean_z) << '\n'
     << "  variance       mc " << fmt(mc_variance) << " +- " << fmt(mc_variance_se)
     << "  density " << fmt(density_variance) << "  z " << fmt(variance_z) << '\n';
  return os.str();
}

std::string McReport::to_csv() const
{
  std::ostringstream os;
  os << "bin,lower,upper,count,expected,z\n";
  const double width = (upper - lower) / static_cast<double>(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double lo = lower + width * static_cast<double>(b);
    os << b << ',' << fmt(lo) << ',' << fmt(lo + width) << ',' << counts[b] << ','
       << fmt(expected[b]) << ',' << fmt(z[b]) << '\n';
  }
  return os.str();
}

} // namespace logkle
