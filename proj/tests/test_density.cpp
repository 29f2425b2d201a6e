#include "logkle/density.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"
#include "oracles.hpp"
#include "problems.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <numbers>

using namespace logkle;
using namespace testing_problems;

namespace {

double trapezoid_mass(const Problem& problem, double t, DensityPath path)
{
  const TimeSlice slice(problem, t, path);
  const auto p = linspace(0.001, 0.999, 2001);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = (i == 0 || i + 1 == p.size()) ? 0.5 : 1.0;
    acc += w * slice(p[i]);
  }
  return acc * (p[1] - p[0]);
}

} // namespace

TEST(RvtKernel, IdentityAtZero)
{
  for (double p : { 0.01, 0.3, 0.5, 0.97 }) {
    const RvtValue r = rvt_kernel(p, 0.0);
    EXPECT_EQ(r.arg, p);
    EXPECT_EQ(r.jac, 1.0);
  }
}

TEST(RvtKernel, HandValue)
{
  const RvtValue r = rvt_kernel(0.5, std::log(2.0));
  EXPECT_NEAR(r.arg, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.jac, 8.0 / 9.0, 1e-15);
}

TEST(RvtKernel, BothBranchesMatchDirectFormula)
{
  for (double p : { 0.05, 0.4, 0.9 })
    for (double K : { -3.0, -0.2, 0.2, 3.0 }) {
      const RvtValue r = rvt_kernel(p, K);
      EXPECT_NEAR(r.arg, oracle::inverse_flow(p, K), 1e-14);
      EXPECT_NEAR(r.jac, oracle::inverse_flow_dp(p, K), 1e-13);
    }
}

TEST(RvtKernel, FiniteAtExtremeK)
{
  for (double K = -1000.0; K <= 1000.0; K += 12.5)
    for (double p : { 1e-12, 0.5, 1.0 - 1e-12 }) {
      const RvtValue r = rvt_kernel(p, K);
      EXPECT_TRUE(std::isfinite(r.arg) && std::isfinite(r.jac));
      EXPECT_GE(r.arg, 0.0);
      EXPECT_LE(r.arg, 1.0);
    }
  EXPECT_NEAR(rvt_kernel(0.3, 800.0).arg, 0.0, 1e-300);
  EXPECT_NEAR(rvt_kernel(0.3, -800.0).arg, 1.0, 1e-15);
  EXPECT_EQ(rvt_kernel(0.3, 800.0).jac, 0.0);
  EXPECT_EQ(rvt_kernel(0.3, -800.0).jac, 0.0);
}

TEST(KN, ValuesAndLinearity)
{
  const KleProcess w = KleProcess::wiener(1.5);
  const std::vector<double> xi = { 0.3, -1.2, 2.0 };
  EXPECT_EQ(k_n(w, 0.0, xi), 0.0);
  const std::vector<double> one = { 1.0 };
  EXPECT_NEAR(k_n(w, 1.5, one), 1.05296, 1e-5);
  const std::vector<double> xi2 = { 0.6, -2.4, 4.0 };
  EXPECT_NEAR(k_n(w, 0.8, xi2), 2.0 * k_n(w, 0.8, xi), 1e-14);
  EXPECT_THROW(k_n(w, 2.0, xi), DomainError);
}

TEST(Density, InitialTimeReturnsInitialDensityExactly)
{
  for (const Problem& pr : { example1(3), example2(2), example3(3) }) {
    const double t0 = pr.process.domain().t0;
    for (int i = 1; i <= 50; ++i) {
      const double p = i / 51.0;
      const double f0 = pr.initial.pdf(p);
      EXPECT_EQ(f1n_eval(pr, p, t0), f0);
      if (pr.process.xi_law() == XiLaw::StandardGaussian)
        EXPECT_EQ(f1n_collapsed(pr, p, t0), f0);
    }
  }
  const Problem pr = example1(1);
  EXPECT_EQ(f1_exact_wiener(pr.initial, 0.3, 0.0, 1.5), pr.initial.pdf(0.3));
}

TEST(Density, TensorMatchesCollapsedForGaussianXi)
{
  for (int N = 1; N <= 3; ++N) {
    for (const Problem& pr : { example1(N), example2(N) }) {
      const double T = pr.process.domain().T;
      for (double t : { 0.25 * T, 0.5 * T, T })
        for (double p : { 0.2, 0.35, 0.5 }) {
          const double a = f1n_eval(pr, p, t);
          const double b = f1n_collapsed(pr, p, t);
          EXPECT_NEAR(a, b, 1e-6) << pr.process.name() << " N=" << N << " p=" << p << " t=" << t;
        }
    }
  }
}

TEST(Density, SingleModeTensorEqualsCollapsed)
{
  const Problem pr = example1(1);
  for (double p : { 0.15, 0.3, 0.45 })
    EXPECT_NEAR(f1n_eval(pr, p, 0.9), f1n_collapsed(pr, p, 0.9), 1e-12);
}

TEST(Density, CollapsedMatchesDirectOneDimensionalIntegral)
{
  const Problem pr = example1(2);
  const oracle::Beta f0(7, 10, 0.1, 0.9);
  for (double t : { 0.5, 1.2 }) {
    const double s = pr.process.kn_sigma(t, 2).std;
    for (double p : { 0.2, 0.33, 0.6 }) {
      const double ref = oracle::rvt_density_1d([&](double u) { return f0.pdf(u); }, 0.1, 0.9,
                                                oracle::normal_pdf, -12.0, 12.0, p, s);
      EXPECT_NEAR(f1n_collapsed(pr, p, t), ref, 1e-9) << p << " " << t;
    }
  }
}

TEST(Density, UniformSingleModeMatchesDirectIntegral)
{
  const Problem pr = example3(1);
  const oracle::Beta f0(7, 10, 0.1, 0.9);
  const double r3 = std::sqrt(3.0);
  auto g = [r3](double x) { return (x > -r3 && x < r3) ? 1.0 / (2.0 * r3) : 0.0; };
  for (double t : { -0.3, 0.1, 0.5 }) {
    const double h = pr.process.primitive_h(1, t);
    for (double p : { 0.2, 0.33, 0.45 }) {
      const double ref = oracle::rvt_density_1d([&](double u) { return f0.pdf(u); }, 0.1, 0.9, g,
                                                -r3, r3, p, h);
      EXPECT_NEAR(f1n_eval(pr, p, t), ref, 1e-9) << p << " " << t;
    }
  }
}

TEST(Density, UniformTwoModesMatchNestedIntegral)
{
  const Problem pr = example3(2);
  const oracle::Beta f0(7, 10, 0.1, 0.9);
  const double r3 = std::sqrt(3.0);
  const double t = 0.2;
  const double h1 = pr.process.primitive_h(1, t);
  const double h2 = pr.process.primitive_h(2, t);
  for (double p : { 0.25, 0.4 }) {
    // outer xi_2 by adaptive Simpson, inner xi_1 exactly piecewise
    auto inner = [&](double x2) {
      auto h = [&](double x1) {
        const double K = h1 * x1 + h2 * x2;
        return f0.pdf(oracle::inverse_flow(p, K)) * oracle::inverse_flow_dp(p, K) / (2.0 * r3);
      };
      auto edge = [&](double e) {
        const double x = (std::log(p / (1 - p)) - std::log(e / (1 - e)) - h2 * x2) / h1;
        return std::min(std::max(x, -r3), r3);
      };
      double a = edge(0.9), b = edge(0.1);
      if (a > b)
        std::swap(a, b);
      return oracle::piecewise_simpson(h, { -r3, a, b, r3 }, 1e-13) / (2.0 * r3);
    };
    const double ref = oracle::adaptive_simpson(inner, -r3, r3, 1e-11);
    EXPECT_NEAR(f1n_eval(pr, p, t), ref, 1e-6) << p;
  }
}

TEST(Density, NormalizedAtTabulatedTimes)
{
  for (int N = 1; N <= 4; ++N) {
    for (double t : { 0.5, 0.75, 1.0, 1.5 })
      EXPECT_NEAR(trapezoid_mass(example1(N), t, DensityPath::Collapsed), 1.0, 1e-3);
    for (double t : { 0.25, 0.4, 0.5 })
      EXPECT_NEAR(trapezoid_mass(example2(N), t, DensityPath::Collapsed), 1.0, 1e-3);
  }
  for (int N = 1; N <= 3; ++N)
    for (double t : { -0.25, 0.0, 0.25 })
      EXPECT_NEAR(trapezoid_mass(example3(N), t, DensityPath::Tensor), 1.0, 1e-3);
}

TEST(ExactDensity, NormalizedAndMatchesLongTruncation)
{
  const Problem pr = example1(200);
  for (double t : { 0.5, 1.5 })
    EXPECT_NEAR(trapezoid_mass(pr, t, DensityPath::Exact), 1.0, 1e-4);
  EXPECT_LE(std::abs(f1_exact_wiener(pr.initial, 0.4, 1.0, 1.5) - f1n_collapsed(pr, 0.4, 1.0)), 5e-4);
}

TEST(ExactDensity, MatchesDirectIntegralAndSmallTimeLimit)
{
  const Problem pr = example1(1);
  const oracle::Beta f0(7, 10, 0.1, 0.9);
  for (double t : { 0.3, 1.0, 1.5 }) {
    const double s = std::sqrt(t * t * t / 3.0);
    for (double p : { 0.12, 0.3, 0.7 }) {
      const double ref = oracle::rvt_density_1d([&](double u) { return f0.pdf(u); }, 0.1, 0.9,
                                                oracle::normal_pdf, -12.0, 12.0, p, s);
      EXPECT_NEAR(f1_exact_wiener(pr.initial, p, t, 1.5), ref, 1e-9);
    }
  }
  EXPECT_NEAR(f1_exact_wiener(pr.initial, 0.35, 1e-6, 1.5), pr.initial.pdf(0.35), 1e-6);
  EXPECT_THROW(f1_exact_wiener(pr.initial, 0.35, 1.6, 1.5), DomainError);
}

TEST(Density, ZeroOutsideTheSupportImage)
{
  const Problem pr = example1(3);
  const TimeSlice slice(pr, 0.1, DensityPath::Tensor);
  EXPECT_EQ(slice(0.01), 0.0);
  EXPECT_EQ(slice(0.99), 0.0);
  EXPECT_EQ(f1n_collapsed(pr, 0.01, 0.1), 0.0);
  const auto [lo, hi] = slice.support();
  EXPECT_GT(lo, 0.01);
  EXPECT_LT(hi, 0.99);
  const Problem u = example3(2);
  EXPECT_EQ(f1n_eval(u, 0.02, -0.4), 0.0);
  EXPECT_EQ(f1n_eval(u, 0.98, -0.4), 0.0);
}

TEST(Density, FiniteForLargeKSpread)
{
  Problem pr{ KleProcess::wiener(200.0), InitialLaw::truncated_beta(7, 10, 0.1, 0.9), 2, {}, 10 };
  for (double p : { 1e-9, 0.3, 1.0 - 1e-9 })
    for (double t : { 10.0, 200.0 }) {
      EXPECT_TRUE(std::isfinite(f1n_eval(pr, p, t)));
      EXPECT_TRUE(std::isfinite(f1n_collapsed(pr, p, t)));
    }
}

TEST(Density, Preconditions)
{
  const Problem pr = example1(2);
  EXPECT_THROW(f1n_eval(pr, 0.0, 0.5), DomainError);
  EXPECT_THROW(f1n_eval(pr, 1.0, 0.5), DomainError);
  EXPECT_THROW(f1n_eval(pr, 0.5, 1.7), DomainError);
  EXPECT_THROW(f1n_collapsed(example3(2), 0.5, 0.0), DomainError);
  EXPECT_THROW(evaluate_density(example2(2), 0.5, 0.5, DensityPath::Exact), DomainError);
  Problem bad = example1(0);
  EXPECT_THROW(f1n_eval(bad, 0.5, 0.5), DomainError);
  Problem big = example1(6);
  big.quad_orders = { 40 };
  EXPECT_THROW(f1n_eval(big, 0.5, 0.5), TensorSizeError);
}

TEST(Density, QuadOrderResolution)
{
  EXPECT_EQ(default_quad_order(1), 40);
  EXPECT_EQ(default_quad_order(2), 40);
  EXPECT_EQ(default_quad_order(3), 25);
  EXPECT_EQ(default_quad_order(4), 15);
  EXPECT_EQ(default_quad_order(7), 10);
  Problem pr = example1(3);
  EXPECT_EQ(pr.resolved_orders(), (std::vector<int>{ 25, 25, 25 }));
  pr.quad_orders = { 12 };
  EXPECT_EQ(pr.resolved_orders(), (std::vector<int>{ 12, 12, 12 }));
  pr.quad_orders = { 12, 8 };
  EXPECT_THROW(pr.validate(), DomainError);
  EXPECT_EQ(default_path(example1(1)), DensityPath::Collapsed);
  EXPECT_EQ(default_path(example3(1)), DensityPath::Tensor);
}

TEST(DensityGrid, SinglePointDelegates)
{
  const Problem pr = example1(2);
  const std::vector<double> p = { 0.3 };
  const std::vector<double> t = { 0.75 };
  const DensityGrid g = density_grid(pr, p, t, DensityPath::Tensor);
  EXPECT_EQ(g.at(0, 0), f1n_eval(pr, 0.3, 0.75));
  EXPECT_EQ(g.N, 2);
  EXPECT_EQ(g.quad_orders, (std::vector<int>{ 40, 40 }));
}

TEST(DensityGrid, InitialRowIsInitialDensity)
{
  const Problem pr = example3(2);
  const auto p = linspace(0.005, 0.995, 41);
  const std::vector<double> t = { -0.5, 0.0 };
  const DensityGrid g = density_grid(pr, p, t, DensityPath::Tensor);
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_EQ(g.at(0, i), pr.initial.pdf(p[i]));
}

TEST(DensityGrid, ParallelMatchesSerialBitwise)
{
  const auto p = linspace(0.005, 0.995, 37);
  for (const Problem& pr : { example1(2), example3(2) }) {
    const auto& d = pr.process.domain();
    const auto t = linspace(d.t0, d.T, 5);
    const DensityPath path = default_path(pr);
    const DensityGrid ref = density_grid_serial(pr, p, t, path);
    for (int threads : { 1, 2, 4 }) {
      omp_set_num_threads(threads);
      const DensityGrid g = density_grid(pr, p, t, path);
      ASSERT_EQ(g.values.size(), ref.values.size());
      for (std::size_t i = 0; i < g.values.size(); ++i)
        EXPECT_EQ(g.values[i], ref.values[i]) << i;
    }
  }
}

TEST(DensityGrid, RejectsUnsortedGrids)
{
  const Problem pr = example1(1);
  const std::vector<double> p = { 0.5, 0.3 };
  const std::vector<double> t = { 0.5 };
  EXPECT_THROW(density_grid(pr, p, t, DensityPath::Collapsed), DomainError);
  EXPECT_THROW(density_grid(pr, t, std::vector<double>{}, DensityPath::Collapsed), DomainError);
}

TEST(DensityGrid, TensorGridWithinTimeBudget)
{
  const Problem pr = example1(2);
  const auto p = linspace(0.005, 0.995, 101);
  const std::vector<double> t = { 0.5, 0.75, 1.0, 1.5 };
  const auto start = std::chrono::steady_clock::now();
  const DensityGrid g = density_grid(pr, p, t, DensityPath::Tensor);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
  for (double v : g.values)
    EXPECT_GE(v, 0.0);
}
