#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"
#include "logkle/stats.hpp"
#include "oracles.hpp"
#include "problems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace logkle;
using namespace testing_problems;

namespace {

bool within(double value, double reference, double rel, double abs_tol)
{
  return std::abs(value - reference) <= std::max(rel * std::abs(reference), abs_tol);
}

} // namespace

TEST(Grids, Defaults)
{
  const UniformGrid m = default_moment_grid();
  EXPECT_EQ(m.points, 2001u);
  EXPECT_DOUBLE_EQ(m.lower, 0.001);
  EXPECT_DOUBLE_EQ(m.upper, 0.999);
  EXPECT_FALSE(m.zero_ends);
  const UniformGrid e = default_error_grid();
  EXPECT_EQ(e.points, 2001u);
  EXPECT_TRUE(e.zero_ends);
  EXPECT_EQ(e.nodes().front(), 0.0);
  EXPECT_EQ(e.nodes().back(), 1.0);
  EXPECT_EQ(kDefaultTimePoints, 151u);
}

TEST(Moments, InitialTimeEqualsInitialLawMoments)
{
  const oracle::Beta ref(7, 10, 0.1, 0.9);
  const double mean = oracle::adaptive_simpson([&](double p) { return p * ref.pdf(p); }, 0.1, 0.9, 1e-14);
  const double m2 = oracle::adaptive_simpson([&](double p) { return p * p * ref.pdf(p); }, 0.1, 0.9, 1e-14);
  const Moments m = moments_n(example1(2), 0.0);
  EXPECT_NEAR(m.mean, mean, 1e-6);
  EXPECT_NEAR(m.variance, m2 - mean * mean, 1e-6);
  const Moments m3 = moments_n(example3(2), -0.5);
  EXPECT_NEAR(m3.mean, mean, 1e-6);
}

TEST(Moments, MeanInsideUnitIntervalAndVarianceNonNegative)
{
  for (const Problem& pr : { example1(2), example2(3), example3(2) }) {
    const auto& d = pr.process.domain();
    for (double t : linspace(d.t0, d.T, 7)) {
      const Moments m = moments_n(pr, t);
      EXPECT_GT(m.mean, 0.0);
      EXPECT_LT(m.mean, 1.0);
      EXPECT_GE(m.variance, 0.0);
    }
  }
}

TEST(Moments, DensityMomentOrderZeroIsMass)
{
  const Problem pr = example1(2);
  const TimeSlice s(pr, 0.75, DensityPath::Collapsed);
  EXPECT_NEAR(density_moment(s, default_moment_grid(), 0), 1.0, 1e-6);
  EXPECT_NEAR(density_moment(s, default_moment_grid(), 1), moments_n(pr, 0.75).mean, 1e-14);
  EXPECT_THROW(density_moment(s, default_moment_grid(), -1), DomainError);
}

TEST(Moments, CurveMatchesPointEvaluation)
{
  const Problem pr = example2(2);
  const std::vector<double> times = { 0.0, 0.3, 0.9 };
  const auto curve = moment_curve(pr, times, DensityPath::Collapsed);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Moments m = moments_n(pr, times[i]);
    EXPECT_EQ(curve[i].mean, m.mean);
    EXPECT_EQ(curve[i].variance, m.variance);
  }
}

TEST(Moments, ExactMeanMatchesLongTruncation)
{
  const Problem pr = example1(200);
  for (double t : { 0.5, 1.0, 1.5 }) {
    const Moments a = moments_exact_wiener(pr, t);
    const Moments b = moments_n(pr, t);
    EXPECT_NEAR(a.mean, b.mean, 1e-4);
    EXPECT_NEAR(a.variance, b.variance, 1e-4);
  }
}

TEST(Errors, SelfComparisonIsZero)
{
  const Problem pr = example1(2);
  const TimeSlice s(pr, 0.75, DensityPath::Collapsed);
  EXPECT_EQ(l1_distance(s, s, default_error_grid()), 0.0);
  const std::vector<Moments> curve = { { 0.3, 0.01 }, { 0.35, 0.02 }, { 0.4, 0.015 } };
  EXPECT_EQ(moment_curve_distance(curve, curve, MomentKind::Mean, 0.1), 0.0);
  EXPECT_EQ(moment_curve_distance(curve, curve, MomentKind::Variance, 0.1), 0.0);
  // f_1^N against itself through the other Gaussian route: tiny
  const TimeSlice t(pr, 0.75, DensityPath::Tensor);
  EXPECT_LT(l1_distance(s, t, default_error_grid()), 1e-6);
}

TEST(Errors, KindNamesAndPreconditions)
{
  EXPECT_EQ(to_string(ErrorKind::PdfVsExact), "pdf_vs_exact");
  EXPECT_EQ(to_string(ErrorKind::VarianceConsecutive), "variance_consecutive");
  EXPECT_THROW(e_pdf_exact(example2(2), 0.5), DomainError);
  EXPECT_THROW(e_moment_exact(example3(2), MomentKind::Mean, 11), DomainError);
  EXPECT_THROW(e_pdf_consecutive(example1(1), 0.5), DomainError);
  EXPECT_THROW(e_moment_consecutive(example2(2), MomentKind::Mean, 10), DomainError);
  UniformGrid even = default_error_grid();
  even.points = 2000;
  EXPECT_THROW(e_pdf_exact(example1(1), 0.5, std::nullopt, even), DomainError);
}

TEST(Errors, ReportFields)
{
  const ErrorReport r = e_pdf_exact(example1(2), 0.75);
  EXPECT_EQ(r.kind, ErrorKind::PdfVsExact);
  ASSERT_TRUE(r.t.has_value());
  EXPECT_EQ(*r.t, 0.75);
  EXPECT_EQ(r.N, 2);
  EXPECT_GE(r.value, 0.0);
  const ErrorReport m = e_moment_consecutive(example2(2), MomentKind::Variance, 21);
  EXPECT_EQ(m.kind, ErrorKind::VarianceConsecutive);
  EXPECT_FALSE(m.t.has_value());
}

TEST(Errors, PdfErrorAgainstExactReferenceValues)
{
  EXPECT_TRUE(within(e_pdf_exact(example1(1), 0.5).value, 0.037418, 0.05, 2e-4));
}

TEST(Errors, PdfErrorDecreasesWithN)
{
  for (double t : { 0.5, 0.75, 1.0, 1.5 }) {
    double prev = INFINITY;
    for (int N = 1; N <= 3; ++N) {
      const double e = e_pdf_exact(example1(N), t).value;
      EXPECT_LT(e, prev) << t << " " << N;
      prev = e;
    }
  }
  for (double t : { 0.25, 0.4, 0.5 }) {
    double prev = INFINITY;
    for (int N = 2; N <= 4; ++N) {
      const double e = e_pdf_consecutive(example2(N), t).value;
      EXPECT_LT(e, prev) << t << " " << N;
      prev = e;
    }
  }
}

TEST(Errors, ConsecutivePdfErrorReferenceValues)
{
  EXPECT_TRUE(within(e_pdf_consecutive(example2(2), 0.25).value, 0.002382, 0.15, 5e-4));
  const double e3 = e_pdf_consecutive(example3(2), 0.0).value;
  EXPECT_GT(e3, 0.029739 / 10.0);
  EXPECT_LT(e3, 0.029739 * 10.0);
}

TEST(Errors, MomentErrorsAgainstExactReferenceValues)
{
  const double e1 = e_moment_exact(example1(1), MomentKind::Mean).value;
  EXPECT_TRUE(within(e1, 0.000659, 0.10, 5e-5)) << e1;
  const double v4 = e_moment_exact(example1(4), MomentKind::Variance).value;
  EXPECT_TRUE(within(v4, 0.000035, 0.25, 2e-5)) << v4;
}

TEST(Errors, MomentErrorsNonIncreasingInN)
{
  for (MomentKind kind : { MomentKind::Mean, MomentKind::Variance }) {
    double prev = INFINITY;
    for (int N = 1; N <= 4; ++N) {
      const double e = e_moment_exact(example1(N), kind, 51).value;
      EXPECT_LE(e, prev);
      prev = e;
    }
    prev = INFINITY;
    for (int N = 2; N <= 4; ++N) {
      const double e = e_moment_consecutive(example2(N), kind, 51).value;
      EXPECT_LE(e, prev);
      prev = e;
    }
  }
}

TEST(Errors, CurveDistanceIsSimpsonOfAbsoluteDifference)
{
  const std::vector<Moments> a = { { 0.1, 0 }, { 0.2, 0 }, { 0.4, 0 } };
  const std::vector<Moments> b = { { 0.0, 0 }, { 0.3, 0 }, { 0.1, 0 } };
  EXPECT_NEAR(moment_curve_distance(a, b, MomentKind::Mean, 0.5), 0.5 / 3.0 * (0.1 + 4 * 0.1 + 0.3), 1e-15);
  EXPECT_THROW(moment_curve_distance(a, { { 0, 0 } }, MomentKind::Mean, 0.5), DomainError);
}
