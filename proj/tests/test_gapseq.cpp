#include <gtest/gtest.h>

#include "harmap/catalog.hpp"
#include "harmap/gapseq.hpp"

using namespace harmap;

namespace {

GapSequence make(std::size_t count, std::size_t (*f)(std::size_t), std::size_t first = 1) {
  std::vector<std::size_t> n;
  for (std::size_t p = first; p < first + count; ++p) n.push_back(f(p));
  return GapSequence(n);
}

}  // namespace

TEST(GapSequence, RejectsNonIncreasing) {
  EXPECT_THROW(GapSequence({1, 3, 3}), DomainError);
  EXPECT_THROW(gap_stats(GapSequence({1, 2}), 0.5), InsufficientDataError);
  EXPECT_THROW(gap_stats(GapSequence({1, 2, 3}), 0.0), DomainError);
}

TEST(GapStats, Linear) {
  const GapStats s = gap_stats(make(100, [](std::size_t p) { return p; }), 0.5);
  EXPECT_NEAR(s.lambda_tail, 50.0 / 51.0, 1e-15);
  EXPECT_EQ(s.gaplog_tail, 0.0);
  EXPECT_EQ(s.lambda_extrapolated, 1.0);
  for (double r : s.second_diff_ratios) EXPECT_EQ(r, 0.0);
}

TEST(GapStats, Geometric) {
  const GapStats s = gap_stats(make(20, [](std::size_t p) { return std::size_t{1} << p; }), 0.5);
  EXPECT_NEAR(s.lambda_tail, 0.5, 1e-15);
  EXPECT_NEAR(s.gaplog_tail, 0.95, 1e-14);
  for (double r : s.second_diff_ratios) EXPECT_NEAR(r, 1.0, 1e-15);
}

TEST(GapStats, Squares) {
  const GapStats s = gap_stats(make(100, [](std::size_t p) { return p * p; }), 0.5);
  // max over p = 51..100 of log(2p - 1) / log(p^2), attained at p = 51
  double expect = 0.0;
  for (int p = 51; p <= 100; ++p) expect = std::max(expect, std::log(2.0 * p - 1) / std::log(double(p) * p));
  EXPECT_NEAR(s.gaplog_tail, expect, 1e-14);
  EXPECT_NEAR(s.gaplog_tail, std::log(101.0) / std::log(2601.0), 1e-15);
  ASSERT_GE(s.second_diff_ratios.size(), 3u);
  EXPECT_NEAR(s.second_diff_ratios[0], 2.0, 1e-15);
  EXPECT_NEAR(s.second_diff_ratios[1], 0.5, 1e-15);
  EXPECT_NEAR(s.second_diff_ratios[2], 2.0 / 9.0, 1e-15);
}

TEST(GapStats, CeilFamiliesApproachOne) {
  for (double c : {1.5, 2.0, 3.7}) {
    double prev_lambda = 0.0;
    for (std::size_t len : {100u, 1000u, 10000u}) {
      std::vector<std::size_t> n;
      for (std::size_t p = 1; p <= len; ++p) n.push_back(static_cast<std::size_t>(std::ceil(c * double(p))));
      const GapStats s = gap_stats(GapSequence(n), 0.5);
      EXPECT_GE(s.lambda_tail, prev_lambda);
      prev_lambda = s.lambda_tail;
      EXPECT_LT(s.gaplog_tail, std::log(c + 1.0) / std::log(c * len / 2.0) + 1e-12);
    }
    EXPECT_GT(prev_lambda, 0.999);
  }
}

TEST(RfLowerBound, ClosedForms) {
  EXPECT_TRUE(std::isinf(rf_lower_bound(1.0)));
  EXPECT_EQ(rf_lower_bound(0.0), 1.0);
  EXPECT_EQ(rf_lower_bound(0.5), 4.0);
  EXPECT_THROW(rf_lower_bound(1.5), DomainError);
  EXPECT_THROW(rf_lower_bound(-0.1), DomainError);
}

TEST(RfLowerBound, ContinuousAndNondecreasing) {
  double prev = 1.0;
  for (int k = 1; k < 1000; ++k) {
    const double v = rf_lower_bound(k / 1000.0);
    EXPECT_GE(v, prev);
    const double x = k / 1000.0;
    EXPECT_LT(std::fabs(rf_lower_bound(x + 1e-9) - v), 1e-5 * v) << x;
    prev = v;
  }
  EXPECT_NEAR(rf_lower_bound(1e-9), 1.0, 1e-6);
  EXPECT_GT(rf_lower_bound(1.0 - 1e-9), 1e8);
}

TEST(RhoUpperBound, Values) {
  EXPECT_EQ(rho_upper_bound(0.0), 1.0);
  EXPECT_EQ(rho_upper_bound(0.5), 2.0);
  EXPECT_TRUE(std::isinf(rho_upper_bound(1.0)));
  EXPECT_THROW(rho_upper_bound(1.01), DomainError);
  for (int k = 1; k < 1000; ++k) EXPECT_GT(rho_upper_bound(k / 1000.0), rho_upper_bound((k - 1) / 1000.0));
}

TEST(ExpTypeBound, Values) {
  EXPECT_NEAR(exp_type_bound(0), 0.353668657429258504, 1e-15);
  EXPECT_EQ(exp_type_bound(1) / exp_type_bound(0), std::pow(2.0, 4.5));
  EXPECT_NEAR(exp_type_bound(3), 0.353668657429258504 * 512.0, 1e-12);
}

TEST(Stirling, BracketsFactorial) {
  double lf = 0.0;
  for (std::size_t n = 1; n <= 10000; ++n) {
    lf += std::log(static_cast<double>(n));
    const StirlingBounds b = stirling_sandwich(n);
    EXPECT_LT(b.lower, lf) << n;
    if (n >= 2) EXPECT_GT(b.upper, lf) << n;
  }
  EXPECT_LT(stirling_sandwich(1).upper, 0.0);
  EXPECT_NEAR(stirling_sandwich(10).lower, std::log(3.5986956e6), 1e-6);
}

TEST(SecondDifference, Report) {
  const auto rows = second_difference_report(GapSequence({1, 2, 4, 8, 16}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].p, 1u);
  for (const auto& r : rows) EXPECT_EQ(r.ratio, 1.0);
}

TEST(GapAnalysis, AffineExponential) {
  const GapAnalysis g = univalent_gap_analysis(catalog_map("exp_affine", {{"lambda", 0.3}}).map, 12);
  EXPECT_EQ(g.seq.size(), 13u);
  EXPECT_FALSE(g.inconclusive);
  EXPECT_TRUE(std::isinf(g.rf_bound));
  EXPECT_EQ(g.rho_bound, 1.0);
  EXPECT_GT(g.stats.lambda_tail, 0.8);
}

TEST(GapAnalysis, ExampleThree) {
  const GapAnalysis g = univalent_gap_analysis(catalog_map("example3").map, 8);
  EXPECT_EQ(g.seq.values(), (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_TRUE(std::isinf(g.rf_bound));
}

TEST(GapAnalysis, QuadraticPolynomialIsInconclusive) {
  const HarmonicMap f(CoeffStream::from_complex({0, 1, 0.2}), CoeffStream::from_complex({0, 0.1, 0.1}));
  const GapAnalysis g = univalent_gap_analysis(f, 6);
  EXPECT_TRUE(g.inconclusive);
  EXPECT_LT(g.seq.size(), 3u);
  EXPECT_THROW(univalent_gap_analysis(f, 2), DomainError);
}

TEST(GapAnalysis, DeterministicAcrossRuns) {
  const HarmonicMap f = catalog_map("bessel_f", {{"lambda", 0.1}}).map;
  const GapAnalysis a = univalent_gap_analysis(f, 10);
  const GapAnalysis b = univalent_gap_analysis(f, 10);
  ASSERT_EQ(a.candidates.size(), b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    EXPECT_EQ(a.candidates[i].n, i);
    EXPECT_EQ(a.candidates[i].r_lower, b.candidates[i].r_lower);
  }
}
