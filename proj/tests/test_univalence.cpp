#include <gtest/gtest.h>

#include "harmap/catalog.hpp"
#include "harmap/univalence.hpp"

using namespace harmap;

namespace {

HarmonicMap poly(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  return HarmonicMap(CoeffStream::from_complex(a), CoeffStream::from_complex(b));
}

}  // namespace

TEST(Orientation, SignOfJacobianAtOrigin) {
  EXPECT_EQ(sense_preserving_at_origin(poly({0, 1}, {0, 0.5})), Orientation::preserving);
  EXPECT_EQ(sense_preserving_at_origin(poly({0, 0.5}, {0, 1})), Orientation::reversing);
  EXPECT_EQ(sense_preserving_at_origin(poly({0, 1}, {0, {0, 1}})), Orientation::degenerate);
}

TEST(CoefficientTest, PolynomialMargins) {
  // 1 - 0.2 - 2*0.1 - 3*0.1 = 0.3
  const CoefficientTestResult r = coefficient_univalence_test(poly({0, 1, 0.1, 0.1}, {0, 0.2}), 10);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 0.3, 1e-14);
  EXPECT_EQ(r.tail_bound, 0.0);
  const CoefficientTestResult bad = coefficient_univalence_test(poly({0, 1, 0.5}, {0, 0.2}), 10);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.inconclusive);
}

TEST(CoefficientTest, InfiniteSeriesUsesTailEstimate) {
  // h = z + sum_{n>=2} z^n / (n 4^n): sum n|a_n| = (1/16)/(1 - 1/4) = 1/12
  const CoeffStream h = CoeffStream::generated(
      [](std::size_t n) {
        if (n == 0) return ScaledComplex::zero();
        if (n == 1) return ScaledComplex::one();
        return ScaledComplex::from_log(-std::log(static_cast<double>(n)) - static_cast<double>(n) * std::log(4.0));
      },
      CoeffStream::kUnbounded, "h");
  const CoefficientTestResult r = coefficient_univalence_test(HarmonicMap::analytic(h), 40);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 1.0 - 1.0 / 12.0, 1e-12);
  EXPECT_GT(r.tail_bound, 0.0);
  EXPECT_LT(r.tail_bound, 1e-20);
}

TEST(LowerRadius, ExponentialIsLogTwo) {
  const LowerRadius r = univalence_radius_lower(HarmonicMap::analytic(exp_minus_one_stream()));
  EXPECT_NEAR(r.radius, std::log(2.0), 1e-10);
  EXPECT_FALSE(r.unbounded);
}

TEST(LowerRadius, AffineExponentialClosedForm) {
  // (1 + 0.3)(e^r - 1) = 1 - 0.3
  const LowerRadius r = univalence_radius_lower(affine_combine(exp_minus_one_stream(), 0.3));
  EXPECT_NEAR(r.radius, 0.430782916092454257, 1e-10);
}

TEST(LowerRadius, BesselFrozen) {
  // root of sum_{n>=2} n r^{n-1} / (4^{n-1} ((n-1)!)^2) = 1, 30-digit reference
  const LowerRadius r = univalence_radius_lower(catalog_map("bessel_f").map);
  EXPECT_NEAR(r.radius, 1.70845586087766698, 1e-9);
}

TEST(LowerRadius, LinearMapIsUnbounded) {
  AnalysisConfig cfg;
  cfg.radius_cap = 64.0;
  const LowerRadius r = univalence_radius_lower(poly({0, 1}, {0, 0.5}), cfg);
  EXPECT_TRUE(r.unbounded);
  EXPECT_EQ(r.radius, 64.0);
}

TEST(LowerRadius, PolynomialClosedForm) {
  // 2|b_2| r = 1 - |b_1|  ->  r = 0.8 / 1
  EXPECT_NEAR(univalence_radius_lower(poly({0, 1}, {0, 0.2, 0.5})).radius, 0.8, 1e-11);
}

TEST(UpperRadius, JacobianZeroForZPlusConjZSquared) {
  const UpperRadius up = univalence_radius_upper(poly({0, 1}, {0, 0, 1}), 4.0, 64);
  EXPECT_EQ(up.method, UpperMethod::jacobian_zero);
  EXPECT_NEAR(up.radius, 0.5, 1e-3);
  const auto* w = std::get_if<JacobianWitness>(&up.witness);
  ASSERT_NE(w, nullptr);
  EXPECT_LT(std::fabs(w->jacobian), 1e-6);
}

TEST(UpperRadius, CollisionForExponential) {
  // e^z identifies z and z + 2 pi i: collision at |z| = pi
  const UpperRadius up = univalence_radius_upper(HarmonicMap::analytic(exp_minus_one_stream()), 5.0, 48);
  EXPECT_EQ(up.method, UpperMethod::collision);
  EXPECT_NEAR(up.radius, std::numbers::pi, 1e-3);
  const auto* w = std::get_if<CollisionWitness>(&up.witness);
  ASSERT_NE(w, nullptr);
  EXPECT_GT(std::abs(w->z1 - w->z2), 1.0);
}

TEST(UpperRadius, NoneFoundForStarlikePolynomial) {
  const UpperRadius up = univalence_radius_upper(poly({0, 1, 0.1}, {}), 2.0, 24);
  EXPECT_EQ(up.method, UpperMethod::none_found);
  EXPECT_TRUE(std::isinf(up.radius));
}

TEST(UpperRadius, DegenerateOrigin) {
  const UpperRadius up = univalence_radius_upper(poly({0, 0, 1}, {}), 2.0, 24);
  EXPECT_EQ(up.radius, 0.0);
  EXPECT_EQ(up.method, UpperMethod::jacobian_zero);
}

TEST(Certificate, IntervalIsOrdered) {
  for (const char* name : {"exp_affine", "example3", "bessel_f", "struve_h", "lommel_l"}) {
    const HarmonicMap f = catalog_map(name, {{"lambda", 0.2}}).map;
    for (std::size_t n : {0u, 2u}) {
      const UnivalenceCertificate c = radius_certificate(f, n);
      EXPECT_LE(c.r_lower, c.r_upper) << name << " " << n;
      EXPECT_GT(c.r_lower, 0.0);
    }
  }
}

TEST(Certificate, ZPlusConjZSquared) {
  const UnivalenceCertificate c = radius_certificate(poly({0, 1}, {0, 0, 1}), 0);
  EXPECT_NEAR(c.r_lower, 0.5, 1e-9);
  EXPECT_NEAR(c.r_upper, 0.5, 1e-3);
  EXPECT_EQ(c.upper_method, UpperMethod::jacobian_zero);
}

TEST(Certificate, ReversingMapIsConjugated) {
  const UnivalenceCertificate c = radius_certificate(poly({0, 0.2}, {0, 1}), 0);
  EXPECT_TRUE(c.conjugated);
  EXPECT_FALSE(c.degenerate);
  EXPECT_GT(c.r_lower, 1.0);
}

TEST(Certificate, DegenerateDerivative) {
  const UnivalenceCertificate c = radius_certificate(poly({0, 1, 1}, {0, 0, {0, 1}}), 1);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.r_lower, 0.0);
  EXPECT_EQ(c.r_upper, 0.0);
}

TEST(Certificate, OzakiPathForAffineExponential) {
  AnalysisConfig cfg;
  cfg.scan_upper = false;
  for (std::size_t n = 0; n <= 8; ++n) {
    const UnivalenceCertificate c = radius_certificate(catalog_map("exp_affine", {{"lambda", 0.5}}).map, n, cfg);
    EXPECT_EQ(c.r_lower, 1.0);
    EXPECT_EQ(c.lower_method, LowerMethod::ozaki_affine);
  }
}

TEST(Ozaki, ExampleThreeTelescopes) {
  const HarmonicMap F = normalized_shifted_derivative(HarmonicMap::analytic(example3_stream()), 0);
  const OzakiResult r = ozaki_close_to_convex_check(F.h(), 60);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.telescoped_sum, 1.0, 1e-12);
}

TEST(Ozaki, FailureAndNotApplicable) {
  const OzakiResult r = ozaki_close_to_convex_check(CoeffStream::from_complex({0, 1, 0.1, 0.5}), 10);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_increase, 3u);
  EXPECT_THROW(ozaki_close_to_convex_check(CoeffStream::from_complex({0, 1, -0.1}), 5), NotApplicableError);
  EXPECT_THROW(ozaki_close_to_convex_check(CoeffStream::from_complex({0, 1, {0, 0.1}}), 5), NotApplicableError);
  EXPECT_THROW(ozaki_close_to_convex_check(CoeffStream::from_complex({0, 2}), 5), NotApplicableError);
}

TEST(BoundChain, GammaForAffineExponential) {
  for (std::complex<double> lambda : {std::complex<double>(0.0), {0.3, 0.0}, {0.0, 0.9}}) {
    const HarmonicMap f = catalog_map("exp_affine", {{"lambda", lambda}}).map;
    for (std::size_t N : {2u, 5u, 30u}) EXPECT_NEAR(gamma_empirical(f, N), 0.5, 1e-12);
    for (const auto& row : coeff_growth_bound_check(f, 0.5, 40)) {
      EXPECT_TRUE(row.ok);
      EXPECT_NEAR(row.slack_a, 0.0, 1e-9);
    }
    for (const auto& row : exponential_type_bound_check(f, 0.5, {0.5, 1, 2, 5, 10}, 512, 60)) {
      EXPECT_TRUE(row.ok) << row.r;
    }
  }
}

TEST(BoundChain, GrowthBoundDetectsViolation) {
  const auto rows = coeff_growth_bound_check(poly({0, 1, 5}, {}), 0.5, 3);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_FALSE(rows[1].ok);
}

TEST(Shc, MembershipBounds) {
  EXPECT_TRUE(shc_membership_check(catalog_map("example3").map, 30).pass);
  const ShcResult r = shc_membership_check(poly({0, 1, 3.1}, {0, 0, 0, 7.0}), 5);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.violations, (std::vector<std::size_t>{2, 3}));
}

TEST(RatioDelta, AffineMapHasConstantRatio) {
  const RatioDelta d = coefficient_ratio_delta(catalog_map("exp_affine", {{"lambda", 0.4}}).map, 5, 60);
  EXPECT_NEAR(d.delta, 0.4, 1e-12);
  EXPECT_NEAR(d.extrapolated, 0.4, 1e-9);
  EXPECT_EQ(d.direction, RatioDirection::g_over_h);
}
