#include <gtest/gtest.h>

#include <random>

#include "harmap/catalog.hpp"
#include "harmap/growth.hpp"

using namespace harmap;

TEST(Order, FRhoFamily) {
  for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const GrowthReport g = order_from_coeffs(HarmonicMap::analytic(f_rho_stream(rho)), 2, 2000);
    EXPECT_NEAR(g.extrapolated, rho, 1e-6 * rho) << rho;
    EXPECT_TRUE(g.converged);
    EXPECT_EQ(g.window_lo, 1000u);
    EXPECT_EQ(g.window_hi, 2000u);
  }
}

TEST(Order, ScalingInvariant) {
  const CoeffStream e = exp_minus_one_stream();
  const double base = order_from_coeffs(HarmonicMap::analytic(e), 2, 2000).extrapolated;
  for (double s : {1e-30, 1e-3, 7.0, 1e20}) {
    const CoeffStream scaled = e.scaled(ScaledComplex::from_real(s), "scaled");
    EXPECT_NEAR(order_from_coeffs(HarmonicMap::analytic(scaled), 2, 2000).extrapolated, base, 1e-3) << s;
  }
  EXPECT_NEAR(base, 1.0, 2e-3);
}

TEST(Order, PolynomialHasOrderZero) {
  const HarmonicMap f(CoeffStream::from_complex({0.0, 1.0, 2.0}), CoeffStream::from_complex({0.0, 0.0, 1.0}));
  const GrowthReport g = order_from_coeffs(f, 2, 100);
  EXPECT_EQ(g.extrapolated, 0.0);
  EXPECT_FALSE(g.note.empty());
}

TEST(Order, BadWindow) {
  const HarmonicMap f = HarmonicMap::analytic(f_rho_stream(1.0));
  EXPECT_THROW(order_from_coeffs(f, 1, 100), DomainError);
  EXPECT_THROW(order_from_coeffs(f, 50, 50), DomainError);
}

TEST(Order, HarmonicSumTakesLargerOrder) {
  const HarmonicMap f(f_rho_stream(2.0), f_rho_stream(0.5).with_coeff(0, ScaledComplex::zero(), "g"));
  EXPECT_NEAR(order_from_coeffs(f, 2, 2000).extrapolated, 2.0, 0.02);
  const HarmonicMap f2(f_rho_stream(0.5), f_rho_stream(3.0));
  EXPECT_NEAR(order_from_coeffs(f2, 2, 2000).extrapolated, 3.0, 0.03);
}

TEST(Type, FRhoSamplesAreExactlyOne) {
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    const GrowthReport t = type_from_coeffs(HarmonicMap::analytic(f_rho_stream(rho)), rho, 2, 2000);
    for (const auto& s : t.samples) ASSERT_NEAR(s.value, 1.0, 1e-10) << rho << " n=" << s.n;
    EXPECT_NEAR(t.extrapolated, 1.0, 1e-10);
  }
}

TEST(Type, ExponentialHasTypeOne) {
  const GrowthReport t = type_from_coeffs(HarmonicMap::analytic(exp_minus_one_stream()), 1.0, 2, 2000);
  EXPECT_NEAR(t.extrapolated, 1.0, 1e-3);
}

TEST(MaxModulus, FRhoAsymptoticAtFifty) {
  const HarmonicMap f = HarmonicMap::analytic(f_rho_stream(1.0));
  const double lm = max_modulus(f, 50.0, 1024, suggest_terms(f, 50.0).n);
  // 30-digit direct summation: log M(50) = 52.87410813472086
  EXPECT_NEAR(lm, 52.874108134720860, 1e-10);
}

TEST(MaxModulus, ExponentialIsAttainedOnPositiveAxis) {
  const HarmonicMap f = affine_combine(exp_minus_one_stream(), 0.5);
  const MaxModulus mm = max_modulus_detail(f, 3.0, 256, 80);
  EXPECT_NEAR(mm.log_m, std::log(1.5 * std::expm1(3.0)), 1e-12);
  EXPECT_EQ(mm.theta, 0.0);
  EXPECT_THROW(max_modulus(f, 3.0, 100, 80), DomainError);
}

TEST(MaxModulus, RefinementIsMonotone) {
  const HarmonicMap f(CoeffStream::from_complex({0.0, 1.0, {0.3, 0.7}}),
                      CoeffStream::from_complex({0.0, 0.0, 0.0, {0.1, -0.4}}));
  const MaxModulus coarse = max_modulus_detail(f, 1.7, 16, 10);
  const MaxModulus fine = max_modulus_refined(f, 1.7, 16, 10);
  EXPECT_GE(fine.log_m, coarse.log_m - 1e-15);
  EXPECT_GT(fine.n_theta, 16u);
}

TEST(EmpiricalOrder, TrendsToCoefficientOrder) {
  const HarmonicMap f = HarmonicMap::analytic(f_rho_stream(0.5));
  const EmpiricalOrder eo = empirical_order(f, {1e2, 1e3, 1e4}, 256);
  ASSERT_EQ(eo.points.size(), 3u);
  EXPECT_TRUE(eo.notes.empty());
  EXPECT_NEAR(eo.points.back().eta, 0.5, 0.025);
  EXPECT_LT(std::fabs(eo.points[2].eta - 0.5), std::fabs(eo.points[0].eta - 0.5));
  EXPECT_THROW(empirical_order(f, {0.5}, 256), DomainError);
  // F_2 at r = 10^4 peaks near n = 2 10^8: reported as truncated
  const EmpiricalOrder big = empirical_order(HarmonicMap::analytic(f_rho_stream(2.0)), {1e4}, 16);
  EXPECT_FALSE(big.notes.empty());
}

TEST(CauchyBound, HoldsForRandomPolynomials) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::complex<double>> a(8), b(8);
    for (int k = 0; k < 8; ++k) {
      a[k] = {nd(rng), nd(rng)};
      if (k) b[k] = {nd(rng), nd(rng)};
    }
    const HarmonicMap f(CoeffStream::from_complex(a), CoeffStream::from_complex(b));
    for (const auto& row : cauchy_pair_bound_check(f, 0.8, 10, 512)) EXPECT_TRUE(row.ok) << row.n;
  }
}

TEST(Recover, ExponentialCoefficients) {
  const HarmonicMap f = HarmonicMap::analytic(
      exp_minus_one_stream().with_coeff(0, ScaledComplex::one(), "exp"));
  const RecoveredCoefficients rc = recover_coefficients(map_sampler(f, 1.0, 60), 1.0, 20, 256);
  double fact = 1.0;
  for (std::size_t n = 0; n <= 20; ++n) {
    if (n) fact *= static_cast<double>(n);
    EXPECT_NEAR(std::abs(rc.a[n] - 1.0 / fact), 0.0, 1e-10) << n;
    EXPECT_NEAR(std::abs(rc.b[n]), 0.0, 1e-10) << n;
  }
}

TEST(Recover, HarmonicPolynomialExact) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<std::complex<double>> a(7), b(7);
  for (int k = 0; k < 7; ++k) {
    a[k] = {nd(rng), nd(rng)};
    if (k) b[k] = {nd(rng), nd(rng)};
  }
  const HarmonicMap f(CoeffStream::from_complex(a), CoeffStream::from_complex(b));
  const RecoveredCoefficients rc = recover_coefficients(map_sampler(f, 1.0, 6), 1.0, 10, 64);
  for (std::size_t n = 0; n <= 10; ++n) {
    const std::complex<double> ea = n < 7 ? a[n] : 0.0;
    const std::complex<double> eb = n < 7 ? b[n] : 0.0;
    EXPECT_LT(std::abs(rc.a[n] - ea), 1e-12);
    EXPECT_LT(std::abs(rc.b[n] - eb), 1e-12);
  }
  EXPECT_THROW(recover_coefficients(map_sampler(f, 1.0, 6), 1.0, 10, 30), DomainError);
  EXPECT_THROW(recover_coefficients(map_sampler(f, 1.0, 6), 1.0, 20, 64), DomainError);
}

TEST(ConvergenceRadii, EntireAndFinite) {
  const ConvergenceRadii e = convergence_radii(HarmonicMap::analytic(exp_minus_one_stream()), 1, 400);
  EXPECT_TRUE(std::isinf(e.r_h));
  EXPECT_TRUE(std::isinf(e.r_f));
  const CoeffStream geo = CoeffStream::generated(
      [](std::size_t n) { return ScaledComplex::from_log(static_cast<double>(n) * std::log(2.0)); },
      CoeffStream::kUnbounded, "2^n");
  const CoeffStream harm = CoeffStream::generated(
      [](std::size_t n) {
        return n == 0 ? ScaledComplex::zero() : ScaledComplex::from_log(-std::log(static_cast<double>(n)));
      },
      CoeffStream::kUnbounded, "1/n");
  const ConvergenceRadii r = convergence_radii(HarmonicMap(geo, harm), 1, 400);
  EXPECT_NEAR(r.r_h, 0.5, 1e-3);
  EXPECT_NEAR(r.r_g, 1.0, 1e-2);
  EXPECT_NEAR(r.r_f, 0.5, 1e-3);
}

TEST(OrderOfSum, Check) {
  EXPECT_TRUE(order_of_sum_check(1.0, 2.0, 2.01, 0.02));
  EXPECT_FALSE(order_of_sum_check(1.0, 2.0, 1.0, 0.02));
}
