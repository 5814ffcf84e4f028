#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/oscillatory.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

TEST(Oscillatory, BesselIntegral) {
  const auto b = ShearProfile::cos_power(1);
  const auto one = PeriodicFunction::one();
  for (double t : {0.5, 7.0, 40.0, 300.0}) {
    const auto q = deterministic_integral(b, 1, t, one, one);
    EXPECT_NEAR(q.value.real(), kTwoPi * std::cyl_bessel_j(0.0, t), 1e-10) << t;
    EXPECT_NEAR(q.value.imag(), 0.0, 1e-10);
    EXPECT_LT(q.cauchy_gap, 1e-8);
  }
}

TEST(Oscillatory, TrivialCases) {
  const auto b = ShearProfile::cos_power(3);
  const auto s = PeriodicFunction::sine();
  const auto one = PeriodicFunction::one();
  EXPECT_NEAR(std::abs(deterministic_integral(b, 2, 0.0, s, s).value - Complex(kPi)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(deterministic_integral(b, 1, 0.0, s, one).value), 0.0, 1e-12);
  const auto zero = one.scaled(0.0);
  EXPECT_EQ(std::abs(deterministic_integral(b, 1, 5.0, zero, one).value), 0.0);
}

TEST(Oscillatory, ZeroWavenumberRejected) {
  const auto b = ShearProfile::cos_power(1);
  const auto one = PeriodicFunction::one();
  EXPECT_THROW(deterministic_integral(b, 0, 1.0, one, one), InvalidArgument);
  IbpSweep sw;
  sw.ks = {1, 0};
  sw.times = {1.0};
  EXPECT_THROW(verify_lemma_ibp(b, 1, one, one, sw), InvalidArgument);
}

TEST(Oscillatory, StochasticMatchesDeterministicAtZeroViscosity) {
  const auto b = ShearProfile::cos_power(3);
  const auto path = sample_path(1, 20.0, 100);
  const auto field = compute_phase_field(b, path, 0.0, 20.0, 64);
  const auto F = PeriodicFunction::smoothed_sawtooth();
  const auto g = PeriodicFunction::bump();
  for (int k : {1, 3}) {
    const auto a = stochastic_integral(field, k, F, g).value;
    const auto d = deterministic_integral(b, k, 20.0, F, g).value;
    EXPECT_NEAR(std::abs(a - d), 0.0, 1e-8) << k;
  }
}

TEST(Oscillatory, RatioBoundedAtZeroViscosity) {
  const auto b = ShearProfile::cos_power(1);
  const auto one = PeriodicFunction::one();
  IbpSweep sw;
  sw.ks = {1, 2, 4, 8};
  sw.times = dyadic_times(1, 4096);
  const auto r = verify_lemma_ibp(b, 1, one, one, sw);
  // 2 pi |J0(kt)| sqrt(t) <= 2 pi sqrt(2 / (pi k)) asymptotically.
  EXPECT_LE(r.max_ratio, kTwoPi * std::sqrt(2 / kPi) * 1.05);
  EXPECT_GT(r.max_ratio, 2.0);
}

TEST(Oscillatory, RatioIsHomogeneous) {
  const auto b = ShearProfile::cos_power(1);
  const auto F = PeriodicFunction::sine();
  const auto g = PeriodicFunction::one();
  IbpSweep sw;
  sw.times = {4.0, 16.0, 64.0};
  const auto a = verify_lemma_ibp(b, 1, F, g, sw);
  const auto c = verify_lemma_ibp(b, 1, F.scaled(3.0), g, sw);
  ASSERT_EQ(a.rows.size(), c.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_NEAR(a.rows[i].ratio, c.rows[i].ratio, 1e-8);
}

TEST(Oscillatory, GoodPathSweepRuns) {
  const auto b = ShearProfile::cos_power(1);
  const auto one = PeriodicFunction::one();
  IbpSweep sw;
  sw.nu = 1e-3;
  sw.params = GoodEventParams::midpoint(0.3, 1);
  sw.times = dyadic_times(1, 128);
  sw.n_paths = 3;
  sw.master_seed = 2;
  sw.ks = {1, 2};
  sw.bound = 10.0;
  const auto r = verify_lemma_ibp(b, 1, one, one, sw);
  EXPECT_EQ(r.rows.size(), 3 * 8 * 2u);
  EXPECT_TRUE(r.pass) << r.max_ratio;
}

TEST(Oscillatory, FunctionNorms) {
  const auto s = PeriodicFunction::sine();
  EXPECT_NEAR(s.w11_norm(), 4 / kPi, 1e-6);
  EXPECT_NEAR(s.w1inf_norm(), 2.0, 1e-6);
  EXPECT_THROW(PeriodicFunction::by_name("nope"), InvalidArgument);
}
