#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/brownian.hpp"
#include "shearmix/error.hpp"
#include "shearmix/rng.hpp"

using namespace shearmix;

namespace {

// P(sup_{[0,T]} |W| < a) by the heat-kernel eigenfunction series.
double stay_probability(double a, double T) {
  double s = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double m = 2 * n + 1;
    s += (n % 2 ? -1.0 : 1.0) / m * std::exp(-m * m * kPi * kPi * T / (8 * a * a));
  }
  return 4.0 / kPi * s;
}

}  // namespace

TEST(Brownian, Deterministic) {
  const auto a = sample_path(42, 10.0, 500), b = sample_path(42, 10.0, 500);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.w[0], 0.0);
  EXPECT_EQ(a.b[0], 0.0);
  EXPECT_NE(sample_path(43, 10.0, 500).w, a.w);
}

TEST(Brownian, RejectsBadArguments) {
  EXPECT_THROW(sample_path(1, 1.0, 0), InvalidArgument);
  EXPECT_THROW(sample_path(1, 0.0, 10), InvalidArgument);
}

TEST(Brownian, AntitheticNegates) {
  const auto a = sample_path(5, 2.0, 64);
  const auto n = antithetic(a);
  for (std::size_t i = 0; i < a.w.size(); ++i) {
    EXPECT_EQ(n.w[i], -a.w[i]);
    EXPECT_EQ(n.b[i], -a.b[i]);
  }
}

TEST(Brownian, MomentsMatchGaussian) {
  constexpr std::size_t n = 100000;
  const double T = 3.0;
  double var = 0.0, cov = 0.0, cross = 0.0, v4 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = sample_path(derive_seed(99, i), T, 3);
    const double w1 = p.w[1], w3 = p.w[3];
    var += w3 * w3;
    v4 += w3 * w3 * w3 * w3;
    cov += w1 * w3;
    c2 += w1 * w1 * w3 * w3;
    cross += w3 * p.b[3];
  }
  var /= n;
  cov /= n;
  cross /= n;
  const double se_var = std::sqrt((v4 / n - var * var) / n);
  const double se_cov = std::sqrt((c2 / n - cov * cov) / n);
  EXPECT_NEAR(var, T, 3 * se_var);
  EXPECT_NEAR(cov, 1.0, 3 * se_cov);
  EXPECT_NEAR(cross, 0.0, 3 * T / std::sqrt(static_cast<double>(n)));
}

TEST(Brownian, GoodEventBoundaries) {
  const auto params = GoodEventParams::midpoint(0.3, 1);
  const auto p = sample_path(3, 1.0, 64);
  EXPECT_TRUE(classify_good_event(p, params, 0.0));
  const GoodEventParams zero{0.0, 0.75};
  const double nu = 0.5;
  const auto q = sample_path(3, zero.t_nu(nu), 64, nu);
  EXPECT_FALSE(classify_good_event(q, zero, nu));
  EXPECT_THROW(classify_good_event(sample_path(3, 1.0, 64, 1e-4), params, 1e-4), InvalidArgument);
}

TEST(Brownian, MidpointAndValidation) {
  EXPECT_NEAR(GoodEventParams::midpoint(0.3, 1).p, 0.75, 1e-15);
  EXPECT_NEAR(GoodEventParams::midpoint(0.3, 2).p, 0.8, 1e-15);
  EXPECT_THROW((GoodEventParams{0.3, 0.4}.validate(1)), InvalidArgument);
  EXPECT_THROW((GoodEventParams{0.3, 1.0}.validate(1)), InvalidArgument);
  EXPECT_NEAR((GoodEventParams{0.3, 0.8}.t_nu(1e-4)), std::pow(1e4, 0.8), 1e-9);
}

TEST(Brownian, StreamingAgreesWithStoredPath) {
  const GoodEventParams params{0.3, 0.8};
  const double nu = 1e-3;
  const double tn = params.t_nu(nu);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto p = sample_path(s, tn, 512, nu);
    double m = 0.0;
    for (double w : p.w) m = std::max(m, std::abs(w));
    EXPECT_EQ(running_sup_abs(s, tn, 512, tn, 1e300), m);
    EXPECT_EQ(good_event_streaming(s, tn, 512, params, nu), classify_good_event(p, params, nu));
  }
}

TEST(Brownian, ExitSeriesAgreesWithEigenSeries) {
  for (double T : {0.1, 0.5, 2.0, 10.0})
    EXPECT_NEAR(two_sided_exit_probability(1.0, T), 1.0 - stay_probability(1.0, T), 1e-10) << T;
}

TEST(Brownian, BadProbabilityInReflectionBracket) {
  const GoodEventParams params{0.3, 0.8};
  const auto r = verify_tail_bound(1e-4, params, 1, 10000, 7, 1024);
  EXPECT_TRUE(r.within_reflection_bracket) << r.empirical_p << " not in [" << r.reflection_lower << ", "
                                           << r.reflection_upper << "]";
  EXPECT_NEAR(r.reflection_lower, 2 * 0.5 * std::erfc(0.3 / std::sqrt(2e-4 * r.t_nu) / std::sqrt(2.0)), 1e-12);
}

TEST(Brownian, GaussianBoundDisplay) {
  const GoodEventParams params{0.3, 0.8};
  const auto r = verify_tail_bound(1e-3, params, 1, 10000, 7, 256);
  EXPECT_NEAR(r.gaussian_bound, 2.0 * std::exp(-0.09 / (8 * std::pow(1e-3, 0.2))), 1e-12);
}

TEST(Brownian, BadProbabilityMonotoneAndVanishing) {
  const auto curve = bad_probability_curve(1e-4, 0.8, {0.1, 0.2, 0.3, 0.5, 0.8}, 4000, 11, 512);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i], curve[i - 1]);
  const auto tiny = bad_probability_curve(1e-20, 0.8, {0.3}, 4000, 11, 512);
  EXPECT_EQ(tiny[0], 0.0);
}

TEST(Brownian, Nu0IsTheCrossing) {
  const GoodEventParams params{0.3, 0.8};
  const double nu0 = find_nu0(params, 1);
  ASSERT_GT(nu0, 0.0);
  ASSERT_LT(nu0, 1.0);
  auto gap = [&](double nu) {
    const double tn = params.t_nu(nu);
    return two_sided_exit_probability(0.3, 2 * nu * tn) - std::pow(tn, -0.5);
  };
  EXPECT_LE(gap(nu0), 0.0);
  EXPECT_GT(gap(nu0 * 1.01), 0.0);
}

TEST(Brownian, DeriveSeedIsCounterBased) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}
