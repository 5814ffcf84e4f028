#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/phase.hpp"
#include "shearmix/rng.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

namespace {

PhaseField deterministic_field(const ShearProfile& b, double t, std::size_t ny = 2048) {
  PhaseMoments m{t, std::vector<Complex>(b.bandwidth() + 1, Complex(t, 0.0)), 0.0, 0.0};
  return PhaseField(b, m, 0.0, 0, ny);
}

}  // namespace

TEST(Phase, DeterministicLimit) {
  const auto b = ShearProfile::cos_power(1);
  const auto path = sample_path(1, 10.0, 1000);
  const auto f = compute_phase_field(b, path, 0.0, 10.0, 256);
  for (std::size_t j = 0; j < 256; ++j) {
    const double y = kTwoPi * j / 256;
    EXPECT_NEAR(f.s()[j], -10 * std::sin(y), 1e-12);
    EXPECT_NEAR(f.phi()[j], 10 * std::cos(y), 1e-12);
  }
}

TEST(Phase, EmptyIntegral) {
  const auto b = ShearProfile::cos_power(3);
  const auto path = sample_path(1, 1.0, 64, 1e-3);
  const auto f = compute_phase_field(b, path, 1e-3, 0.0, 64);
  for (std::size_t j = 0; j < 64; ++j) {
    EXPECT_EQ(f.phi()[j], 0.0);
    EXPECT_EQ(f.s()[j], 0.0);
  }
}

TEST(Phase, CoefficientFormIsNodewiseTrapezoid) {
  const auto b = ShearProfile::cos_power(3);
  const double nu = 1e-3;
  const auto path = sample_path(17, 50.0, 5000, nu);
  const auto f = compute_phase_field(b, path, nu, 37.3, 512);
  for (double y : {0.0, 0.4, 1.57, 3.0, 5.5}) {
    EXPECT_NEAR(f.phi_at(y), direct_phase_quadrature(b, path, nu, 37.3, y, 0), 1e-10);
    EXPECT_NEAR(f.s_at(y), direct_phase_quadrature(b, path, nu, 37.3, y, 1), 1e-10);
  }
  EXPECT_THROW(compute_phase_field(b, path, nu, 60.0, 512), InvalidArgument);
}

TEST(Phase, MeanShearMatchesCharacteristicFunction) {
  // E b'(y + sigma W_s) = -sin(y) e^{-nu s}, so E S_t = -sin(y) (1 - e^{-nu t}) / nu.
  const auto b = ShearProfile::cos_power(1);
  const double nu = 1e-4, t = 200.0, y = 1.1;
  constexpr std::size_t n = 4000;
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = sample_path(derive_seed(5, i), t, 400, nu);
    const auto mom = phase_moments(path, nu, 1, {t});
    const PhaseField f(b, mom[0], nu, 0, 16);
    const double s = f.s_at(y);
    m += s;
    m2 += s * s;
  }
  m /= n;
  const double se = std::sqrt((m2 / n - m * m) / n);
  const double expect = -std::sin(y) * (1 - std::exp(-nu * t)) / nu;
  EXPECT_NEAR(m, expect, 3 * se + 1e-9);
}

TEST(Phase, SublevelClosedForm) {
  const auto b = ShearProfile::cos_power(1);
  const auto f = deterministic_field(b, 100.0);
  const auto s = analyze_critical_structure(b);
  const auto r = sublevel_set(f, 0.1, 1, s, 0.3);
  EXPECT_NEAR(r.threshold, 1.0, 1e-14);
  EXPECT_NEAR(r.set_measure, 4 * std::asin(0.01), 1e-9);
  EXPECT_NEAR(r.measure, 0.04000, 1e-5);
  EXPECT_EQ(r.cover_count, 2);
  EXPECT_EQ(r.stray_components, 0);
}

TEST(Phase, SaturatedThresholdCoversTorus) {
  const auto b = ShearProfile::cos_power(1);
  const auto f = deterministic_field(b, 100.0, 256);
  const auto r = sublevel_set(f, 10.0 + 1e-9, 1);
  EXPECT_NEAR(r.measure, kTwoPi, 1e-12);
  EXPECT_TRUE(r.complement.empty());
}

TEST(Phase, InverseDerivativeClosedForm) {
  const auto b = ShearProfile::cos_power(1);
  const auto s = analyze_critical_structure(b);
  for (double t : {100.0, 1000.0, 10000.0}) {
    const auto f = deterministic_field(b, t);
    const auto r = sublevel_set(f, 0.1, 1, s, 0.3);
    const auto v = check_inverse_derivative_integral(f, r);
    // On each monotone piece of |t sin y| the variation of 1/S runs from 1/threshold down to 1/t.
    const double expect = 4.0 * (1.0 / r.threshold - 1.0 / t);
    EXPECT_FALSE(v.s_vanishes);
    EXPECT_NEAR(v.value, expect, 1e-9 * expect) << t;
    EXPECT_NEAR(inverse_derivative_quadrature(f, r), expect, 1e-3 * expect);
    EXPECT_LE(v.value * std::sqrt(t), 40.0);
  }
  const auto f = deterministic_field(b, 100.0);
  EXPECT_NEAR(check_inverse_derivative_integral(f, sublevel_set(f, 0.1, 1, s, 0.3)).value, 3.96, 1e-9);
}

TEST(Phase, ConstantShearHasNoVariation) {
  const auto f = PhaseField::synthetic({Complex(0.0)}, 5.0, 1.0, 64);
  const auto r = sublevel_set(f, 1.0, 1);
  EXPECT_EQ(r.measure, 0.0);
  EXPECT_NEAR(check_inverse_derivative_integral(f, r).value, 0.0, 1e-15);
}

TEST(Phase, ZeroCountsDeterministic) {
  const auto b1 = ShearProfile::cos_power(1);
  const auto z1 = count_zeros_near_critical_points(deterministic_field(b1, 50.0), analyze_critical_structure(b1), 0.2);
  ASSERT_EQ(z1.size(), 2u);
  for (const auto& z : z1) EXPECT_EQ(z.zeros_s, 1);

  const auto b3 = ShearProfile::cos_power(3);
  const auto s3 = analyze_critical_structure(b3);
  const auto z3 = count_zeros_near_critical_points(deterministic_field(b3, 50.0), s3, 0.2);
  ASSERT_EQ(z3.size(), 4u);
  for (const auto& z : z3) EXPECT_EQ(z.zeros_s, 1) << z.center;
}

TEST(Phase, SublevelMeasureDecaysOnGoodPaths) {
  const auto b = ShearProfile::cos_power(1);
  const auto s = analyze_critical_structure(b);
  const double nu = 1e-4;
  const auto params = GoodEventParams::midpoint(0.3, 1);
  const double tn = params.t_nu(nu);
  const std::size_t steps = phase_path_steps(tn);
  const auto good = find_good_paths(nu, params, 4, 3, steps);
  const auto times = dyadic_times(1.0, tn);
  for (auto seed : good.seeds) {
    const auto path = sample_path(seed, tn, steps, nu);
    NormSeries series;
    for (const auto& f : compute_phase_fields(b, path, nu, times)) {
      const auto r = sublevel_set(f, 0.1, 1, s, 0.3);
      EXPECT_LE(r.cover_count, 2);
      series.add(f.t(), r.measure);
    }
    EXPECT_NEAR(fit_decay_exponent(series, 1.0, tn).exponent, -0.5, 0.1);
  }
}
