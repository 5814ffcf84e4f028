#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/shear.hpp"

using namespace shearmix;

TEST(Shear, CosineValues) {
  const auto b = ShearProfile::cos_power(1);
  EXPECT_NEAR(b.evaluate(0.0), 1.0, 1e-15);
  EXPECT_NEAR(b.evaluate(kPi / 2, 1), -1.0, 1e-15);
}

TEST(Shear, CubeDerivativesAtDegeneratePoint) {
  // cos^3 = (3 cos y + cos 3y) / 4, so b''' = (3 sin y + 27 sin 3y) / 4 = -6 at pi/2.
  const auto b = ShearProfile::cos_power(3);
  EXPECT_NEAR(b.evaluate(kPi / 2, 2), 0.0, 1e-13);
  EXPECT_NEAR(b.evaluate(kPi / 2, 3), -6.0, 1e-12);
}

TEST(Shear, OrderBeyondSupportThrows) {
  const auto b = ShearProfile::cos_power(1);
  EXPECT_NO_THROW(b.evaluate(0.3, 3));
  EXPECT_THROW(b.evaluate(0.3, 4), InvalidArgument);
}

TEST(Shear, FiniteDifferencesConverge) {
  for (int m : {1, 3, 5}) {
    const auto b = ShearProfile::cos_power(m);
    const int top = std::max(1, m - 1) + 1;
    for (int j = 0; j < top; ++j) {
      const double y = 0.7;
      auto err = [&](double h) {
        return std::abs((b.evaluate(y + h, j) - b.evaluate(y - h, j)) / (2 * h) - b.evaluate(y, j + 1));
      };
      const double e1 = err(1e-2), e2 = err(5e-3);
      EXPECT_NEAR(e1 / e2, 4.0, 0.1) << "m=" << m << " j=" << j;
    }
  }
}

TEST(Shear, CosPowerCriticalStructure) {
  for (int m = 1; m <= 6; ++m) {
    const auto b = ShearProfile::cos_power(m);
    const auto s = analyze_critical_structure(b);
    EXPECT_EQ(s.max_order, std::max(1, m - 1)) << m;
    if (m == 1) {
      ASSERT_EQ(s.count(), 2);
      EXPECT_NEAR(s.points[0], 0.0, 1e-10);
      EXPECT_NEAR(s.points[1], kPi, 1e-10);
      EXPECT_EQ(s.orders, (std::vector<int>{1, 1}));
      continue;
    }
    ASSERT_EQ(s.count(), 4) << m;
    const double expect[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.points[i], expect[i], 1e-6) << m;
    EXPECT_EQ(s.orders, (std::vector<int>{1, m - 1, 1, m - 1})) << m;
    EXPECT_NO_THROW(validate_critical_structure(b, s));
  }
}

TEST(Shear, FourierSeriesMatchesCosine) {
  const auto b = ShearProfile::fourier_series({{1, 1.0, 0.0}}, 1);
  const auto c = ShearProfile::cos_power(1);
  for (double y : {0.1, 1.0, 2.5, 5.9})
    for (int j = 0; j <= 2; ++j) EXPECT_NEAR(b.evaluate(y, j), c.evaluate(y, j), 1e-14);
  EXPECT_NEAR(b.sup_norm(0), 1.0, 1e-6);
}

TEST(Shear, DeclaredStructureMismatchThrows) {
  CriticalStructure wrong;
  wrong.points = {1.0, 4.0};
  wrong.orders = {1, 1};
  wrong.max_order = 1;
  const auto b = ShearProfile::fourier_series({{1, 1.0, 0.0}}, 1, wrong);
  EXPECT_THROW(validate_critical_structure(b, analyze_critical_structure(b)), InvalidArgument);
}

TEST(Shear, DeltaSeparation) {
  const auto s = analyze_critical_structure(ShearProfile::cos_power(3));
  EXPECT_NEAR(min_critical_separation(s), kPi / 2, 1e-6);
  EXPECT_NO_THROW(check_delta_separation(s, 0.3));
  EXPECT_THROW(check_delta_separation(s, 0.5), InvalidArgument);
}

TEST(Shear, TorusDistance) {
  EXPECT_NEAR(torus_distance(0.1, kTwoPi - 0.1), 0.2, 1e-14);
  EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-14);
}
