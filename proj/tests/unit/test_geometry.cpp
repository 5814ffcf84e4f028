#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/geometry.hpp"

using namespace shearmix;

namespace {

PhaseField cosine_field(double t) {
  const auto b = ShearProfile::cos_power(1);
  PhaseMoments m{t, std::vector<Complex>(2, Complex(t, 0.0)), 0.0, 0.0};
  return PhaseField(b, m, 0.0, 0, 256);
}

const Interval kArc{kPi / 2 + 0.3, kPi - 0.3};

TrigPolynomial2D cosx_siny() {
  return TrigPolynomial2D({{1, 1, Complex(0, -0.25)}, {1, -1, Complex(0, 0.25)},
                           {-1, 1, Complex(0, -0.25)}, {-1, -1, Complex(0, 0.25)}});
}

}  // namespace

TEST(Geometry, CurveFollowsPhase) {
  const auto c = build_image_curve(cosine_field(100.0), 0.0, kArc);
  for (double y : {2.0, 2.4, 2.8}) EXPECT_NEAR(c.X(y), -100 * std::cos(y), 1e-10);
  const double range = 100 * (std::cos(kArc.lo) - std::cos(kArc.hi));
  EXPECT_NEAR(c.x_extent(), range, 1e-9);
  // X runs over (29.55, 95.53), which holds 11 multiples of 2pi, so 10 full windows.
  EXPECT_EQ(c.wraps(), static_cast<int>(std::floor(range / kTwoPi)));
  EXPECT_EQ(c.remainder().size(), 2u);
}

TEST(Geometry, InverseAndSlope) {
  const auto c = build_image_curve(cosine_field(100.0), 0.0, kArc);
  for (double x : {35.0, 60.0, 90.0}) {
    const double y = c.inverse(x);
    EXPECT_NEAR(c.X(y), x, 1e-10);
    EXPECT_NEAR(c.slope(x), -1.0 / (-100 * std::sin(y)), 1e-12);
    EXPECT_NEAR(c.interpolant_slope(x), c.slope(x), 1e-4 * std::abs(c.slope(x)));
  }
}

TEST(Geometry, SlopeLawAndJacobian) {
  const double t = 100.0;
  const auto c = build_image_curve(cosine_field(t), 0.0, kArc);
  const double min_s = t * std::sin(kArc.hi);
  // |S| = t sin y falls along the arc, so the steepest graph ends at the last cut.
  double y_end = 0.0;
  for (const auto& g : c.graphs()) y_end = std::max(y_end, g.y_hi);
  EXPECT_NEAR(c.max_slope(), 1 / (t * std::sin(y_end)), 1e-9);
  EXPECT_LE(c.max_slope(), 1 / min_s);
  EXPECT_LE(c.max_slope(), std::pow(t, -0.5));
  EXPECT_LE(jacobian_field(c).max(), 1 / std::sqrt(1 + min_s * min_s) * (1 + 1e-9));
  for (const auto& g : c.graphs()) EXPECT_LE(c.max_slope(g), c.max_slope() * (1 + 1e-12));
}

TEST(Geometry, SignChangeRejected) {
  EXPECT_THROW(build_image_curve(cosine_field(100.0), 0.0, Interval{2.5, 3.8}), InvalidArgument);
}

TEST(Geometry, LineIntegralWithinTaylorBound) {
  const auto c = build_image_curve(cosine_field(100.0), 0.0, kArc);
  const TrigPolynomial2D cosx({{1, 0, Complex(0.5)}, {-1, 0, Complex(0.5)}});
  const auto v = line_integral_mean_zero(c, cosx);
  ASSERT_EQ(v.size(), static_cast<std::size_t>(c.wraps()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double s = c.max_slope(c.graphs()[j]);
    EXPECT_LE(std::abs(v[j]), line_integral_taylor_bound(s, 0.0, 1.0)) << j;
  }
  const auto w = line_integral_mean_zero(c, cosx_siny());
  for (std::size_t j = 0; j < w.size(); ++j)
    EXPECT_LE(std::abs(w[j]), line_integral_taylor_bound(c.max_slope(c.graphs()[j]), 1.0, 1.0));
}

TEST(Geometry, TaylorBoundFormula) {
  EXPECT_NEAR(line_integral_taylor_bound(0.1, 2.0, 3.0), kPi * kPi * 0.2 + kPi * 0.03, 1e-14);
}

TEST(Geometry, ChangeOfVariablesMeasure) {
  const auto c = build_image_curve(cosine_field(100.0), 0.3, kArc);
  const TrigPolynomial2D one({{0, 0, Complex(1.0)}});
  const auto r = change_of_variables_check(c, one, PeriodicFunction::one());
  EXPECT_NEAR(r.lhs, kArc.length(), 1e-10);
  EXPECT_NEAR(r.rhs, kArc.length(), 1e-8);
  const auto z = change_of_variables_check(c, one, PeriodicFunction::one().scaled(0.0));
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
}

TEST(Geometry, ChangeOfVariablesAnalytic) {
  const auto c = build_image_curve(cosine_field(100.0), 1.1, kArc);
  const auto r = change_of_variables_check(c, cosx_siny(), PeriodicFunction::sine());
  EXPECT_LT(r.gap, 1e-6);
  const auto terms = graph_terms(c, cosx_siny(), PeriodicFunction::sine());
  EXPECT_NEAR(terms.total(), r.lhs, 1e-6);
}

TEST(Geometry, DynamicalSplitAddsUp) {
  const double t = 400.0;
  const auto field = cosine_field(t);
  const auto b = ShearProfile::cos_power(1);
  const auto rep = sublevel_set(field, 1.0, 1, analyze_critical_structure(b), 0.3);
  const auto d = dynamical_estimate(field, rep, 1, cosx_siny(), 1.0, PeriodicFunction::sine(), 0.4);
  EXPECT_NEAR(d.bad_part + d.good_part, d.total, 1e-6);
  EXPECT_EQ(d.per_interval.size(), rep.complement.size());
  EXPECT_GT(d.ratio, 0.0);
}
