#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/dissipation.hpp"
#include "shearmix/error.hpp"

using namespace shearmix;

namespace {

ModeField cosx(std::size_t ny) {
  ModeField m(ny, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  return m;
}

}  // namespace

TEST(Dissipation, PureHeatHalfLife) {
  const auto zero = ShearProfile::fourier_series({}, 1);
  HalfLifeOptions o;
  o.ny = 16;
  EXPECT_NEAR(half_life(zero, 1e-2, cosx(16), std::exp(-1.0), o), 100.0, 1e-3);
}

TEST(Dissipation, RejectsBadArguments) {
  const auto b = ShearProfile::cos_power(1);
  HalfLifeOptions o;
  o.ny = 64;
  EXPECT_THROW(half_life(b, 0.0, cosx(64), 0.5, o), InvalidArgument);
  EXPECT_THROW(half_life(b, 1e-2, cosx(64), 1.5, o), InvalidArgument);
  ModeField mean(64, 0);
  for (auto& v : mean.activate(0)) v = 1.0;
  EXPECT_THROW(half_life(b, 1e-2, mean, 0.5, o), InvalidArgument);
}

TEST(Dissipation, HorizonExhaustion) {
  const auto zero = ShearProfile::fourier_series({}, 1);
  HalfLifeOptions o;
  o.ny = 16;
  o.horizon = 10.0;
  EXPECT_THROW(half_life(zero, 1e-2, cosx(16), std::exp(-1.0), o), NumericalError);
}

TEST(Dissipation, ShearAcceleratesDecayMonotonically) {
  const auto b = ShearProfile::cos_power(1);
  const auto sw = half_life_sweep(b, {1e-1, 3e-2, 1e-2}, cosx(512), 0.01);
  EXPECT_TRUE(sw.monotone);
  for (double h : sw.half_life) EXPECT_GT(h, 0.0);
  // Far below the heat time ln(100)/nu.
  EXPECT_LT(sw.half_life.back(), 0.2 * std::log(100.0) / 1e-2);
  EXPECT_LT(sw.slope, -0.3);
  EXPECT_GT(sw.slope, -1.0);
}

TEST(Dissipation, CrossoverExample) {
  const auto r = crossover_consistency(1e-4, 1, 0.8);
  const double tn = std::pow(1e4, 0.8);
  EXPECT_NEAR(r.times.front(), tn, 1e-9);
  EXPECT_NEAR(r.margin, 1e-2 * tn - std::log(tn), 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(std::exp(-1e-2 * tn), 1 / tn);
  EXPECT_NEAR(std::exp(-1e-2 * tn), 1.3e-7, 0.05e-7);
}

TEST(Dissipation, CrossoverMarginGrowsWithP) {
  double prev = -1e300;
  for (double p : {0.55, 0.7, 0.85, 0.99}) {
    const double m = crossover_consistency(1e-4, 1, p).margin;
    EXPECT_GT(m, prev) << p;
    prev = m;
  }
  EXPECT_NO_THROW(crossover_consistency(1e-4, 1, 0.5));
  EXPECT_THROW(crossover_consistency(1e-4, 1, 0.45), InvalidArgument);
}

TEST(Dissipation, LengthScaleFloor) {
  const auto b = ShearProfile::cos_power(1);
  const auto r = length_scale_floor(b, 1e-3, 0.75, cosx(1024));
  EXPECT_NEAR(r.window_lo, std::pow(1e3, 0.75), 1e-9);
  EXPECT_NEAR(r.window_hi, 4 * r.window_lo, 1e-9);
  EXPECT_GT(r.min_viscous, r.min_inviscid);
  EXPECT_TRUE(r.pass) << r.ratio;
}
