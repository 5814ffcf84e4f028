#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/fkmc.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

TEST(FeynmanKac, FlowMapDeterministicLimit) {
  const auto b = ShearProfile::cos_power(1);
  const auto path = sample_path(1, 5.0, 100);
  const std::vector<std::pair<double, double>> pts{{0.3, 1.2}, {4.0, 5.5}, {6.0, 0.1}};
  for (const auto& s : sample_flow_map(b, path, 0.0, 5.0, pts)) {
    EXPECT_NEAR(s.out_x, wrap_angle(s.x - 5.0 * std::cos(s.y)), 1e-12);
    EXPECT_NEAR(s.out_y, s.y, 1e-15);
  }
  for (const auto& s : sample_flow_map(b, path, 0.0, 0.0, pts)) {
    EXPECT_NEAR(s.out_x, s.x, 1e-15);
    EXPECT_NEAR(s.out_y, s.y, 1e-15);
  }
}

TEST(FeynmanKac, SinglePathAtZeroViscosityIsExact) {
  const auto b = ShearProfile::cos_power(3);
  const PeriodicGrid2D g(16, 32);
  const auto f0 = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
  const auto est = estimate_solution(f0, b, 0.0, 6.0, 1, g);
  const auto exact = solve_exact_inviscid(f0, b, 6.0);
  for (std::size_t i = 0; i < f0.values.size(); ++i) EXPECT_NEAR(est.mean.values[i], exact.values[i], 1e-12);
}

TEST(FeynmanKac, RejectsTooFewPaths) {
  const auto b = ShearProfile::cos_power(1);
  const PeriodicGrid2D g(8, 8);
  const auto f0 = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
  EXPECT_THROW(estimate_solution(f0, b, 1e-3, 1.0, 1, g), InvalidArgument);
  EXPECT_THROW(estimate_solution(f0, b, 1e-3, 1.0, 3, g), InvalidArgument);
}

TEST(FeynmanKac, HeatSolutionWithinStandardErrors) {
  // f0 = cos y ignores the x-transport, so E f0(Phi_t) = e^{-nu t} cos y.
  const auto b = ShearProfile::cos_power(1);
  const PeriodicGrid2D g(4, 32);
  const auto f0 = ScalarField::sample(g, [](double, double y) { return std::cos(y); });
  MCOptions o;
  o.master_seed = 3;
  const auto est = estimate_solution(f0, b, 0.01, 10.0, 4000, g, o);
  std::size_t inside = 0;
  for (std::size_t iy = 0; iy < 32; ++iy)
    for (std::size_t ix = 0; ix < 4; ++ix) {
      const double expect = std::exp(-0.1) * std::cos(kTwoPi * iy / 32);
      const double gap = std::abs(est.mean.at(ix, iy) - expect);
      EXPECT_LE(gap, 5 * est.standard_error.at(ix, iy) + 1e-12);
      if (gap <= 3 * est.standard_error.at(ix, iy) + 1e-12) ++inside;
    }
  EXPECT_GE(inside, 120u);
}

TEST(FeynmanKac, MaximumPrinciple) {
  const auto b = ShearProfile::cos_power(1);
  const PeriodicGrid2D g(8, 16);
  const auto f0 = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
  const auto est = estimate_solution(f0, b, 1e-3, 8.0, 200, g);
  for (std::size_t i = 0; i < f0.values.size(); ++i)
    EXPECT_LE(std::abs(est.mean.values[i]), f0.sup_norm() + 3 * est.standard_error.values[i] + 1e-12);
}

TEST(FeynmanKac, StandardErrorScaling) {
  const auto b = ShearProfile::cos_power(1);
  const PeriodicGrid2D g(4, 4);
  const auto f0 = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
  std::vector<double> lx, ly;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto est = estimate_solution(f0, b, 1e-2, 8.0, n, g);
    double se = 0.0;
    for (double v : est.standard_error.values) se += v;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(se));
  }
  const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
  EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(FeynmanKac, MeasurePreservation) {
  const auto b = ShearProfile::cos_power(1);
  const auto path = sample_path(9, 8.0, 800, 1e-3);
  const auto r = measure_preservation_chi2(b, path, 1e-3, 8.0, 100000, 16, 21);
  EXPECT_EQ(r.dof, 255u);
  EXPECT_TRUE(r.pass) << r.statistic << " > " << r.quantile_999;
}

TEST(FeynmanKac, ChiSquareQuantile) {
  // Tabulated 99.9% point for 255 degrees of freedom is about 330.5.
  EXPECT_NEAR(chi2_quantile(255, 3.090232), 330.5, 0.5);
}
