#include <gtest/gtest.h>

#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

namespace {

ModeField cosx_siny(std::size_t ny) {
  ModeField m(ny, 1);
  for (int k : {-1, 1}) {
    auto p = m.activate(k);
    for (std::size_t j = 0; j < ny; ++j) p[j] = 0.5 * std::sin(kTwoPi * j / ny);
  }
  return m;
}

double max_gap(const ModeField& a, const ModeField& b) {
  double e = 0.0;
  for (int k : a.active_wavenumbers())
    for (std::size_t j = 0; j < a.ny; ++j) e = std::max(e, std::abs(a.mode(k)[j] - b.mode(k)[j]));
  return e;
}

}  // namespace

TEST(Solver, InviscidIsCharacteristics) {
  const auto b = ShearProfile::cos_power(1);
  const auto f0 = ScalarField::sample(PeriodicGrid2D(16, 64), [](double x, double) { return std::cos(x); });
  const double t = 7.3;
  const auto f = solve_exact_inviscid(f0, b, t);
  for (std::size_t iy = 0; iy < 64; iy += 5)
    for (std::size_t ix = 0; ix < 16; ix += 3) {
      const double x = kTwoPi * ix / 16, y = kTwoPi * iy / 64;
      EXPECT_NEAR(f.at(ix, iy), std::cos(x - t * std::cos(y)), 1e-12);
    }
  const auto same = solve_exact_inviscid(f0, b, 0.0);
  for (std::size_t i = 0; i < f0.values.size(); ++i) EXPECT_NEAR(same.values[i], f0.values[i], 1e-15);
}

TEST(Solver, InviscidYAverageIsBessel) {
  const auto b = ShearProfile::cos_power(1);
  ModeField m(256, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  for (double t : {1.0, 5.0, 12.0}) {
    const auto e = exact_inviscid_modes(m, b, t);
    Complex mean{};
    for (const auto& v : e.mode(1)) mean += v;
    mean /= 256.0;
    // (1/2pi) int cos(x - t cos y) dy = cos(x) J0(t), so the k = 1 y-mean is J0(t)/2.
    EXPECT_NEAR(mean.real(), 0.5 * std::cyl_bessel_j(0.0, t), 1e-13);
    EXPECT_NEAR(mean.imag(), 0.0, 1e-13);
  }
}

TEST(Solver, HeatOnlyWhenModeIsXIndependent) {
  const auto b = ShearProfile::cos_power(1);
  ModeField m(64, 0);
  auto p = m.activate(0);
  for (std::size_t j = 0; j < 64; ++j) p[j] = std::cos(kTwoPi * j / 64);
  EvolutionConfig cfg;
  cfg.nu = 0.01;
  cfg.max_wavenumber = 0;
  cfg.ny = 64;
  cfg.sample_times = {10.0};
  cfg.require_mean_zero = false;
  const auto snaps = evolve_modes(m, b, cfg);
  ASSERT_EQ(snaps.size(), 1u);
  for (std::size_t j = 0; j < 64; ++j)
    EXPECT_NEAR(snaps[0].modes.mode(0)[j].real(), std::exp(-0.1) * std::cos(kTwoPi * j / 64), 1e-8);
}

TEST(Solver, ZeroViscosityMatchesExact) {
  const auto b = ShearProfile::cos_power(3);
  const auto m = cosx_siny(128);
  EvolutionConfig cfg;
  cfg.nu = 0.0;
  cfg.ny = 128;
  cfg.dt = 0.05;
  cfg.sample_times = {1.0, 4.0, 9.5};
  for (const auto& s : evolve_modes(m, b, cfg)) EXPECT_LT(max_gap(s.modes, exact_inviscid_modes(m, b, s.t)), 1e-10);
}

TEST(Solver, StrangIsSecondOrder) {
  const auto b = ShearProfile::cos_power(1);
  const auto m = cosx_siny(64);
  auto run = [&](double dt) {
    ModeEvolver ev(b, 1e-3, m, dt);
    ev.advance_to(1.0);
    return ev.state();
  };
  const auto a = run(0.1), c = run(0.05), d = run(0.025);
  const double ratio = max_gap(a, c) / max_gap(c, d);
  EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(Solver, DissipationAndSymmetry) {
  const auto b = ShearProfile::cos_power(1);
  const auto m = cosx_siny(128);
  ModeEvolver ev(b, 1e-3, m, 0.05);
  double prev = ev.l2_norm();
  for (double t : {1.0, 4.0, 16.0, 64.0}) {
    ev.advance_to(t);
    const double now = ev.l2_norm();
    EXPECT_LE(now, prev + 1e-12);
    prev = now;
    EXPECT_LT(ev.state().conjugate_symmetry_defect(), 1e-12);
  }
}

TEST(Solver, InviscidPreservesEachMode) {
  const auto b = ShearProfile::cos_power(1);
  const auto m = cosx_siny(128);
  ModeEvolver ev(b, 0.0, m, 0.05);
  const double n0 = ev.l2_norm();
  ev.advance_to(30.0);
  EXPECT_NEAR(ev.l2_norm(), n0, 1e-13);
}

TEST(Solver, PhysicalFieldStaysMeanZeroAndBounded) {
  const auto b = ShearProfile::cos_power(1);
  const auto f0 = ScalarField::sample(PeriodicGrid2D(8, 64),
                                      [](double x, double y) { return std::cos(x) * std::sin(y); });
  EvolutionConfig cfg;
  cfg.nu = 1e-3;
  cfg.ny = 64;
  cfg.sample_times = {2.0, 8.0};
  for (const auto& [t, f] : solve_viscous(f0, b, cfg)) {
    EXPECT_LT(f.max_row_mean(), 1e-10);
    EXPECT_LE(f.sup_norm(), f0.sup_norm() + 1e-6);
  }
}

TEST(Solver, RejectsBadInput) {
  const auto b = ShearProfile::cos_power(1);
  const auto m = cosx_siny(32);
  EXPECT_THROW(ModeEvolver(b, 0.0, m, 0.0), InvalidArgument);
  EvolutionConfig cfg;
  cfg.ny = 32;
  cfg.sample_times = {2.0};
  cfg.horizon = 1.0;
  EXPECT_THROW(evolve_modes(m, b, cfg), InvalidArgument);
}

TEST(Solver, DyadicTimes) {
  EXPECT_EQ(dyadic_times(1, 8), (std::vector<double>{1, 2, 4, 8}));
  const auto t = dyadic_times(16, 64, 2);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_NEAR(t[1], 16 * std::sqrt(2.0), 1e-12);
}
