#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shearmix/error.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

namespace {

ScalarField field(std::size_t nx, std::size_t ny, const std::function<double(double, double)>& f) {
  return ScalarField::sample(PeriodicGrid2D(nx, ny), f);
}

ModeField random_modes(std::size_t ny, int K, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  ModeField m(ny, K);
  for (int k = 1; k <= K; ++k) {
    std::vector<Complex> c(2 * band + 1);
    for (auto& v : c) v = Complex(z(rng), z(rng));
    auto p = m.activate(k);
    for (std::size_t j = 0; j < ny; ++j) {
      Complex s{};
      for (int l = -band; l <= band; ++l) s += c[l + band] * std::polar(1.0, l * kTwoPi * j / ny);
      p[j] = s;
    }
    auto q = m.activate(-k);
    for (std::size_t j = 0; j < ny; ++j) q[j] = std::conj(p[j]);
  }
  return m;
}

}  // namespace

TEST(Norms, HMinusOne) {
  EXPECT_NEAR(h_minus1(field(8, 8, [](double x, double) { return std::cos(x); })), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(h_minus1(field(8, 8, [](double x, double y) { return std::cos(x) * std::sin(y); })),
              1 / (2 * std::sqrt(2.0)), 1e-14);
  EXPECT_EQ(h_minus1(field(8, 8, [](double, double) { return 0.0; })), 0.0);
  EXPECT_THROW(h_minus1(field(8, 8, [](double, double) { return 1.0; })), InvalidArgument);
}

TEST(Norms, L2kW11) {
  const auto f = field(8, 1024, [](double x, double y) { return std::cos(x) * std::sin(y); });
  EXPECT_NEAR(l2k_w11(f), std::sqrt(2.0) * 2 / kPi, 1e-5);
  EXPECT_EQ(l2k_w11(field(8, 8, [](double, double) { return 0.0; })), 0.0);
  const auto g = field(8, 1024, [](double, double y) { return std::sin(y); });
  EXPECT_NEAR(l2k_w11(g), 4 / kPi, 1e-5);
}

TEST(Norms, WMinusOneInfSurrogate) {
  for (int M : {1, 2, 4, 8}) {
    std::vector<Complex> h(256);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = std::sin(M * kTwoPi * j / 256);
    EXPECT_NEAR(wm1inf_profile(h), 1.0 / M, 1e-12) << M;
  }
  EXPECT_EQ(l2k_wm1inf_surrogate(field(8, 8, [](double, double) { return 0.0; })), 0.0);
}

TEST(Norms, WMinusOneOneSurrogate) {
  const auto f = field(8, 1024, [](double, double y) { return std::sin(y); });
  EXPECT_NEAR(linf_wm11_surrogate(f), 2 / kPi, 1e-5);
  const auto g = field(8, 1024, [](double x, double y) { return 3 * std::cos(x) * std::sin(y); });
  EXPECT_NEAR(linf_wm11_surrogate(g), 3 * 2 / kPi, 1e-5);
  EXPECT_EQ(linf_wm11_surrogate(field(8, 8, [](double, double) { return 0.0; })), 0.0);
}

TEST(Norms, OscillationGainSlope) {
  std::vector<double> lm, l1, l2v;
  for (int M : {1, 2, 4, 8, 16}) {
    const auto f = field(4, 1024, [M](double x, double y) { return std::cos(x) * std::sin(M * y); });
    lm.push_back(std::log(M));
    l1.push_back(std::log(l2k_wm1inf_surrogate(f)));
    l2v.push_back(std::log(linf_wm11_surrogate(f)));
  }
  for (std::size_t i = 1; i < lm.size(); ++i) {
    EXPECT_NEAR((l1[i] - l1[0]) / (lm[i] - lm[0]), -1.0, 1e-6);
    EXPECT_NEAR((l2v[i] - l2v[0]) / (lm[i] - lm[0]), -1.0, 1e-6);
  }
}

TEST(Norms, DualityBound) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_modes(128, 3, 4, rng);
    const auto g = random_modes(128, 3, 4, rng);
    EXPECT_LE(std::abs(pairing(f, g)), l2k_wm1inf_surrogate(f) * l2k_w11(g) * (1 + 1e-8));
  }
}

TEST(Norms, HMinusOneDominatesDualFamily) {
  // |<f, g>| <= |f|_{H^-1} |g|_{H^1}; sample unit-H^1 g built from random modes.
  std::mt19937_64 rng(8);
  const auto f = random_modes(64, 2, 3, rng);
  const double hm1 = h_minus1(f);
  double best = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_modes(64, 2, 3, rng);
    double h1 = 0.0;
    for (int k : g.active_wavenumbers()) {
      const auto d = spectral_derivative(g.mode(k));
      for (std::size_t j = 0; j < g.ny; ++j) h1 += (std::norm(g.mode(k)[j]) * (1 + k * k) + std::norm(d[j])) / g.ny;
    }
    best = std::max(best, std::abs(pairing(f, g)) / std::sqrt(h1));
  }
  EXPECT_LE(best, hm1 * (1 + 1e-10));
  EXPECT_GT(best, 0.05 * hm1);
}

TEST(Norms, LengthScale) {
  EXPECT_NEAR(length_scale(field(8, 8, [](double x, double) { return std::cos(x); })), 1.0, 1e-14);
  EXPECT_NEAR(length_scale(field(16, 8, [](double x, double) { return std::cos(4 * x); })), 0.25, 1e-14);
  const auto b = ShearProfile::cos_power(1);
  ModeField m(1024, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  for (double t : {1.0, 10.0, 50.0})
    EXPECT_NEAR(length_scale(exact_inviscid_modes(m, b, t)), 1 / std::sqrt(1 + t * t / 2), 1e-10) << t;
  EXPECT_THROW(length_scale(field(8, 8, [](double, double) { return 0.0; })), InvalidArgument);
}

TEST(Norms, EnclosingRadius) {
  std::vector<Complex> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(std::polar(2.0, 0.3 * i) + Complex(1, -1));
  pts.push_back(Complex(1.5, -0.5));
  EXPECT_NEAR(enclosing_radius(pts), 2.0, 1e-10);
  EXPECT_NEAR(enclosing_radius(std::vector<Complex>{{0, 0}, {2, 0}}), 1.0, 1e-14);
}

TEST(Norms, FitExactPowerLaw) {
  NormSeries s;
  for (double t : dyadic_times(1, 1024)) s.add(t, 3 / std::sqrt(t));
  const auto fit = fit_decay_exponent(s, 1, 1024);
  EXPECT_NEAR(fit.exponent, -0.5, 1e-12);
  EXPECT_NEAR(fit.constant, 3.0, 1e-10);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  NormSeries c;
  for (double t : dyadic_times(1, 64)) c.add(t, 2.0);
  EXPECT_NEAR(fit_decay_exponent(c, 1, 64).exponent, 0.0, 1e-14);
  NormSeries few;
  for (double t : dyadic_times(1, 8)) few.add(t, 1.0);
  EXPECT_THROW(fit_decay_exponent(few, 1, 8), InvalidArgument);
}

TEST(Norms, SeriesRejectsBadSamples) {
  NormSeries s;
  s.add(1.0, 1.0);
  EXPECT_THROW(s.add(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(s.add(2.0, -1.0), InvalidArgument);
}

TEST(Norms, CosXSinYHMinusOneDecays) {
  const auto b = ShearProfile::cos_power(1);
  ModeField m(4096, 1);
  for (int k : {-1, 1}) {
    auto p = m.activate(k);
    for (std::size_t j = 0; j < 4096; ++j) p[j] = 0.5 * std::sin(kTwoPi * j / 4096);
  }
  NormSeries s;
  for (double t : dyadic_times(16, 1024, 2)) s.add(t, h_minus1(exact_inviscid_modes(m, b, t)));
  // The datum vanishes at both critical points, which speeds decay to t^{-1}.
  EXPECT_NEAR(fit_decay_exponent(s, 16, 1024).exponent, -1.0, 0.05);
}
