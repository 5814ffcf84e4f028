#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shearmix/error.hpp"
#include "shearmix/grid.hpp"

using namespace shearmix;

namespace {

std::vector<double> sampled(std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(kTwoPi * j / n);
  return v;
}

ScalarField random_band_limited(std::size_t nx, std::size_t ny, int band, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<TrigPolynomial2D::Term> terms;
  for (int k = -band; k <= band; ++k)
    for (int l = -band; l <= band; ++l)
      if (k > 0 || (k == 0 && l > 0)) {
        const Complex c(z(rng), z(rng));
        terms.push_back({k, l, c});
        terms.push_back({-k, -l, std::conj(c)});
      }
  const TrigPolynomial2D p(terms);
  return ScalarField::sample(PeriodicGrid2D(nx, ny), [&](double x, double y) { return p(x, y); });
}

}  // namespace

TEST(Grid, AnalyzeSingleMode) {
  const auto f = ScalarField::sample(PeriodicGrid2D(16, 32), [](double x, double) { return std::cos(x); });
  const auto m = analyze(f);
  for (int k = -m.max_wavenumber; k <= m.max_wavenumber; ++k) {
    if (!m.active(k)) continue;
    for (const auto& v : m.mode(k)) EXPECT_NEAR(std::abs(v - Complex(std::abs(k) == 1 ? 0.5 : 0.0)), 0.0, 1e-14);
  }
}

TEST(Grid, AnalyzeSeparable) {
  const auto f = ScalarField::sample(PeriodicGrid2D(16, 32),
                                     [](double x, double y) { return std::cos(x) * std::sin(y); });
  const auto m = analyze(f);
  for (int k : {-1, 1})
    for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(std::abs(m.mode(k)[j] - std::sin(kTwoPi * j / 32) / 2), 0.0, 1e-14);
}

TEST(Grid, RoundTripAndParseval) {
  const auto f = random_band_limited(16, 32, 5, 7);
  const auto m = analyze(f);
  const auto g = synthesize(m, 16);
  double err = 0.0, ref = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(f.values[i] - g.values[i]));
    ref = std::max(ref, std::abs(f.values[i]));
    energy += f.values[i] * f.values[i];
  }
  EXPECT_LT(err / ref, 1e-12);
  energy /= f.values.size();
  double modal = 0.0;
  for (int k : m.active_wavenumbers())
    for (const auto& v : m.mode(k)) modal += std::norm(v) / 32;
  EXPECT_NEAR(modal / energy, 1.0, 1e-10);
  EXPECT_LT(m.conjugate_symmetry_defect(), 1e-13);
}

TEST(Grid, NonFiniteRejected) {
  auto f = ScalarField::sample(PeriodicGrid2D(8, 8), [](double, double) { return 0.0; });
  f.values[3] = std::nan("");
  EXPECT_THROW(analyze(f), std::exception);
}

TEST(Grid, PrimitiveOfSine) {
  const auto h = sampled(64, [](double y) { return std::sin(y); });
  const auto H = periodic_primitive(h, Centering::MinMaxCenter);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(H[j], -std::cos(kTwoPi * j / 64), 1e-13);
}

TEST(Grid, PrimitiveOfZeroAndCos2y) {
  const std::vector<double> zero(32, 0.0);
  for (double v : periodic_primitive(zero, Centering::MeanZero)) EXPECT_EQ(v, 0.0);
  const auto h = sampled(32, [](double y) { return std::cos(2 * y); });
  const auto H = periodic_primitive(h, Centering::MeanZero);
  for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(H[j], std::sin(2 * kTwoPi * j / 32) / 2, 1e-14);
}

TEST(Grid, PrimitiveRejectsNonzeroMean) {
  const std::vector<double> one(32, 1.0);
  EXPECT_THROW(periodic_primitive(one, Centering::MeanZero), InvalidArgument);
}

TEST(Grid, PrimitiveThenDerivativeRecovers) {
  const auto h = sampled(128, [](double y) { return std::sin(3 * y) + 0.3 * std::cos(7 * y); });
  const auto d = spectral_derivative(periodic_primitive(h, Centering::MeanZero));
  for (std::size_t j = 0; j < h.size(); ++j) EXPECT_NEAR(d[j], h[j], 1e-12);
}

TEST(Grid, Quadrature) {
  EXPECT_NEAR(quadrature(std::vector<double>(16, 1.0)), kTwoPi, 1e-14);
  EXPECT_NEAR(quadrature(sampled(16, [](double y) { return std::sin(y) * std::sin(y); })), kPi, 1e-14);
  const double ref = kTwoPi * std::cyl_bessel_i(0.0, 1.0);
  EXPECT_NEAR(quadrature(sampled(32, [](double y) { return std::exp(std::cos(y)); })), ref, 1e-13);
  EXPECT_NEAR(ref, 7.95493, 1e-5);
}

TEST(Grid, ResampleIsExactForBandLimited) {
  std::vector<Complex> h(16);
  for (std::size_t j = 0; j < 16; ++j) h[j] = std::polar(1.0, 3 * kTwoPi * j / 16);
  const auto r = resample(h, 64);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(std::abs(r[j] - std::polar(1.0, 3 * kTwoPi * j / 64)), 0.0, 1e-13);
}

TEST(Grid, TrigPolynomialInterpolates) {
  const auto f = random_band_limited(16, 16, 3, 11);
  const auto p = TrigPolynomial2D::from_field(f);
  // Off-grid value against the 2D Fourier sum of the samples.
  const auto c = fourier2d(f);
  const double x = 0.37, y = 2.11;
  double direct = 0.0;
  for (std::size_t l = 0; l < 16; ++l)
    for (std::size_t k = 0; k < 16; ++k) {
      const int kk = k < 8 ? static_cast<int>(k) : static_cast<int>(k) - 16;
      const int ll = l < 8 ? static_cast<int>(l) : static_cast<int>(l) - 16;
      direct += std::real(c[l * 16 + k] * std::polar(1.0, kk * x + ll * y));
    }
  EXPECT_NEAR(p(x, y), direct, 1e-12);
  const double h = 1e-5;
  EXPECT_NEAR(p.d_dy(x, y), (p(x, y + h) - p(x, y - h)) / (2 * h), 1e-6);
  EXPECT_NEAR(p.d_dx(x, y), (p(x + h, y) - p(x - h, y)) / (2 * h), 1e-6);
}

TEST(Grid, GaussLegendreExactForPolynomials) {
  const auto gl = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 14);
  EXPECT_NEAR(s, 2.0 / 15.0, 1e-14);
}
