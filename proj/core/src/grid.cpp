#include "shearmix/grid.hpp"

#include <algorithm>
#include <cmath>

#include "shearmix/error.hpp"

namespace shearmix {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + what);
}

void require_pow2(std::size_t n) {
  if (!is_power_of_two(n)) throw InvalidArgument("grid size must be a power of two, got " + std::to_string(n));
}

}  // namespace

PeriodicGrid1D::PeriodicGrid1D(std::size_t n_points) : n(n_points) { require_pow2(n); }

std::vector<double> PeriodicGrid1D::nodes() const {
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = node(j);
  return y;
}

PeriodicGrid2D::PeriodicGrid2D(std::size_t n_x, std::size_t n_y) : nx(n_x), ny(n_y) {
  require_pow2(nx);
  require_pow2(ny);
}

ScalarField::ScalarField(PeriodicGrid2D g) : grid(g), values(g.nx * g.ny, 0.0) {}

ScalarField ScalarField::sample(PeriodicGrid2D g, const std::function<double(double, double)>& f) {
  ScalarField s(g);
  const auto gx = g.x();
  const auto gy = g.y();
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) s.at(ix, iy) = f(gx.node(ix), gy.node(iy));
  return s;
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::max_row_mean() const {
  double worst = 0.0;
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < grid.nx; ++ix) s += at(ix, iy);
    worst = std::max(worst, std::abs(s / static_cast<double>(grid.nx)));
  }
  return worst;
}

ModeField::ModeField(std::size_t n_y, int K) : ny(n_y), max_wavenumber(K), profiles(2 * K + 1) {
  if (K < 0) throw InvalidArgument("max wavenumber must be >= 0");
}

std::span<Complex> ModeField::activate(int k) {
  auto& v = mode_storage(k);
  if (v.empty()) v.assign(ny, Complex{});
  return v;
}

std::vector<int> ModeField::active_wavenumbers() const {
  std::vector<int> ks;
  for (int k = -max_wavenumber; k <= max_wavenumber; ++k)
    if (active(k)) ks.push_back(k);
  return ks;
}

double ModeField::conjugate_symmetry_defect() const {
  double d = 0.0;
  for (int k = -max_wavenumber; k <= max_wavenumber; ++k) {
    auto a = mode(k);
    auto b = mode(-k);
    for (std::size_t j = 0; j < ny; ++j) {
      const Complex va = a.empty() ? Complex{} : a[j];
      const Complex vb = b.empty() ? Complex{} : b[j];
      d = std::max(d, std::abs(va - std::conj(vb)));
    }
  }
  return d;
}

ModeField analyze(const ScalarField& f, int K) {
  const std::size_t nx = f.grid.nx, ny = f.grid.ny;
  require_finite(f.values, "analyze input");
  if (K < 0) K = static_cast<int>(nx / 2) - 1;
  if (nx < static_cast<std::size_t>(2 * K + 2))
    throw InvalidArgument("analyze needs n_x >= 2K+2");
  ModeField out(ny, K);
  Fft1D fft(nx);
  std::vector<Complex> row(nx);
  std::vector<std::vector<Complex>> full(2 * K + 1, std::vector<Complex>(ny));
  double gmax = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) row[ix] = f.at(ix, iy);
    fft.forward(row);
    for (int k = -K; k <= K; ++k) {
      const std::size_t j = k >= 0 ? static_cast<std::size_t>(k) : nx - static_cast<std::size_t>(-k);
      const Complex c = row[j] / static_cast<double>(nx);
      full[k + K][iy] = c;
      gmax = std::max(gmax, std::abs(c));
    }
  }
  // Modes at round-off level are stored as exact zeros.
  const double cutoff = 1e-15 * gmax;
  for (int k = -K; k <= K; ++k) {
    auto& v = full[k + K];
    double m = 0.0;
    for (auto c : v) m = std::max(m, std::abs(c));
    if (m > cutoff && m > 0.0) out.mode_storage(k) = std::move(v);
  }
  return out;
}

ScalarField synthesize(const ModeField& m, std::size_t nx) {
  const int K = m.max_wavenumber;
  if (nx < static_cast<std::size_t>(2 * K + 2)) throw InvalidArgument("synthesize needs n_x >= 2K+2");
  ScalarField f(PeriodicGrid2D(nx, m.ny));
  Fft1D fft(nx);
  std::vector<Complex> row(nx);
  const auto ks = m.active_wavenumbers();
  for (std::size_t iy = 0; iy < m.ny; ++iy) {
    std::fill(row.begin(), row.end(), Complex{});
    for (int k : ks) {
      const std::size_t j = k >= 0 ? static_cast<std::size_t>(k) : nx - static_cast<std::size_t>(-k);
      row[j] = m.mode(k)[iy];
    }
    fft.inverse(row);
    for (std::size_t ix = 0; ix < nx; ++ix) f.at(ix, iy) = row[ix].real();
  }
  return f;
}

std::vector<Complex> fourier2d(const ScalarField& f) {
  const std::size_t nx = f.grid.nx, ny = f.grid.ny;
  require_finite(f.values, "fourier2d input");
  std::vector<Complex> a(nx * ny);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.values[i];
  Fft1D fx(nx), fy(ny);
  for (std::size_t iy = 0; iy < ny; ++iy) fx.forward(std::span<Complex>(a.data() + iy * nx, nx));
  std::vector<Complex> col(ny);
  const double scale = 1.0 / static_cast<double>(nx * ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) col[iy] = a[iy * nx + ix];
    fy.forward(col);
    for (std::size_t iy = 0; iy < ny; ++iy) a[iy * nx + ix] = col[iy] * scale;
  }
  return a;
}

namespace {

std::vector<Complex> to_complex(std::span<const double> h) { return {h.begin(), h.end()}; }

// Spectral primitive with the Nyquist and mean modes dropped.
std::vector<Complex> primitive_coeffs(std::vector<Complex> a) {
  const std::size_t n = a.size();
  Fft1D fft(n);
  fft.forward(a);
  for (std::size_t j = 0; j < n; ++j) {
    const long l = wavenumber(j, n);
    if (l == 0 || (n % 2 == 0 && j == n / 2)) {
      a[j] = 0.0;
    } else {
      a[j] /= Complex(0.0, static_cast<double>(l));
    }
  }
  fft.inverse(a);
  for (auto& v : a) v /= static_cast<double>(n);
  return a;
}

}  // namespace

std::vector<double> periodic_primitive(std::span<const double> h, Centering centering) {
  require_finite(h, "periodic_primitive input");
  if (h.empty()) return {};
  double sup = 0.0, sum = 0.0;
  for (double v : h) {
    sup = std::max(sup, std::abs(v));
    sum += v;
  }
  const double mean = sum / static_cast<double>(h.size());
  if (std::abs(mean) > 1e-8 * sup) throw InvalidArgument("periodic_primitive requires a mean-zero input");
  auto a = primitive_coeffs(to_complex(h));
  std::vector<double> out(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) out[j] = a[j].real();
  if (centering == Centering::MinMaxCenter) {
    const auto [mn, mx] = std::minmax_element(out.begin(), out.end());
    const double c = 0.5 * (*mn + *mx);
    for (auto& v : out) v -= c;
  }
  return out;
}

std::vector<Complex> periodic_primitive(std::span<const Complex> h) {
  if (h.empty()) return {};
  Complex sum{};
  double sup = 0.0;
  for (auto v : h) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite primitive input");
    sum += v;
    sup = std::max(sup, std::abs(v));
  }
  if (std::abs(sum) / static_cast<double>(h.size()) > 1e-8 * sup)
    throw InvalidArgument("periodic_primitive requires a mean-zero input");
  return primitive_coeffs({h.begin(), h.end()});
}

std::vector<Complex> spectral_derivative(std::span<const Complex> h, int order) {
  const std::size_t n = h.size();
  std::vector<Complex> a(h.begin(), h.end());
  if (n == 0 || order == 0) return a;
  Fft1D fft(n);
  fft.forward(a);
  for (std::size_t j = 0; j < n; ++j) {
    const long l = wavenumber(j, n);
    if (n % 2 == 0 && j == n / 2 && order % 2 == 1) {
      a[j] = 0.0;
      continue;
    }
    a[j] *= std::pow(Complex(0.0, static_cast<double>(l)), order);
  }
  fft.inverse(a);
  for (auto& v : a) v /= static_cast<double>(n);
  return a;
}

std::vector<double> spectral_derivative(std::span<const double> h, int order) {
  auto a = spectral_derivative(std::span<const Complex>(to_complex(h)), order);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j].real();
  return out;
}

double quadrature(std::span<const double> h) {
  require_finite(h, "quadrature input");
  double s = 0.0;
  for (double v : h) s += v;
  return s * kTwoPi / static_cast<double>(h.size());
}

Complex quadrature(std::span<const Complex> h) {
  Complex s{};
  for (auto v : h) s += v;
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw NumericalError("non-finite quadrature input");
  return s * (kTwoPi / static_cast<double>(h.size()));
}

std::vector<Complex> resample(std::span<const Complex> h, std::size_t m) {
  const std::size_t n = h.size();
  if (m == n) return {h.begin(), h.end()};
  std::vector<Complex> a(h.begin(), h.end());
  Fft1D fn(n), fm(m);
  fn.forward(a);
  std::vector<Complex> b(m);
  const long keep = static_cast<long>(std::min(n, m) / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const long l = wavenumber(j, n);
    if (l >= keep || l < -keep) continue;  // Nyquist of the smaller grid dropped
    const std::size_t jj = l >= 0 ? static_cast<std::size_t>(l) : m - static_cast<std::size_t>(-l);
    b[jj] = a[j] / static_cast<double>(n);
  }
  fm.inverse(b);
  return b;
}

TrigPolynomial2D TrigPolynomial2D::from_field(const ScalarField& f, double rel_cutoff) {
  const auto a = fourier2d(f);
  const std::size_t nx = f.grid.nx, ny = f.grid.ny;
  double mx = 0.0;
  for (auto c : a) mx = std::max(mx, std::abs(c));
  std::vector<Term> terms;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Complex c = a[iy * nx + ix];
      if (std::abs(c) <= rel_cutoff * mx || c == Complex{}) continue;
      const bool nyq = (ix == nx / 2) || (iy == ny / 2);
      if (nyq) continue;
      terms.push_back({static_cast<int>(wavenumber(ix, nx)), static_cast<int>(wavenumber(iy, ny)), c});
    }
  }
  return TrigPolynomial2D(std::move(terms));
}

double TrigPolynomial2D::operator()(double x, double y) const {
  double s = 0.0;
  for (const auto& t : terms_) s += (t.c * std::polar(1.0, t.k * x + t.l * y)).real();
  return s;
}

double TrigPolynomial2D::d_dy(double x, double y) const {
  double s = 0.0;
  for (const auto& t : terms_) s += (t.c * Complex(0, t.l) * std::polar(1.0, t.k * x + t.l * y)).real();
  return s;
}

double TrigPolynomial2D::d_dx(double x, double y) const {
  double s = 0.0;
  for (const auto& t : terms_) s += (t.c * Complex(0, t.k) * std::polar(1.0, t.k * x + t.l * y)).real();
  return s;
}

Complex TrigPolynomial2D::mode(int k, double y) const {
  Complex s{};
  for (const auto& t : terms_)
    if (t.k == k) s += t.c * std::polar(1.0, t.l * y);
  return s;
}

GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidArgument("Gauss-Legendre order must be positive");
  GaussLegendre g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

}  // namespace shearmix
