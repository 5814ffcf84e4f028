#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "shearmix/fft.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

struct PeriodicGrid1D {
  std::size_t n = 0;

  explicit PeriodicGrid1D(std::size_t n_points);
  double spacing() const { return kTwoPi / static_cast<double>(n); }
  double node(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(n); }
  std::vector<double> nodes() const;
};

struct PeriodicGrid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;

  PeriodicGrid2D(std::size_t n_x, std::size_t n_y);
  PeriodicGrid1D x() const { return PeriodicGrid1D(nx); }
  PeriodicGrid1D y() const { return PeriodicGrid1D(ny); }
};

// Real field on T^2, row-major in y: values[iy * nx + ix].
struct ScalarField {
  PeriodicGrid2D grid;
  std::vector<double> values;

  explicit ScalarField(PeriodicGrid2D g);
  static ScalarField sample(PeriodicGrid2D g, const std::function<double(double, double)>& f);

  double& at(std::size_t ix, std::size_t iy) { return values[iy * grid.nx + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
  double sup_norm() const;
  // Largest |x-mean| over rows.
  double max_row_mean() const;
};

// Per-x-wavenumber complex profiles f_k(y), k in [-K, K]. A mode with an
// empty profile is identically zero, which keeps single-mode data cheap.
struct ModeField {
  std::size_t ny = 0;
  int max_wavenumber = 0;
  std::vector<std::vector<Complex>> profiles;  // index k + K

  ModeField(std::size_t n_y, int K);

  bool active(int k) const { return !profiles[k + max_wavenumber].empty(); }
  std::span<const Complex> mode(int k) const { return profiles[k + max_wavenumber]; }
  std::vector<Complex>& mode_storage(int k) { return profiles[k + max_wavenumber]; }
  // Allocates (zero) storage for mode k if needed.
  std::span<Complex> activate(int k);
  std::vector<int> active_wavenumbers() const;
  // max_y |f_k - conj(f_{-k})| over all k.
  double conjugate_symmetry_defect() const;
};

// f_k(y) = (1/2pi) int e^{-ikx} f(x,y) dx, discretely.
// K < 0 selects the largest admissible K = nx/2 - 1.
ModeField analyze(const ScalarField& f, int K = -1);
ScalarField synthesize(const ModeField& m, std::size_t nx);

// Normalized 2D coefficients fhat[l_index * nx + k_index] in FFT order.
std::vector<Complex> fourier2d(const ScalarField& f);

enum class Centering { MinMaxCenter, MeanZero };

std::vector<double> periodic_primitive(std::span<const double> h, Centering centering);
// Complex primitive with zero mean (no centering rule applies).
std::vector<Complex> periodic_primitive(std::span<const Complex> h);

std::vector<double> spectral_derivative(std::span<const double> h, int order = 1);
std::vector<Complex> spectral_derivative(std::span<const Complex> h, int order = 1);

// Periodic rectangle rule with unnormalized dy: sum_j h_j * 2pi/n.
double quadrature(std::span<const double> h);
Complex quadrature(std::span<const Complex> h);

// Band-limited interpolation onto a grid of size m (zero padding or
// truncation in Fourier space).
std::vector<Complex> resample(std::span<const Complex> h, std::size_t m);

// Sparse trigonometric polynomial sum c_{k,l} e^{i(kx+ly)} for evaluation of
// band-limited data at scattered points.
class TrigPolynomial2D {
 public:
  struct Term {
    int k;
    int l;
    Complex c;
  };

  TrigPolynomial2D() = default;
  explicit TrigPolynomial2D(std::vector<Term> terms) : terms_(std::move(terms)) {}
  static TrigPolynomial2D from_field(const ScalarField& f, double rel_cutoff = 1e-13);

  double operator()(double x, double y) const;
  double d_dy(double x, double y) const;
  double d_dx(double x, double y) const;
  const std::vector<Term>& terms() const { return terms_; }
  // Fourier-x profile of mode k at arbitrary y.
  Complex mode(int k, double y) const;

 private:
  std::vector<Term> terms_;
};

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(std::size_t n);

}  // namespace shearmix
