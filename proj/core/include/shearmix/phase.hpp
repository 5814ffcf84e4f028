#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "shearmix/brownian.hpp"
#include "shearmix/grid.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

// Path functionals E_n(t) = int_0^t e^{i n sigma W_s} ds (trapezoid on the
// path grid) for 0 <= n <= bandwidth; E_{-n} = conj(E_n).
struct PhaseMoments {
  double t = 0.0;
  std::vector<Complex> e;  // index n, 0..bandwidth
  double w_t = 0.0;        // W_t and B_t, unscaled
  double b_t = 0.0;
};

// One pass over the path, recording at each (increasing) time in `times`.
std::vector<PhaseMoments> phase_moments(const BrownianPath& path, double nu, int bandwidth,
                                        const std::vector<double>& times);

// phi_t and S_t = phi_t' for one path and time. Because b is a finite
// Fourier series, phi_t(y) = sum_n beta_n E_n(t) e^{iny}: the trapezoid rule
// applied at every node y collapses to these coefficients, so node values
// and off-grid evaluations are the same quadrature.
class PhaseField {
 public:
  PhaseField(const ShearProfile& b, const PhaseMoments& m, double nu, std::uint64_t path_seed,
             std::size_t ny = 2048);
  // Field with given phi coefficients (index n + band) plus a linear part
  // slope * y in phi; for synthetic tests.
  static PhaseField synthetic(std::vector<Complex> phi_coeffs, double slope, double t, std::size_t ny);

  std::size_t ny() const { return phi_.size(); }
  double t() const { return t_; }
  double nu() const { return nu_; }
  std::uint64_t path_seed() const { return seed_; }
  double sigma() const { return std::sqrt(2.0 * nu_); }
  double w_t() const { return w_t_; }
  double b_t() const { return b_t_; }
  int bandwidth() const { return band_; }

  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& s() const { return s_; }
  // Spectral derivative of the S grid.
  const std::vector<double>& ds() const { return ds_; }

  double phi_at(double y) const { return eval(y, 0) + slope_ * y; }
  double s_at(double y) const { return eval(y, 1) + slope_; }
  double ds_at(double y) const { return eval(y, 2); }
  double dds_at(double y) const { return eval(y, 3); }
  double max_abs_s() const;
  // phi on an arbitrary power-of-two grid (exact for the trig polynomial).
  std::vector<double> phi_grid(std::size_t n) const;
  const std::vector<Complex>& coefficients() const { return coeff_; }

 private:
  PhaseField() = default;
  double eval(double y, int order) const;
  void fill_grid(std::size_t ny);

  double t_ = 0.0;
  double nu_ = 0.0;
  std::uint64_t seed_ = 0;
  double w_t_ = 0.0;
  double b_t_ = 0.0;
  int band_ = 0;
  double slope_ = 0.0;
  std::vector<Complex> coeff_;  // phi coefficients, index n + band
  std::vector<double> phi_, s_, ds_;
};

PhaseField compute_phase_field(const ShearProfile& b, const BrownianPath& path, double nu, double t,
                               std::size_t ny = 2048);
std::vector<PhaseField> compute_phase_fields(const ShearProfile& b, const BrownianPath& path, double nu,
                                             const std::vector<double>& times, std::size_t ny = 2048);

// Direct node-wise trapezoid of int_0^t b^{(order)}(y + sigma W_s) ds, for
// cross-checking the coefficient form.
double direct_phase_quadrature(const ShearProfile& b, const BrownianPath& path, double nu, double t, double y,
                               int order);

struct Interval {
  double lo;  // lo in [0, 2pi); hi may exceed 2pi for a seam-crossing interval
  double hi;
  double length() const { return hi - lo; }
  bool contains(double y) const;
};

struct SublevelReport {
  double c = 0.0;
  double t = 0.0;
  double threshold = 0.0;       // c t^{1/(N+1)}
  double set_measure = 0.0;     // |A|
  double measure = 0.0;         // sum |I_i|
  std::vector<Interval> components;
  std::vector<Interval> intervals;   // the cover I_i
  std::vector<Interval> complement;  // J
  int cover_count = 0;
  int stray_components = 0;  // components outside every B_{2 delta}(y_i)
};

// A = {|S| <= c t^{1/(N+1)}}. Components are located on the field grid and
// their endpoints refined by bisection on the exact S; dips between nodes
// are found from sign changes of S and S'. With a critical structure the
// cover groups components by the ball B_{2 delta}(y_i) that contains them;
// without one each component is its own interval.
SublevelReport sublevel_set(const PhaseField& field, double c, int N);
SublevelReport sublevel_set(const PhaseField& field, double c, int N, const CriticalStructure& s, double delta);

struct InverseDerivativeResult {
  double value = 0.0;
  bool s_vanishes = false;  // S has a zero inside J: the lemma's hypothesis fails
};

// int_J |(1/S)'| dy as the total variation of 1/S over the monotone pieces
// of S in J (pieces split at zeros of S').
InverseDerivativeResult check_inverse_derivative_integral(const PhaseField& field, const SublevelReport& report);
// Same integral by composite Gauss-Legendre of |S'|/S^2; a cross-check.
double inverse_derivative_quadrature(const PhaseField& field, const SublevelReport& report, std::size_t panels = 4096);

struct ZeroCount {
  double center = 0.0;
  int zeros_s = 0;
  int zeros_ds = 0;
};

// Zeros of S and S' in each B_{2 delta}(y_i): sign changes plus touching
// zeros (extrema where |S| is at round-off level).
std::vector<ZeroCount> count_zeros_near_critical_points(const PhaseField& field, const CriticalStructure& s,
                                                        double delta);

// min over y outside every B_{2 delta}(y_i) of |S_t(y)|.
double min_abs_s_outside_balls(const PhaseField& field, const CriticalStructure& s, double delta);

}  // namespace shearmix
