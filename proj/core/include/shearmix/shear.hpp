#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shearmix/fft.hpp"

namespace shearmix {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

// One real Fourier term a*cos(n y) + s*sin(n y).
struct FourierMode {
  int wavenumber = 0;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
};

struct CriticalStructure {
  std::vector<double> points;  // increasing, in [0, 2pi)
  std::vector<int> orders;     // vanishing order of b' at each point
  int max_order = 0;

  int count() const { return static_cast<int>(points.size()); }
};

// A smooth 2pi-periodic shear b(y). Both families are stored as a finite
// complex Fourier series b(y) = sum_n beta_n e^{iny}, so every derivative
// is exact term by term; cos^m y is expanded by the binomial theorem.
class ShearProfile {
 public:
  enum class Family { CosPower, FourierSeries };

  static ShearProfile cos_power(int m);
  // declared_order is the N the caller vouches for; `expected` (if given)
  // is checked by validate_critical_structure.
  static ShearProfile fourier_series(std::vector<FourierMode> modes, int declared_order,
                                     std::optional<CriticalStructure> expected = std::nullopt);

  Family family() const { return family_; }
  int power() const { return power_; }
  int declared_order() const { return declared_order_; }
  int bandwidth() const { return bandwidth_; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  const std::optional<CriticalStructure>& expected_structure() const { return expected_; }

  // beta_n for |n| <= bandwidth, zero otherwise.
  Complex coefficient(int n) const;

  // b^{(order)}(y); throws InvalidArgument for order > N+2.
  double evaluate(double y, int order = 0) const;
  double operator()(double y) const { return evaluate(y, 0); }

  // max_y |b^{(order)}(y)|, sampled densely (exact up to sampling for a
  // trigonometric polynomial of this bandwidth).
  double sup_norm(int order = 0) const;

  std::string id() const;

 private:
  ShearProfile() = default;
  double evaluate_unchecked(double y, int order) const;
  void finalize();

  Family family_ = Family::CosPower;
  int power_ = 0;
  int declared_order_ = 1;
  int bandwidth_ = 0;
  std::vector<FourierMode> modes_;
  std::vector<Complex> beta_;  // index n + bandwidth
  std::optional<CriticalStructure> expected_;
  std::vector<double> sup_cache_;
};

CriticalStructure analyze_critical_structure(const ShearProfile& b, int grid_size = 1024,
                                             double newton_tol = 1e-13,
                                             double order_threshold = 1e-8);

// Compares a found structure with the declared one (FourierSeries profiles
// must declare; CosPower profiles are checked against the factorization).
// Throws InvalidArgument on mismatch.
void validate_critical_structure(const ShearProfile& b, const CriticalStructure& found,
                                 double point_tol = 1e-6);

// Distance on T = R / 2pi Z.
double torus_distance(double a, double b);
double wrap_angle(double y);

double min_critical_separation(const CriticalStructure& s);
// Throws InvalidArgument unless delta < min pairwise distance / 4.
void check_delta_separation(const CriticalStructure& s, double delta);

}  // namespace shearmix
