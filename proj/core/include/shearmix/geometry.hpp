#pragma once

#include <cstddef>
#include <vector>

#include "shearmix/grid.hpp"
#include "shearmix/oscillatory.hpp"
#include "shearmix/phase.hpp"

namespace shearmix {

// Part of the image curve over an x-window [x_lo, x_hi] (unwrapped X
// coordinates) with preimage [y_lo, y_hi] in the source interval.
struct GraphPiece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

// Image of the vertical segment {x0} x I under Phi_t:
// X(y) = x0 + sigma B_t - phi_t(y), Y(y) = y + sigma W_t.
class ImageCurve {
 public:
  ImageCurve(PhaseField field, double x0, Interval source);

  const PhaseField& field() const { return field_; }
  const Interval& source() const { return source_; }
  double x0() const { return x0_; }

  double X(double y) const;
  double Y(double y) const;
  // y in the source interval with X(y) = x: monotone cubic guess, Newton polish.
  double inverse(double x) const;
  double h(double x) const { return Y(inverse(x)); }
  // h'(x) = -1/S_t at the preimage.
  double slope(double x) const;
  // Slope of the monotone cubic inverse alone (no exact S), for checking
  // the interpolant against -1/S.
  double interpolant_slope(double x) const;

  const std::vector<GraphPiece>& graphs() const { return graphs_; }
  const std::vector<GraphPiece>& remainder() const { return remainder_; }
  int wraps() const { return static_cast<int>(graphs_.size()); }
  double x_extent() const { return x_hi_ - x_lo_; }

  // max |h'| over a piece: 1 / min |S| on its preimage.
  double max_slope(const GraphPiece& p) const;
  double max_slope() const;
  double remainder_arclength() const;

 private:
  double interp_guess(double x) const;

  PhaseField field_;
  double x0_;
  Interval source_;
  double x_lo_ = 0.0;
  double x_hi_ = 0.0;
  bool decreasing_ = false;
  std::vector<double> xs_, ys_, ms_;  // inverse interpolation data, xs increasing
  std::vector<GraphPiece> graphs_;
  std::vector<GraphPiece> remainder_;
};

// Throws InvalidArgument if S changes sign inside I (a failure of the
// sublevel lemma for this path).
ImageCurve build_image_curve(const PhaseField& field, double x0, const Interval& I);

struct JacobianField {
  std::vector<double> y;
  std::vector<double> j;  // (1 + S^2)^{-1/2}
  double max() const;
};
JacobianField jacobian_field(const ImageCurve& curve, std::size_t n = 1024);

// int_{gamma_j} f0 dm_s = int f0(x, h_j(x)) sqrt(1 + h_j'^2) dx per full graph.
std::vector<double> line_integral_mean_zero(const ImageCurve& curve, const TrigPolynomial2D& f0,
                                            std::size_t panels_per_window = 4);

// Bound on |int_{gamma} f0 dm_s| for a graph with slope <= s over one 2pi
// window of a mean-zero-in-x f0: pi^2 s |d_y f0|_inf + pi s^2 |f0|_inf.
double line_integral_taylor_bound(double max_slope, double dy_f0_sup, double f0_sup);

struct ChangeOfVariables {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

// lhs = int_I f0(Phi_t(x0, y)) g(y) dy by y-quadrature; rhs = the same over
// the graphs and remainder as int f0 (g o Phi^{-1}) J dm_s by x-quadrature.
ChangeOfVariables change_of_variables_check(const ImageCurve& curve, const TrigPolynomial2D& f0,
                                            const PeriodicFunction& g, std::size_t panels_per_window = 16);

// Split of the graph part with arclength means g_j and J_j:
// T21 = sum g_j J_j int f0, T22 = sum J_j int f0 (g - g_j), T23 = sum int f0 g (J - J_j).
struct GraphTerms {
  double t21 = 0.0;
  double t22 = 0.0;
  double t23 = 0.0;
  double remainder = 0.0;
  double total() const { return t21 + t22 + t23 + remainder; }
};
GraphTerms graph_terms(const ImageCurve& curve, const TrigPolynomial2D& f0, const PeriodicFunction& g,
                       std::size_t panels_per_window = 16);

struct DynamicalEstimate {
  double total = 0.0;     // int_T f0(Phi_t(x0, y)) g(y) dy
  double bad_part = 0.0;  // over the cover intervals
  double good_part = 0.0; // over the complement, via graph_terms
  std::vector<GraphTerms> per_interval;
  double ratio = 0.0;     // |total| t^{1/(N+1)} / (|f0|_{L^inf W^{1,inf}} |g|_{W^{1,inf}})
};

DynamicalEstimate dynamical_estimate(const PhaseField& field, const SublevelReport& report, int N,
                                     const TrigPolynomial2D& f0, double f0_norm, const PeriodicFunction& g, double x0);

// Composite Gauss-Legendre of f over [a, b].
template <class F>
double gl_integrate(F&& f, double a, double b, std::size_t panels, const GaussLegendre& gl) {
  double s = 0.0;
  const double w = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + w * static_cast<double>(p);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) s += 0.5 * w * gl.weights[q] * f(lo + 0.5 * w * (gl.nodes[q] + 1.0));
  }
  return s;
}

}  // namespace shearmix
