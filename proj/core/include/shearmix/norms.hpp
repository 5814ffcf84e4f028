#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shearmix/grid.hpp"

namespace shearmix {

// All norms use the normalized measure dx dy / (4 pi^2) and the normalized
// Fourier convention of analyze().

enum class NormId { Hminus1, L2, L2kW11, L2kWm1inf, LinfW1inf, LinfWm11, LengthScale };

std::string norm_name(NormId id);
NormId parse_norm(const std::string& name);

double h_minus1(const ModeField& f);
double h_minus1(const ScalarField& f);
double l2(const ModeField& f);
double l2(const ScalarField& f);
double l2k_w11(const ModeField& f);
double l2k_w11(const ScalarField& f);
// Per k: |mean f_k| + radius of the smallest disc holding the periodic
// primitive of f_k - mean (for real data: half its oscillation).
double l2k_wm1inf_surrogate(const ModeField& f);
double l2k_wm1inf_surrogate(const ScalarField& f);
// Column norms need the physical x grid.
double linf_w1inf(const ScalarField& f);
double linf_w1inf(const ModeField& f, std::size_t nx);
// Per column: |mean| + mean |P - median P| with P the primitive of the
// fluctuation; max over columns.
double linf_wm11_surrogate(const ScalarField& f);
double linf_wm11_surrogate(const ModeField& f, std::size_t nx);
// |f|_{L^2} / |grad f|_{L^2}.
double length_scale(const ModeField& f);
double length_scale(const ScalarField& f);

double evaluate_norm(NormId id, const ModeField& f, std::size_t nx);

// Pieces shared with tests.
double w11_profile(std::span<const Complex> fk);
double wm1inf_profile(std::span<const Complex> fk);
double wm11_column(std::span<const double> column);
// Smallest enclosing circle radius of points in the plane (Welzl, with a
// fixed shuffle so the result is reproducible).
double enclosing_radius(std::span<const Complex> pts);
// Normalized pairing int f conj(g) dmu as a sum over x-modes.
Complex pairing(const ModeField& f, const ModeField& g);

double japanese_bracket(double t);

struct NormSeries {
  NormId id = NormId::Hminus1;
  double nu = 0.0;
  std::string profile_id;
  std::string f0_id;
  std::vector<double> t;
  std::vector<double> value;

  void add(double time, double v);
};

struct DecayFit {
  double exponent = 0.0;
  double constant = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Least squares of log value on log t over samples with t in [t_min, t_max].
DecayFit fit_decay_exponent(const NormSeries& series, double t_min, double t_max);

// max over the window of value * <t>^{rate}; a slope-free amplitude.
double envelope_constant(const NormSeries& series, double t_min, double t_max, double rate);

}  // namespace shearmix
