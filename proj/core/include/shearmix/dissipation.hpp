#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "shearmix/grid.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

struct HalfLifeOptions {
  std::size_t ny = 512;
  std::optional<double> dt;
  // 0 selects 1.05 ln(1/threshold)/nu, the pure-heat crossing for |k| >= 1.
  double horizon = 0.0;
  std::size_t coarse_samples = 256;
  double rel_tol = 1e-6;
};

// First t with |f(t)|_L2 <= threshold |f0|_L2, bracketed on a coarse time grid
// and refined by bisection, re-evolving from the saved state at the bracket.
double half_life(const ShearProfile& b, double nu, const ModeField& f0, double threshold,
                 const HalfLifeOptions& opt = {});

struct HalfLifeSweep {
  std::vector<double> nu;
  std::vector<double> half_life;
  double slope = 0.0;     // least squares of log half_life against log nu
  bool monotone = false;  // non-increasing in nu
};

HalfLifeSweep half_life_sweep(const ShearProfile& b, const std::vector<double>& nus, const ModeField& f0,
                              double threshold, const HalfLifeOptions& opt = {}, unsigned threads = 0);

struct CrossoverReport {
  double nu = 0.0;
  int order = 0;
  double p = 0.0;
  std::vector<double> times;
  // min over times of nu^{(N+1)/(N+3)} t - ln t; >= 0 iff the inequality holds.
  double margin = 0.0;
  bool holds = false;
};

// exp(-nu^{(N+1)/(N+3)} t) <= 1/t at t = t_nu 2^j inside [t_nu, 10 t_nu].
CrossoverReport crossover_consistency(double nu, int N, double p);

struct LengthScaleFloor {
  double nu = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double min_viscous = 0.0;
  double min_inviscid = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

// min of l(t) over [t_nu, 4 t_nu] at nu against the same window at nu = 0.
LengthScaleFloor length_scale_floor(const ShearProfile& b, double nu, double p, const ModeField& f0,
                                    double factor = 10.0, std::size_t ny = 1024, int per_octave = 4);

}  // namespace shearmix
