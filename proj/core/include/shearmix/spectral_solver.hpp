#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "shearmix/grid.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

struct EvolutionConfig {
  double nu = 0.0;
  std::optional<double> dt;  // unset selects default_time_step
  std::vector<double> sample_times;
  int max_wavenumber = 1;
  std::size_t ny = 512;
  double horizon = 0.0;  // 0 means the last sample time
  bool require_mean_zero = true;
};

// min(0.05, 0.1 / (K |b|_inf)).
double default_time_step(const ShearProfile& b, int K);

// {t_min, 2 t_min, ...} up to t_max; per_octave > 1 inserts 2^{j/per_octave}
// steps.
std::vector<double> dyadic_times(double t_min, double t_max, int per_octave = 1);

struct ModeSnapshot {
  double t;
  ModeField modes;
};

// Strang-split evolution of the active modes of a ModeField:
// e^{-ikb dt/2} in physical y, e^{-nu(l^2+k^2) dt} in Fourier y, e^{-ikb dt/2}.
class ModeEvolver {
 public:
  ModeEvolver(const ShearProfile& b, double nu, ModeField initial, double dt);

  double time() const { return t_; }
  double dt() const { return dt_; }
  std::size_t steps_taken() const { return steps_; }
  const ModeField& state() const { return state_; }
  // Sum_k int |f_k|^2 dy/2pi, i.e. the normalized L^2 norm squared.
  double l2_norm() const;

  // Steps with dt, then one partial step to land exactly on t.
  void advance_to(double t);

 private:
  void step_mode(std::vector<Complex>& f, int k, double h) const;

  const ShearProfile* b_;
  double nu_;
  double dt_;
  double t_ = 0.0;
  std::size_t steps_ = 0;
  ModeField state_;
  std::vector<double> b_nodes_;
};

std::vector<ModeSnapshot> evolve_modes(const ModeField& initial, const ShearProfile& b, const EvolutionConfig& cfg);

std::vector<std::pair<double, ScalarField>> solve_viscous(const ScalarField& f0, const ShearProfile& b,
                                                          const EvolutionConfig& cfg);

// e^{-ikb(y)t} f_k(y) per mode.
ModeField exact_inviscid_modes(const ModeField& f0, const ShearProfile& b, double t);
ScalarField solve_exact_inviscid(const ScalarField& f0, const ShearProfile& b, double t);

}  // namespace shearmix
