#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shearmix/brownian.hpp"
#include "shearmix/harness/config.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/phase.hpp"
#include "shearmix/shear.hpp"

namespace shearmix::harness {

// Smallest power of two >= 512 resolving the y-wavenumbers that carry
// energy up to t_max: K |b'| t at nu = 0, capped at nu > 0 where
// nu l^2 t / 3 > 40 has damped the mode.
std::size_t resolution_ny(const ShearProfile& b, int K, double nu, double t_max);

// Upper end of a decay-fit window: min(t_max, t_nu), or t_max at nu = 0.
double window_end(double nu, const GoodEventParams& params, double t_max);

// One series per norm id; nu = 0 uses the exact solution.
std::vector<NormSeries> norm_series(const ShearProfile& b, const InitialData& f0, double nu,
                                    const std::vector<double>& times, const std::vector<NormId>& ids, std::size_t ny,
                                    std::size_t nx);

// Phase fields of one path at the given times; at nu = 0 the seed is
// ignored and phi = t b.
std::vector<PhaseField> path_phase_fields(const ShearProfile& b, double nu, const GoodEventParams& params,
                                          std::uint64_t seed, const std::vector<double>& times, std::size_t ny = 2048);

// Good-event seeds for a sweep (a single dummy seed at nu = 0).
std::vector<std::uint64_t> sweep_seeds(double nu, const GoodEventParams& params, std::size_t n,
                                       std::uint64_t master_seed);

struct LemmaSample {
  std::uint64_t seed = 0;
  double t = 0.0;
  double c = 0.0;
  double measure = 0.0;      // sum of cover lengths
  double set_measure = 0.0;  // |A|
  int cover_count = 0;
  int stray = 0;
  double inv_deriv = 0.0;
  double inv_deriv_quad = 0.0;
  bool s_vanishes = false;
  int zeros_s_max = 0;
  int zeros_ds_max = 0;
  double min_s_outside = 0.0;  // min |S| outside the balls, times t^{-1/(N+1)}
};

struct LemmaSweep {
  double nu = 0.0;
  GoodEventParams params;
  double c = 0.0;
  std::vector<double> times;
  std::vector<std::uint64_t> seeds;
  std::vector<LemmaSample> samples;
};

// Dyadic t in [1, t_nu] (or [1, t_max] at nu = 0).
std::vector<double> lemma_times(double nu, const GoodEventParams& params, double t_max_inviscid = 1024.0);

LemmaSweep lemma_sweep(const ShearProfile& b, const CriticalStructure& s, int N, double nu,
                       const GoodEventParams& params, double c, const std::vector<double>& times,
                       const std::vector<std::uint64_t>& seeds);

// Half the smallest min_{outside balls} |S| t^{-1/(N+1)} seen on pilot paths.
double calibrate_c(const ShearProfile& b, const CriticalStructure& s, int N, double nu, const GoodEventParams& params,
                   const std::vector<double>& times, const std::vector<std::uint64_t>& pilot_seeds);

// Subcommands. Each writes CSVs, SVGs and manifest.json into cfg.out_dir and
// returns a process exit status.
int run_mix_decay(const ExperimentConfig& cfg);
int run_lemma_check(const ExperimentConfig& cfg);
int run_fk_validate(const ExperimentConfig& cfg);
int run_oscillatory(const ExperimentConfig& cfg);
int run_geometry(const ExperimentConfig& cfg);
int run_dissipation(const ExperimentConfig& cfg);
int run_all(const ExperimentConfig& cfg);
int run(const std::string& subcommand, const ExperimentConfig& cfg);

std::vector<std::string> subcommands();

}  // namespace shearmix::harness
