#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "shearmix/shear.hpp"

namespace shearmix {

// Standard (unscaled) Brownian pair on a uniform grid; sqrt(2 nu) is applied
// where the path is used. W and B come from independent derived streams.
struct BrownianPath {
  double horizon = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  double nu = 0.0;
  std::vector<double> w;  // steps + 1 values, w[0] = 0
  std::vector<double> b;

  double dt() const { return horizon / static_cast<double>(steps); }
  double time(std::size_t i) const { return dt() * static_cast<double>(i); }
  double sigma() const;
  // Linear interpolation of W (resp. B) at time s <= horizon.
  double w_at(double s) const;
  double b_at(double s) const;
};

BrownianPath sample_path(std::uint64_t seed, double horizon, std::size_t steps, double nu = 0.0);
// (W, B) -> (-W, -B).
BrownianPath antithetic(const BrownianPath& p);

// min(0.01, horizon / 2048) as a step count.
std::size_t phase_path_steps(double horizon);

struct GoodEventParams {
  double delta = 0.3;
  double p = 0.75;

  // p at the midpoint of ((N+1)/(N+3), 1).
  static GoodEventParams midpoint(double delta, int N);
  double t_nu(double nu) const;
  // Throws unless (N+1)/(N+3) < p < 1 and delta > 0.
  void validate(int N) const;
  void validate(const CriticalStructure& s) const;
};

// max over grid times s <= t_nu of |sqrt(2 nu) W_s| <= delta; always true at nu = 0.
bool classify_good_event(const BrownianPath& path, const GoodEventParams& params, double nu);

// Max of |W| over grid times <= t_stop, drawing only the W stream of
// sample_path(seed, horizon, steps) and stopping as soon as it exceeds
// abort_above. Identical values to the stored path.
double running_sup_abs(std::uint64_t seed, double horizon, std::size_t steps, double t_stop, double abort_above);

// Equivalent to classify_good_event(sample_path(seed, horizon, steps), ...).
bool good_event_streaming(std::uint64_t seed, double horizon, std::size_t steps, const GoodEventParams& params,
                          double nu);

// Seeds derive_seed(master, i) of the first n_good paths (in index order)
// that are good on [0, t_nu] for a path grid of `steps` steps over t_nu.
// Throws NumericalError if max_tries indices do not suffice.
struct GoodPathSearch {
  std::vector<std::uint64_t> seeds;
  std::size_t tried = 0;
};
GoodPathSearch find_good_paths(double nu, const GoodEventParams& params, std::size_t n_good,
                               std::uint64_t master_seed, std::size_t steps, std::size_t max_tries = 2000000);

double gaussian_upper_tail(double a);
// P(sup_{[0,T]} |W| > a) = sum_j (-1)^j 4 Phi_bar((2j+1) a / sqrt(T)).
double two_sided_exit_probability(double a, double T);

struct TailReport {
  double nu = 0.0;
  double delta = 0.0;
  double p = 0.0;
  int order = 1;
  std::size_t n_paths = 0;
  std::size_t steps = 0;
  double t_nu = 0.0;
  double empirical_p = 0.0;
  double standard_error = 0.0;
  double reflection_lower = 0.0;  // 2 Phi_bar(delta / sigma)
  double reflection_upper = 0.0;  // 4 Phi_bar(delta / sigma)
  double exit_probability = 0.0;  // continuous-time series value
  double gaussian_bound = 0.0;    // C exp(-delta^2 / (8 nu^{1-p}))
  double rate_bound = 0.0;        // t_nu^{-1/(N+1)}
  double nu0 = 0.0;               // largest nu with exit_probability <= rate bound
  bool within_reflection_bracket = false;
  bool below_gaussian_bound = false;
  bool below_rate_bound = false;
  bool pass = false;  // gaussian bound, plus rate bound when nu <= nu0
};

TailReport verify_tail_bound(double nu, const GoodEventParams& params, int N, std::size_t n_paths,
                             std::uint64_t master_seed, std::size_t steps = 8192, double C = 2.0);

// Largest nu at which the exact two-sided exit probability is below
// t_nu^{-1/(N+1)} for every t in [1, t_nu] (the binding case is t = t_nu).
double find_nu0(const GoodEventParams& params, int N);

// Empirical P(bad) for each delta, sharing one set of paths.
std::vector<double> bad_probability_curve(double nu, double p, const std::vector<double>& deltas,
                                          std::size_t n_paths, std::uint64_t master_seed, std::size_t steps = 8192);

}  // namespace shearmix
