#include "shearmix/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearmix/error.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/spectral_solver.hpp"

namespace shearmix {
namespace {

ModeField on_grid(const ModeField& f, std::size_t ny) {
  ModeField out(ny, f.max_wavenumber);
  for (int k : f.active_wavenumbers()) {
    const auto r = resample(f.mode(k), ny);
    auto dst = out.activate(k);
    std::copy(r.begin(), r.end(), dst.begin());
  }
  return out;
}

int max_active(const ModeField& f) {
  int K = 0;
  for (int k : f.active_wavenumbers()) K = std::max(K, std::abs(k));
  return K;
}

}  // namespace

double half_life(const ShearProfile& b, double nu, const ModeField& f0, double threshold,
                 const HalfLifeOptions& opt) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("half-life threshold must lie in (0, 1)");
  if (!(nu > 0.0)) throw InvalidArgument("half-life requires nu > 0");
  if (!is_power_of_two(opt.ny)) throw InvalidArgument("half-life grid must be a power of two");
  if (f0.active(0)) {
    double m = 0.0;
    for (auto v : f0.mode(0)) m = std::max(m, std::abs(v));
    if (m > 1e-12) throw InvalidArgument("f0 must be mean-zero in x");
  }
  const int K = std::max(1, max_active(f0));
  const double dt = opt.dt.value_or(default_time_step(b, K));
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double horizon = opt.horizon > 0.0 ? opt.horizon : 1.05 * std::log(1.0 / threshold) / nu;

  ModeEvolver ev(b, nu, on_grid(f0, opt.ny), dt);
  const double target = threshold * ev.l2_norm();
  if (!(target > 0.0)) throw InvalidArgument("f0 is identically zero");

  const double coarse = std::max(dt, horizon / static_cast<double>(std::max<std::size_t>(1, opt.coarse_samples)));
  ModeField saved = ev.state();
  double t_lo = 0.0, t_hi = -1.0;
  while (ev.time() < horizon) {
    saved = ev.state();
    t_lo = ev.time();
    ev.advance_to(std::min(horizon, t_lo + coarse));
    if (ev.l2_norm() <= target) {
      t_hi = ev.time();
      break;
    }
  }
  if (t_hi < 0.0)
    throw NumericalError("half-life: horizon " + std::to_string(horizon) + " exhausted at nu=" + std::to_string(nu));

  while (t_hi - t_lo > std::max(opt.rel_tol * t_hi, 1e-12)) {
    const double mid = 0.5 * (t_lo + t_hi);
    ModeEvolver probe(b, nu, saved, dt);
    probe.advance_to(mid - t_lo);
    if (probe.l2_norm() <= target) {
      t_hi = mid;
    } else {
      saved = probe.state();
      t_lo = mid;
    }
  }
  return t_hi;
}

HalfLifeSweep half_life_sweep(const ShearProfile& b, const std::vector<double>& nus, const ModeField& f0,
                              double threshold, const HalfLifeOptions& opt, unsigned threads) {
  if (nus.size() < 2) throw InvalidArgument("half-life sweep needs at least two nu values");
  HalfLifeSweep s;
  s.nu = nus;
  s.half_life.assign(nus.size(), 0.0);
  parallel_for(
      nus.size(), [&](std::size_t i) { s.half_life[i] = half_life(b, nus[i], f0, threshold, opt); }, threads);

  double mx = 0, my = 0;
  const double n = static_cast<double>(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i) {
    mx += std::log(nus[i]) / n;
    my += std::log(s.half_life[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const double dx = std::log(nus[i]) - mx;
    sxy += dx * (std::log(s.half_life[i]) - my);
    sxx += dx * dx;
  }
  s.slope = sxy / sxx;

  std::vector<std::size_t> order(nus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto c) { return nus[a] < nus[c]; });
  s.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (s.half_life[order[i]] > s.half_life[order[i - 1]] * (1.0 + 1e-9)) s.monotone = false;
  return s;
}

CrossoverReport crossover_consistency(double nu, int N, double p) {
  if (N < 1) throw InvalidArgument("vanishing order must be >= 1");
  if (!(nu > 0.0 && nu <= 1.0)) throw InvalidArgument("crossover needs nu in (0, 1]");
  const double a = static_cast<double>(N + 1) / (N + 3);
  if (!(p >= a && p <= 1.0)) throw InvalidArgument("p must lie in [(N+1)/(N+3), 1]");
  CrossoverReport r;
  r.nu = nu;
  r.order = N;
  r.p = p;
  const double t_nu = std::pow(nu, -p);
  const double rate = std::pow(nu, a);
  r.margin = std::numeric_limits<double>::infinity();
  for (double t = t_nu; t <= 10.0 * t_nu * (1.0 + 1e-12); t *= 2.0) {
    r.times.push_back(t);
    r.margin = std::min(r.margin, rate * t - std::log(t));
  }
  r.holds = r.margin >= 0.0;
  return r;
}

LengthScaleFloor length_scale_floor(const ShearProfile& b, double nu, double p, const ModeField& f0,
                                    double factor, std::size_t ny, int per_octave) {
  if (!(nu > 0.0)) throw InvalidArgument("length-scale floor compares a viscous run to nu = 0");
  LengthScaleFloor r;
  r.nu = nu;
  r.window_lo = std::pow(nu, -p);
  r.window_hi = 4.0 * r.window_lo;
  const auto times = dyadic_times(r.window_lo, r.window_hi, per_octave);

  EvolutionConfig cfg;
  cfg.nu = nu;
  cfg.sample_times = times;
  cfg.max_wavenumber = std::max(1, max_active(f0));
  cfg.ny = ny;
  const auto snaps = evolve_modes(on_grid(f0, ny), b, cfg);
  r.min_viscous = std::numeric_limits<double>::infinity();
  for (const auto& s : snaps) r.min_viscous = std::min(r.min_viscous, length_scale(s.modes));

  // The inviscid profile is exact; the grid must resolve k t |b'|.
  const double need = 2.5 * (cfg.max_wavenumber * r.window_hi * b.sup_norm(1) + 64.0);
  const std::size_t ny0 = next_power_of_two(static_cast<std::size_t>(std::ceil(need)));
  const ModeField g0 = on_grid(f0, ny0);
  r.min_inviscid = std::numeric_limits<double>::infinity();
  for (double t : times) r.min_inviscid = std::min(r.min_inviscid, length_scale(exact_inviscid_modes(g0, b, t)));

  r.ratio = r.min_viscous / r.min_inviscid;
  r.pass = r.ratio >= factor;
  return r;
}

}  // namespace shearmix
