#include "shearmix/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shearmix/error.hpp"
#include "shearmix/parallel.hpp"

namespace shearmix {

double default_time_step(const ShearProfile& b, int K) {
  const double speed = std::max(1, std::abs(K)) * b.sup_norm(0);
  return speed > 0.0 ? std::min(0.05, 0.1 / speed) : 0.05;
}

std::vector<double> dyadic_times(double t_min, double t_max, int per_octave) {
  if (!(t_min > 0.0) || t_max < t_min || per_octave < 1) throw InvalidArgument("bad dyadic time range");
  std::vector<double> ts;
  for (int j = 0;; ++j) {
    const double t = t_min * std::exp2(static_cast<double>(j) / per_octave);
    if (t > t_max * (1.0 + 1e-12)) break;
    ts.push_back(t);
  }
  return ts;
}

ModeEvolver::ModeEvolver(const ShearProfile& b, double nu, ModeField initial, double dt)
    : b_(&b), nu_(nu), dt_(dt), state_(std::move(initial)) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(nu >= 0.0)) throw InvalidArgument("diffusivity must be >= 0");
  if (!is_power_of_two(state_.ny)) throw InvalidArgument("n_y must be a power of two");
  b_nodes_.resize(state_.ny);
  const PeriodicGrid1D g(state_.ny);
  for (std::size_t j = 0; j < state_.ny; ++j) b_nodes_[j] = b.evaluate(g.node(j));
}

double ModeEvolver::l2_norm() const {
  double s = 0.0;
  for (int k : state_.active_wavenumbers()) {
    for (auto v : state_.mode(k)) s += std::norm(v);
  }
  return std::sqrt(s / static_cast<double>(state_.ny));
}

void ModeEvolver::step_mode(std::vector<Complex>& f, int k, double h) const {
  const std::size_t n = f.size();
  auto transport = [&](double tau) {
    if (k == 0) return;
    for (std::size_t j = 0; j < n; ++j) f[j] *= std::polar(1.0, -k * b_nodes_[j] * tau);
  };
  transport(0.5 * h);
  if (nu_ > 0.0) {
    Fft1D fft(n);
    fft.forward(f);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double l = static_cast<double>(wavenumber(j, n));
      f[j] *= std::exp(-nu_ * (l * l + static_cast<double>(k) * k) * h) * inv_n;
    }
    fft.inverse(f);
  }
  transport(0.5 * h);
}

void ModeEvolver::advance_to(double t) {
  if (t < t_ - 1e-12) throw InvalidArgument("cannot evolve backwards in time");
  if (t <= t_) return;
  const double span = t - t_;
  auto full = static_cast<std::size_t>(std::floor(span / dt_ * (1.0 + 1e-12)));
  double rest = span - static_cast<double>(full) * dt_;
  if (rest < 1e-12 * dt_) rest = 0.0;
  const auto ks = state_.active_wavenumbers();
  std::vector<std::size_t> bad_step(ks.size(), 0);
  const std::size_t base = steps_;
  parallel_for(ks.size(), [&](std::size_t i) {
    auto& f = state_.mode_storage(ks[i]);
    auto finite = [&] {
      for (auto v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      return true;
    };
    for (std::size_t s = 0; s < full; ++s) {
      step_mode(f, ks[i], dt_);
      if (!finite()) {
        bad_step[i] = base + s + 1;
        return;
      }
    }
    if (rest > 0.0) {
      step_mode(f, ks[i], rest);
      if (!finite()) bad_step[i] = base + full + 1;
    }
  });
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (bad_step[i] != 0)
      throw NumericalError("non-finite state at step " + std::to_string(bad_step[i]) + " (mode k = " +
                           std::to_string(ks[i]) + ")");
  steps_ += full + (rest > 0.0 ? 1 : 0);
  t_ = t;
}

namespace {

ModeField resampled(const ModeField& m, std::size_t ny) {
  if (m.ny == ny) return m;
  ModeField out(ny, m.max_wavenumber);
  for (int k : m.active_wavenumbers()) out.mode_storage(k) = resample(m.mode(k), ny);
  return out;
}

void check_mean_zero(const ModeField& m) {
  if (!m.active(0)) return;
  double sup = 0.0, zero = 0.0;
  for (int k : m.active_wavenumbers())
    for (auto v : m.mode(k)) sup = std::max(sup, std::abs(v));
  for (auto v : m.mode(0)) zero = std::max(zero, std::abs(v));
  if (zero > 1e-8 * sup) throw InvalidArgument("initial datum is not mean-zero in x");
}

}  // namespace

std::vector<ModeSnapshot> evolve_modes(const ModeField& initial, const ShearProfile& b, const EvolutionConfig& cfg) {
  if (cfg.dt && !(*cfg.dt > 0.0)) throw InvalidArgument("dt must be positive");
  const double dt = cfg.dt ? *cfg.dt : default_time_step(b, cfg.max_wavenumber);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : (cfg.sample_times.empty() ? 0.0 : cfg.sample_times.back());
  for (std::size_t i = 0; i < cfg.sample_times.size(); ++i) {
    const double t = cfg.sample_times[i];
    if (t < 0.0 || (i > 0 && t <= cfg.sample_times[i - 1])) throw InvalidArgument("sample times must increase");
    if (t > horizon * (1.0 + 1e-12)) throw InvalidArgument("sample time beyond simulated horizon");
  }
  if (cfg.require_mean_zero) check_mean_zero(initial);
  ModeEvolver ev(b, cfg.nu, resampled(initial, cfg.ny), dt);
  std::vector<ModeSnapshot> out;
  out.reserve(cfg.sample_times.size());
  for (double t : cfg.sample_times) {
    ev.advance_to(t);
    out.push_back({t, ev.state()});
  }
  return out;
}

std::vector<std::pair<double, ScalarField>> solve_viscous(const ScalarField& f0, const ShearProfile& b,
                                                          const EvolutionConfig& cfg) {
  if (cfg.require_mean_zero && f0.max_row_mean() > 1e-8 * std::max(1.0, f0.sup_norm()))
    throw InvalidArgument("initial datum is not mean-zero in x");
  EvolutionConfig c = cfg;
  c.ny = f0.grid.ny;
  const auto snaps = evolve_modes(analyze(f0, cfg.max_wavenumber), b, c);
  std::vector<std::pair<double, ScalarField>> out;
  for (const auto& s : snaps) out.emplace_back(s.t, synthesize(s.modes, f0.grid.nx));
  return out;
}

ModeField exact_inviscid_modes(const ModeField& f0, const ShearProfile& b, double t) {
  ModeField out = f0;
  const PeriodicGrid1D g(f0.ny);
  std::vector<double> bn(f0.ny);
  for (std::size_t j = 0; j < f0.ny; ++j) bn[j] = b.evaluate(g.node(j));
  for (int k : f0.active_wavenumbers()) {
    auto& f = out.mode_storage(k);
    for (std::size_t j = 0; j < f0.ny; ++j) f[j] *= std::polar(1.0, -k * bn[j] * t);
  }
  return out;
}

ScalarField solve_exact_inviscid(const ScalarField& f0, const ShearProfile& b, double t) {
  return synthesize(exact_inviscid_modes(analyze(f0), b, t), f0.grid.nx);
}

}  // namespace shearmix
