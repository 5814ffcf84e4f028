#include "shearmix/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "shearmix/brownian.hpp"
#include "shearmix/dissipation.hpp"
#include "shearmix/error.hpp"
#include "shearmix/fkmc.hpp"
#include "shearmix/geometry.hpp"
#include "shearmix/harness/config.hpp"
#include "shearmix/harness/experiments.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/oscillatory.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/rng.hpp"
#include "shearmix/spectral_solver.hpp"

namespace shearmix::harness {
namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const char* mark(bool ok) { return ok ? "ok  " : "FAIL"; }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
  CriterionResult& r;
  void operator()(bool ok, const std::string& line) {
    r.details.push_back(std::string(mark(ok)) + " " + line);
    r.pass = r.pass && ok;
  }
  void note(const std::string& line) { r.details.push_back("     " + line); }
};

DecayFit fit_series(const ShearProfile& b, const InitialData& f0, double nu, NormId id, double t_lo, double t_hi,
                    int per_octave, double* envelope = nullptr, std::size_t nx = 16) {
  const auto times = dyadic_times(t_lo, t_hi, per_octave);
  const auto ny = resolution_ny(b, 1, nu, t_hi);
  const auto s = norm_series(b, f0, nu, times, {id}, ny, nx).front();
  const double rate = 1.0 / (b.declared_order() + 1);
  if (envelope) *envelope = envelope_constant(s, t_lo, t_hi, rate) / f0.l2;
  return fit_decay_exponent(s, t_lo, t_hi);
}

// ---------------------------------------------------------------------------

void ac01(CriterionResult& r, const AcceptanceOptions&) {
  Check check{r};
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = ShearProfile::cos_power(1);
  const auto fit = fit_series(b, initial_data("cosx_siny"), 0.0, NormId::Hminus1, 16, 1024, 1);
  check(fit.exponent >= -0.6 && fit.exponent <= -0.4,
        fmt("H^-1 exponent %.4f (n=%zu, r2=%.4f) in [-0.6, -0.4]", fit.exponent, fit.n, fit.r2));
  const auto alt = fit_series(b, initial_data("cosx_cosy"), 0.0, NormId::Hminus1, 16, 1024, 1);
  check.note(fmt("diagnostic: f0 = cos x cos y gives %.4f; cos x sin y vanishes at both critical points of cos y,"
                 " where the stationary-phase contribution lives",
                 alt.exponent));
  const double sec = elapsed(t0);
  check(sec < 60.0, fmt("runtime %.1f s < 60 s", sec));
}

void decay_sweep(CriterionResult& r, NormId id, bool check_constants) {
  Check check{r};
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = ShearProfile::cos_power(1);
  const auto f0 = initial_data("cosx_siny");
  const auto params = GoodEventParams::midpoint(0.3, 1);
  const std::vector<double> nus{0.0, 1e-3, 1e-4, 1e-5};
  std::vector<DecayFit> fits(nus.size());
  std::vector<double> env(nus.size());
  std::vector<double> hi(nus.size());
  parallel_for(nus.size(), [&](std::size_t i) {
    hi[i] = window_end(nus[i], params, 1024.0);
    fits[i] = fit_series(b, f0, nus[i], id, 16.0, hi[i], 2, &env[i]);
  });
  for (std::size_t i = 0; i < nus.size(); ++i) {
    check(fits[i].exponent <= -0.4, fmt("nu=%-6g window [16, %.0f] n=%zu exponent %.4f <= -0.4", nus[i], hi[i],
                                        fits[i].n, fits[i].exponent));
    if (check_constants && i > 0) {
      const double q = env[i] / env[0];
      check(q >= 1.0 / 3.0 && q <= 3.0,
            fmt("nu=%-6g envelope constant %.4f / nu=0 constant %.4f = %.3f in [1/3, 3]", nus[i], env[i], env[0], q));
    }
  }
  if (check_constants) {
    std::string s = "diagnostic: least-squares intercepts";
    for (std::size_t i = 0; i < nus.size(); ++i) s += fmt(" %.3g", fits[i].constant);
    check.note(s);
  }
  const double sec = elapsed(t0);
  check(sec < 600.0, fmt("runtime %.1f s < 600 s", sec));
}

void ac02(CriterionResult& r, const AcceptanceOptions&) { decay_sweep(r, NormId::L2kWm1inf, true); }

void ac03(CriterionResult& r, const AcceptanceOptions&) {
  Check check{r};
  const auto b = ShearProfile::cos_power(3);
  const auto f0 = initial_data("cosx_siny");
  const auto params = GoodEventParams::midpoint(0.3, 2);
  for (double nu : {0.0, 1e-4}) {
    const double hi = window_end(nu, params, 1024.0);
    const auto fit = fit_series(b, f0, nu, NormId::L2kWm1inf, 16.0, hi, 2);
    check(fit.exponent >= -0.45 && fit.exponent <= -0.22,
          fmt("cos^3 nu=%-6g window [16, %.0f] exponent %.4f in [-0.45, -0.22]", nu, hi, fit.exponent));
  }
  check.note(fmt("diagnostic: enhanced-dissipation time nu^{-3/5} at nu=1e-4 is %.0f, inside the window", std::pow(1e-4, -0.6)));
}

void ac04(CriterionResult& r, const AcceptanceOptions&) { decay_sweep(r, NormId::LinfWm11, false); }

void ac05(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto t0 = std::chrono::steady_clock::now();
  const GoodEventParams params{0.3, 0.8};
  const auto rep = verify_tail_bound(1e-4, params, 1, 100000, derive_seed(opt.master_seed, 5));
  check(rep.within_reflection_bracket,
        fmt("P(bad) = %.4f +- %.4f in [2, 4] x Phi_bar: [%.4f, %.4f]", rep.empirical_p, rep.standard_error,
            rep.reflection_lower, rep.reflection_upper));
  check(rep.empirical_p <= rep.rate_bound,
        fmt("P(bad) = %.4f <= t_nu^{-1/2} = %.4f at t_nu = %.1f", rep.empirical_p, rep.rate_bound, rep.t_nu));
  check.note(fmt("continuous-time exit probability %.4f; bound C exp(-delta^2/(8 nu^{1-p})) = %.4g; "
                 "the rate bound first holds for nu <= %.3g",
                 rep.exit_probability, rep.gaussian_bound, rep.nu0));
  const double sec = elapsed(t0);
  check(sec < 60.0, fmt("runtime %.1f s < 60 s", sec));
}

// Shared sweep for the sublevel-set criteria.
struct LemmaData {
  LemmaSweep pilot;
  LemmaSweep main;
  double c = 0.0;
  std::size_t tried = 0;
};

const LemmaData& lemma_data(const AcceptanceOptions& opt) {
  static std::optional<LemmaData> cache;
  if (cache) return *cache;
  const auto b = ShearProfile::cos_power(1);
  const auto s = analyze_critical_structure(b);
  const double nu = 1e-4;
  const auto params = GoodEventParams::midpoint(0.3, 1);
  const auto times = lemma_times(nu, params);
  const auto pilots = sweep_seeds(nu, params, 100, derive_seed(opt.master_seed, 1));
  const auto seeds = sweep_seeds(nu, params, 1000, derive_seed(opt.master_seed, 2));
  LemmaData d;
  d.c = calibrate_c(b, s, 1, nu, params, times, pilots);
  d.pilot = lemma_sweep(b, s, 1, nu, params, d.c, times, pilots);
  d.main = lemma_sweep(b, s, 1, nu, params, d.c, times, seeds);
  cache = std::move(d);
  return *cache;
}

PhaseField inviscid_field(double t) {
  const auto b = ShearProfile::cos_power(1);
  return path_phase_fields(b, 0.0, GoodEventParams{}, 0, {t}, 4096).front();
}

double fit_max_over_paths(const std::vector<LemmaSample>& xs, double LemmaSample::*field) {
  std::map<double, double> worst;
  for (const auto& x : xs) worst[x.t] = std::max(worst[x.t], x.*field);
  NormSeries s;
  for (auto [t, v] : worst) s.add(t, v);
  return fit_decay_exponent(s, s.t.front(), s.t.back()).exponent;
}

void ac06(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto& d = lemma_data(opt);
  double C = 0.0;
  for (const auto& x : d.pilot.samples) C = std::max(C, 2.0 * x.measure * std::sqrt(x.t));
  check.note(fmt("c = %.4f calibrated on %zu pilot paths; C = %.4f (twice the pilot maximum of |cover| t^{1/2})", d.c,
                 d.pilot.seeds.size(), C));
  double worst = 0.0;
  int max_cover = 0, stray = 0;
  for (const auto& x : d.main.samples) {
    worst = std::max(worst, x.measure * std::sqrt(x.t));
    max_cover = std::max(max_cover, x.cover_count);
    stray += x.stray;
  }
  check(worst <= C, fmt("max |cover| t^{1/2} over %zu paths x %zu times = %.4f <= C", d.main.seeds.size(),
                        d.main.times.size(), worst));
  check(max_cover <= 2 && stray == 0, fmt("max cover_count %d <= 2, stray components %d", max_cover, stray));
  check.note(fmt("diagnostic: fitted exponent of the per-t maximum %.3f", fit_max_over_paths(d.main.samples, &LemmaSample::measure)));
  const auto rep = sublevel_set(inviscid_field(100.0), 0.1, 1);
  const double exact = 4.0 * std::asin(0.01);
  check(std::abs(rep.set_measure - exact) <= 1e-4,
        fmt("nu=0, t=100, c=0.1: |A| = %.8f vs 4 asin(0.01) = %.8f", rep.set_measure, exact));
}

void ac07(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto& d = lemma_data(opt);
  double C = 0.0;
  for (const auto& x : d.pilot.samples) C = std::max(C, 2.0 * x.inv_deriv * std::sqrt(x.t));
  double worst = 0.0, gap = 0.0;
  bool vanish = false;
  for (const auto& x : d.main.samples) {
    worst = std::max(worst, x.inv_deriv * std::sqrt(x.t));
    gap = std::max(gap, std::abs(x.inv_deriv - x.inv_deriv_quad) / std::max(1e-300, x.inv_deriv));
    vanish = vanish || x.s_vanishes;
  }
  check(!vanish, "S_t has no zero on any complement interval");
  check(worst <= C, fmt("max t^{1/2} int_J |(1/S)'| = %.4f <= C' = %.4f (twice the pilot maximum)", worst, C));
  check.note(fmt("diagnostic: Gauss-Legendre cross-check max relative gap %.2e; fitted exponent %.3f", gap,
                 fit_max_over_paths(d.main.samples, &LemmaSample::inv_deriv)));
  const auto f = inviscid_field(100.0);
  const auto rep = sublevel_set(f, 0.1, 1);
  const auto v = check_inverse_derivative_integral(f, rep);
  check(std::abs(v.value - 3.96) <= 0.05, fmt("nu=0, t=100, c=0.1: integral %.6f vs 3.96 +- 0.05", v.value));
}

void ac08(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto& d = lemma_data(opt);
  std::size_t ok = 0;
  int zs = 0, zd = 0;
  for (const auto& x : d.main.samples) {
    ok += x.zeros_s_max <= 1 && x.zeros_ds_max <= 1;
    zs = std::max(zs, x.zeros_s_max);
    zd = std::max(zd, x.zeros_ds_max);
  }
  const double frac = static_cast<double>(ok) / static_cast<double>(d.main.samples.size());
  check(frac == 1.0, fmt("zeros of S and S' per ball <= 1 on %.2f%% of %zu (path, t) samples (max %d, %d)",
                         100.0 * frac, d.main.samples.size(), zs, zd));
}

void ac09(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto b = ShearProfile::cos_power(1);
  const auto F = PeriodicFunction::one(), g = PeriodicFunction::one();
  const auto params = GoodEventParams::midpoint(0.3, 1);
  std::vector<double> ratios;
  for (double nu : {0.0, 1e-3, 1e-4, 1e-5}) {
    IbpSweep sw;
    sw.nu = nu;
    sw.ks = {1, 2, 4, 8};
    sw.times = dyadic_times(1.0, nu > 0.0 ? params.t_nu(nu) : 4096.0, 1);
    sw.n_paths = 100;
    sw.params = params;
    sw.master_seed = derive_seed(opt.master_seed, 4);
    const auto rep = verify_lemma_ibp(b, 1, F, g, sw);
    ratios.push_back(rep.max_ratio);
    if (nu == 0.0) {
      check.note(fmt("nu=0: max ratio %.4f over k in {1,2,4,8}, t in [1, 4096]", rep.max_ratio));
    } else {
      check(rep.max_ratio <= 2.0 * ratios.front(),
            fmt("nu=%-6g max ratio %.4f over %zu good paths (%zu tried), within factor 2 of %.4f", nu, rep.max_ratio,
                sw.n_paths, rep.paths_tried, ratios.front()));
    }
  }
  double worst = 0.0;
  for (double t : {1.0, 10.0, 100.0, 1000.0, 4096.0}) {
    const auto q = deterministic_integral(b, 1, t, F, g);
    const double ref = kTwoPi * std::abs(std::cyl_bessel_j(0.0, t));
    worst = std::max(worst, std::abs(std::abs(q.value) - ref));
  }
  check(worst <= 1e-6, fmt("nu=0, F=g=1: max ||I| - 2 pi |J0(t)|| = %.2e <= 1e-6 at t in {1, 10, 100, 1000, 4096}", worst));
}

void ac10(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto b = ShearProfile::cos_power(1);
  const auto s = analyze_critical_structure(b);
  const auto f0 = initial_data("cosx_siny");
  const auto g = PeriodicFunction::sine();
  const auto params = GoodEventParams::midpoint(0.3, 1);
  double worst_slope = 0.0, worst_gap = 0.0, worst_interp = 0.0;
  std::size_t curves = 0;
  for (double nu : {0.0, 1e-4}) {
    const auto times = dyadic_times(16.0, window_end(nu, params, 1024.0), 1);
    for (auto seed : sweep_seeds(nu, params, 20, derive_seed(opt.master_seed, 6))) {
      for (const auto& f : path_phase_fields(b, nu, params, seed, times)) {
        const auto rep = sublevel_set(f, 1.0, 1, s, params.delta);
        for (const auto& J : rep.complement) {
          const ImageCurve curve(f, 0.0, J);
          const double scale = std::sqrt(f.t());
          worst_slope = std::max(worst_slope, curve.max_slope() * scale);
          for (const auto& p : curve.graphs())
            for (int q = 0; q <= 8; ++q)
              worst_interp = std::max(worst_interp,
                                      std::abs(curve.interpolant_slope(p.x_lo + (p.x_hi - p.x_lo) * q / 8.0)) * scale);
          worst_gap = std::max(worst_gap, change_of_variables_check(curve, f0.poly, g).gap);
          ++curves;
        }
      }
    }
  }
  check(worst_slope <= 1.001, fmt("max |h_j'| t^{1/2} = %.4f <= 1.001 over %zu curves (c = 1)", worst_slope, curves));
  check(worst_interp <= 1.001, fmt("monotone-cubic interpolant slope max t^{1/2} = %.4f <= 1.001", worst_interp));
  const double tol = 1e-6 * f0.sup * 1.0;
  check(worst_gap < tol, fmt("change-of-variables gap %.2e < %.0e", worst_gap, tol));

  NormSeries li;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double t : dyadic_times(100.0, 10000.0, 4)) {
    std::size_t ny = 1;
    while (ny < 2.5 * t + 256) ny *= 2;
    const auto f = path_phase_fields(b, 0.0, params, 0, {t}, ny).front();
    const auto rep = sublevel_set(f, 1.0, 1, s, params.delta);
    double m = 0.0;
    for (const auto& J : rep.complement)
      for (double v : line_integral_mean_zero(ImageCurve(f, 0.0, J), f0.poly)) m = std::max(m, std::abs(v));
    li.add(t, m);
    lo = std::min(lo, m * std::sqrt(t));
    hi = std::max(hi, m * std::sqrt(t));
  }
  const auto fit = fit_decay_exponent(li, li.t.front(), li.t.back());
  check(fit.exponent <= -0.5, fmt("nu=0 max per-graph line integral: fitted slope %.4f <= -1/2 over %zu t in [100, 1e4]",
                                  fit.exponent, fit.n));
  check.note(fmt("diagnostic: max_j |int f0 dm_s| t^{1/2} stays in [%.3f, %.3f]; the prefactor depends on where the"
                 " 2pi windows fall relative to the stationary points",
                 lo, hi));

  const auto f = inviscid_field(100.0);
  const Interval I{kPi / 2 + 0.3, kPi - 0.3};
  const ImageCurve curve(f, 0.0, I);
  const double M = std::floor(std::abs(curve.X(I.hi) - curve.X(I.lo)) / kTwoPi);
  const auto n = static_cast<double>(curve.graphs().size());
  check(n == M || n == M - 1, fmt("nu=0, t=100, I=[pi/2+0.3, pi-0.3]: %zu full graphs, floor(|X range|/2pi) = %.0f",
                                  curve.graphs().size(), M));
}

void ac11(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> nus{1e-3, 1e-4, 1e-5};
  ModeField m(512, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  const auto z = ShearProfile::fourier_series({}, 1);
  const double heat = half_life(z, 1e-3, m, std::exp(-1.0));
  check.note(fmt("b = 0, threshold 1/e, nu = 1e-3: half-life %.6f (exact 1000)", heat));
  struct Case {
    int power;
    double lo, hi;
  };
  for (const Case c : {Case{1, -0.6, -0.4}, Case{3, -0.7, -0.5}}) {
    const auto b = ShearProfile::cos_power(c.power);
    const auto sw = half_life_sweep(b, nus, m, 0.01, {}, opt.threads);
    check(sw.slope >= c.lo && sw.slope <= c.hi,
          fmt("b=%s half-lives %.1f, %.1f, %.1f: slope %.4f in [%.1f, %.1f]", b.id().c_str(), sw.half_life[0],
              sw.half_life[1], sw.half_life[2], sw.slope, c.lo, c.hi));
    check.note(fmt("  half-life non-increasing in nu: %s", sw.monotone ? "yes" : "no"));
  }
  const double sec = elapsed(t0);
  check(sec < 900.0, fmt("runtime %.1f s < 900 s", sec));
}

void ac12(CriterionResult& r, const AcceptanceOptions& opt) {
  Check check{r};
  const auto b = ShearProfile::cos_power(1);
  const auto f0 = initial_data("cosx_siny");
  const PeriodicGrid2D grid(64, 64);
  const auto f0g = ScalarField::sample(grid, [&](double x, double y) { return f0.poly(x, y); });
  MCOptions mo;
  mo.master_seed = derive_seed(opt.master_seed, 3);
  mo.threads = opt.threads;
  const double nu = 1e-3, t = 8.0;
  const auto mc = estimate_solution(f0g, b, nu, t, 10000, grid, mo);
  EvolutionConfig ec;
  ec.nu = nu;
  ec.sample_times = {t};
  ec.ny = 256;
  const auto ref = synthesize(evolve_modes(initial_modes(f0, 256), b, ec).front().modes, 64);
  std::size_t within = 0;
  for (std::size_t iy = 0; iy < 64; ++iy)
    for (std::size_t ix = 0; ix < 64; ++ix)
      within += std::abs(mc.mean.at(ix, iy) - ref.at(ix, iy * 4)) <= 3.0 * mc.standard_error.at(ix, iy);
  const double frac = within / 4096.0;
  check(frac >= 0.99, fmt("MC (1e4 antithetic paths) vs spectral within 3 SE at %.2f%% of 4096 nodes", 100.0 * frac));

  ModeField m(1024, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  double worst = 0.0;
  for (double tt : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0})
    worst = std::max(worst, std::abs(length_scale(exact_inviscid_modes(m, b, tt)) - 1.0 / std::sqrt(1.0 + tt * tt / 2)));
  check(worst <= 1e-6, fmt("l(t) = (1 + t^2/2)^{-1/2} for f0 = cos x, nu = 0: max error %.2e", worst));
  const auto fl = length_scale_floor(b, 1e-4, GoodEventParams::midpoint(0.3, 1).p, m);
  check(fl.pass, fmt("nu=1e-4 window [%.0f, %.0f]: min l = %.4g >= 10 x %.4g (nu = 0)", fl.window_lo, fl.window_hi,
                     fl.min_viscous, fl.min_inviscid));
}

struct Entry {
  const char* id;
  const char* title;
  void (*fn)(CriterionResult&, const AcceptanceOptions&);
};

const Entry kEntries[] = {
    {"AC01", "inviscid mixing rate, H^-1, b = cos y", ac01},
    {"AC02", "uniform-in-nu mixing, l2_k W^-1,inf surrogate", ac02},
    {"AC03", "degenerate shear b = cos^3 y", ac03},
    {"AC04", "L^inf_x W^-1,1 surrogate decay", ac04},
    {"AC05", "good-event tail bound", ac05},
    {"AC06", "sublevel set measure and cover", ac06},
    {"AC07", "inverse-derivative integral", ac07},
    {"AC08", "zeros of S_t and S_t' near critical points", ac08},
    {"AC09", "non-stationary phase ratio, uniform in nu and k", ac09},
    {"AC10", "image-curve geometry", ac10},
    {"AC11", "enhanced dissipation exponent", ac11},
    {"AC12", "Feynman-Kac vs spectral, length scale", ac12},
};

}  // namespace

std::vector<std::string> criterion_ids() {
  std::vector<std::string> ids;
  for (const auto& e : kEntries) ids.push_back(e.id);
  return ids;
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt) {
  for (const auto& e : kEntries) {
    if (id != e.id) continue;
    CriterionResult r;
    r.id = e.id;
    r.title = e.title;
    r.pass = true;
    set_default_threads(opt.threads);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(r, opt);
    } catch (const std::exception& ex) {
      r.pass = false;
      r.details.push_back(std::string("FAIL error: ") + ex.what());
    }
    r.seconds = elapsed(t0);
    return r;
  }
  throw ConfigError("unknown criterion '" + id + "'");
}

void print_result(std::ostream& os, const CriterionResult& r) {
  os << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.title << " (" << fmt("%.1f", r.seconds) << " s)\n";
  for (const auto& d : r.details) os << "    " << d << "\n";
  os.flush();
}

}  // namespace shearmix::harness
