#include "shearmix/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

#include "json.hpp"
#include "shearmix/dissipation.hpp"
#include "shearmix/error.hpp"
#include "shearmix/fkmc.hpp"
#include "shearmix/geometry.hpp"
#include "shearmix/harness/acceptance.hpp"
#include "shearmix/harness/io.hpp"
#include "shearmix/oscillatory.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/rng.hpp"
#include "shearmix/spectral_solver.hpp"

namespace shearmix::harness {

namespace fs = std::filesystem;

std::size_t resolution_ny(const ShearProfile& b, int K, double nu, double t_max) {
  const double slope = static_cast<double>(std::max(1, K)) * b.sup_norm(1);
  double l = slope * t_max;
  if (nu > 0.0) l = std::min(l, slope * std::cbrt(120.0 / (nu * slope * slope)));
  return std::max<std::size_t>(512, next_power_of_two(static_cast<std::size_t>(std::ceil(2.5 * l + 64.0))));
}

double window_end(double nu, const GoodEventParams& params, double t_max) {
  return nu > 0.0 ? std::min(t_max, params.t_nu(nu)) : t_max;
}

namespace {

int max_wavenumber(const InitialData& f0) {
  int K = 1;
  for (const auto& t : f0.poly.terms()) K = std::max(K, std::abs(t.k));
  return K;
}

std::string nu_label(double nu) {
  if (nu == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", nu);
  return buf;
}

// Rethrows module errors with the (seed, t, nu) coordinate attached.
template <class Fn>
auto at_coordinate(std::uint64_t seed, double t, double nu, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " [seed=" + std::to_string(seed) + " t=" + format_double(t) +
                         " nu=" + format_double(nu) + "]");
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string(e.what()) + " [seed=" + std::to_string(seed) + " t=" + format_double(t) +
                          " nu=" + format_double(nu) + "]");
  }
}

}  // namespace

std::vector<NormSeries> norm_series(const ShearProfile& b, const InitialData& f0, double nu,
                                    const std::vector<double>& times, const std::vector<NormId>& ids, std::size_t ny,
                                    std::size_t nx) {
  const ModeField m0 = initial_modes(f0, ny);
  std::vector<NormSeries> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[i].id = ids[i];
    out[i].nu = nu;
    out[i].profile_id = b.id();
    out[i].f0_id = f0.id;
  }
  std::vector<std::vector<double>> values(times.size(), std::vector<double>(ids.size()));
  auto eval = [&](std::size_t ti, const ModeField& m) {
    for (std::size_t i = 0; i < ids.size(); ++i) values[ti][i] = evaluate_norm(ids[i], m, nx);
  };
  if (nu == 0.0) {
    parallel_for(times.size(), [&](std::size_t ti) { eval(ti, exact_inviscid_modes(m0, b, times[ti])); });
  } else {
    EvolutionConfig cfg;
    cfg.nu = nu;
    cfg.sample_times = times;
    cfg.max_wavenumber = max_wavenumber(f0);
    cfg.ny = ny;
    const auto snaps = evolve_modes(m0, b, cfg);
    for (std::size_t ti = 0; ti < snaps.size(); ++ti) eval(ti, snaps[ti].modes);
  }
  for (std::size_t ti = 0; ti < times.size(); ++ti)
    for (std::size_t i = 0; i < ids.size(); ++i) out[i].add(times[ti], values[ti][i]);
  return out;
}

std::vector<PhaseField> path_phase_fields(const ShearProfile& b, double nu, const GoodEventParams& params,
                                          std::uint64_t seed, const std::vector<double>& times, std::size_t ny) {
  std::vector<PhaseField> fields;
  if (nu == 0.0) {
    for (double t : times) {
      PhaseMoments m{t, std::vector<Complex>(b.bandwidth() + 1, Complex(t, 0.0)), 0.0, 0.0};
      fields.emplace_back(b, m, 0.0, seed, ny);
    }
    return fields;
  }
  const double horizon = params.t_nu(nu);
  const auto path = sample_path(seed, horizon, phase_path_steps(horizon), nu);
  for (const auto& m : phase_moments(path, nu, b.bandwidth(), times)) fields.emplace_back(b, m, nu, seed, ny);
  return fields;
}

std::vector<std::uint64_t> sweep_seeds(double nu, const GoodEventParams& params, std::size_t n,
                                       std::uint64_t master_seed) {
  if (nu == 0.0) return {0};
  const double horizon = params.t_nu(nu);
  return find_good_paths(nu, params, n, master_seed, phase_path_steps(horizon)).seeds;
}

std::vector<double> lemma_times(double nu, const GoodEventParams& params, double t_max_inviscid) {
  return dyadic_times(1.0, nu > 0.0 ? params.t_nu(nu) : t_max_inviscid, 1);
}

LemmaSweep lemma_sweep(const ShearProfile& b, const CriticalStructure& s, int N, double nu,
                       const GoodEventParams& params, double c, const std::vector<double>& times,
                       const std::vector<std::uint64_t>& seeds) {
  LemmaSweep sw;
  sw.nu = nu;
  sw.params = params;
  sw.c = c;
  sw.times = times;
  sw.seeds = seeds;
  const double rate = 1.0 / (N + 1);
  std::vector<std::vector<LemmaSample>> per(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    const auto fields = at_coordinate(seeds[i], times.back(), nu,
                                      [&] { return path_phase_fields(b, nu, params, seeds[i], times); });
    for (const auto& f : fields) {
      at_coordinate(seeds[i], f.t(), nu, [&] {
        LemmaSample x;
        x.seed = seeds[i];
        x.t = f.t();
        x.c = c;
        const auto rep = sublevel_set(f, c, N, s, params.delta);
        x.measure = rep.measure;
        x.set_measure = rep.set_measure;
        x.cover_count = rep.cover_count;
        x.stray = rep.stray_components;
        const auto inv = check_inverse_derivative_integral(f, rep);
        x.inv_deriv = inv.value;
        x.s_vanishes = inv.s_vanishes;
        x.inv_deriv_quad = inv.s_vanishes ? inv.value : inverse_derivative_quadrature(f, rep);
        for (const auto& z : count_zeros_near_critical_points(f, s, params.delta)) {
          x.zeros_s_max = std::max(x.zeros_s_max, z.zeros_s);
          x.zeros_ds_max = std::max(x.zeros_ds_max, z.zeros_ds);
        }
        x.min_s_outside = min_abs_s_outside_balls(f, s, params.delta) * std::pow(f.t(), -rate);
        per[i].push_back(x);
      });
    }
  });
  for (auto& v : per) sw.samples.insert(sw.samples.end(), v.begin(), v.end());
  return sw;
}

double calibrate_c(const ShearProfile& b, const CriticalStructure& s, int N, double nu, const GoodEventParams& params,
                   const std::vector<double>& times, const std::vector<std::uint64_t>& pilot_seeds) {
  const double rate = 1.0 / (N + 1);
  std::vector<double> mins(pilot_seeds.size(), std::numeric_limits<double>::infinity());
  parallel_for(pilot_seeds.size(), [&](std::size_t i) {
    for (const auto& f : path_phase_fields(b, nu, params, pilot_seeds[i], times))
      mins[i] = std::min(mins[i], min_abs_s_outside_balls(f, s, params.delta) * std::pow(f.t(), -rate));
  });
  const double m = *std::min_element(mins.begin(), mins.end());
  if (!(m > 0.0)) throw NumericalError("c calibration: S vanishes outside the critical balls on a pilot path");
  return 0.5 * m;
}

namespace {

using json = nlohmann::json;

class Run {
 public:
  Run(const ExperimentConfig& cfg, std::string name) : cfg_(cfg), name_(std::move(name)) {
    fs::create_directories(cfg.out_dir);
    start_ = std::chrono::steady_clock::now();
  }

  std::string file(const std::string& base) {
    files_.push_back(base);
    return (fs::path(cfg_.out_dir) / base).string();
  }

  json& extra() { return extra_; }

  void finish(int status) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["subcommand"] = name_;
    m["config_hash"] = hex64(cfg_.hash);
    m["seed"] = cfg_.master_seed;
    m["status"] = status;
    m["wall_time_s"] = wall;
    m["threads"] = resolve_threads(cfg_.threads);
    m["timestamp"] = static_cast<long long>(std::time(nullptr));
    m["versions"] = {{"shearmix", SHEARMIX_VERSION}, {"compiler", __VERSION__}, {"cxx", __cplusplus}};
    m["config"] = cfg_.canonical;
    m["artifacts"] = files_;
    if (!extra_.is_null()) m["results"] = extra_;
    std::ofstream((fs::path(cfg_.out_dir) / "manifest.json").string()) << m.dump(2) << "\n";
  }

 private:
  const ExperimentConfig& cfg_;
  std::string name_;
  std::vector<std::string> files_;
  json extra_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> window_times(const ExperimentConfig& cfg, double nu) {
  const double hi = window_end(nu, cfg.good_event(), cfg.t_max);
  if (hi <= cfg.t_min) throw ConfigError("t_nu = " + format_double(hi) + " is below t_min at nu = " + nu_label(nu));
  return dyadic_times(cfg.t_min, hi, cfg.per_octave);
}

}  // namespace

int run_mix_decay(const ExperimentConfig& cfg) {
  Run run(cfg, "mix-decay");
  const auto& b = cfg.shear;
  const double rate = 1.0 / (cfg.order + 1);
  std::vector<std::vector<NormSeries>> all(cfg.nus.size());
  parallel_for(
      cfg.nus.size(),
      [&](std::size_t i) {
        const double nu = cfg.nus[i];
        const auto times = window_times(cfg, nu);
        const std::size_t ny = cfg.ny ? cfg.ny : resolution_ny(b, max_wavenumber(cfg.f0), nu, times.back());
        all[i] = at_coordinate(cfg.master_seed, times.back(), nu,
                               [&] { return norm_series(b, cfg.f0, nu, times, cfg.norms, ny, cfg.nx); });
      },
      cfg.threads);

  CsvWriter series(run.file("norm_series.csv"), "norm_series", {"norm_id", "nu", "t", "value"}, cfg.hash);
  CsvWriter fits(run.file("fits.csv"), "fits",
                 {"norm_id", "nu", "t_min", "t_max", "n", "exponent", "constant", "r2", "envelope", "target"},
                 cfg.hash);
  std::cout << "mix-decay  b=" << b.id() << "  f0=" << cfg.f0.id << "  target exponent " << -rate << "\n";
  for (std::size_t j = 0; j < cfg.norms.size(); ++j) {
    std::vector<PlotSeries> plot;
    for (std::size_t i = 0; i < cfg.nus.size(); ++i) {
      const auto& s = all[i][j];
      for (std::size_t q = 0; q < s.t.size(); ++q)
        series.add(norm_name(s.id)).add(s.nu).add(s.t[q]).add(s.value[q]).end_row(cfg.master_seed);
      const auto fit = fit_decay_exponent(s, s.t.front(), s.t.back());
      const double env = envelope_constant(s, s.t.front(), s.t.back(), rate) / cfg.f0.l2;
      fits.add(norm_name(s.id)).add(s.nu).add(s.t.front()).add(s.t.back()).add(fit.n).add(fit.exponent);
      fits.add(fit.constant).add(fit.r2).add(env).add(-rate).end_row(cfg.master_seed);
      std::printf("  %-10s nu=%-7s exponent=%+.4f  r2=%.4f  envelope=%.4g\n", norm_name(s.id).c_str(),
                  nu_label(s.nu).c_str(), fit.exponent, fit.r2, env);
      run.extra()[norm_name(s.id)][nu_label(s.nu)] = fit.exponent;
      plot.push_back({"nu=" + nu_label(s.nu), s.t, s.value});
    }
    const auto& first = all.front()[j];
    write_loglog_svg(run.file("mix_decay_" + norm_name(cfg.norms[j]) + ".svg"),
                     norm_name(cfg.norms[j]) + " decay, b=" + b.id(), plot,
                     {-rate, first.t.front(), first.value.front(), "slope " + format_double(-rate)}, "t",
                     norm_name(cfg.norms[j]));
  }
  run.finish(0);
  return 0;
}

int run_lemma_check(const ExperimentConfig& cfg) {
  Run run(cfg, "lemma-check");
  const auto& b = cfg.shear;
  const int N = cfg.order;
  const auto params = cfg.good_event();
  const auto s = analyze_critical_structure(b);
  const double rate = 1.0 / (N + 1);
  const int m = static_cast<int>(s.points.size());

  CsvWriter rows(run.file("lemma_check.csv"), "lemma_check",
                 {"nu", "t", "c", "measure", "set_measure", "cover_count", "stray", "inv_deriv_integral",
                  "inv_deriv_quadrature", "zeros_s_max", "zeros_ds_max", "pass_cover", "pass_zeros", "pass_nonvanishing"},
                 cfg.hash);
  CsvWriter tails(run.file("tail_bound.csv"), "tail_bound",
                  {"nu", "delta", "p", "n_paths", "empirical_p", "standard_error", "exit_probability",
                   "gaussian_bound", "rate_bound", "nu0", "pass"},
                  cfg.hash);
  std::vector<PlotSeries> plot;
  int status = 0;
  for (double nu : cfg.nus) {
    const auto times = lemma_times(nu, params, cfg.t_max);
    const auto seeds = sweep_seeds(nu, params, cfg.n_paths, derive_seed(cfg.master_seed, 2));
    double c = cfg.c;
    if (cfg.c_mode == "calibrated") {
      const auto pilots = sweep_seeds(nu, params, cfg.pilot_paths, derive_seed(cfg.master_seed, 1));
      c = calibrate_c(b, s, N, nu, params, times, pilots);
    }
    const auto sw = lemma_sweep(b, s, N, nu, params, c, times, seeds);
    std::map<double, double> worst;
    std::size_t ok = 0;
    for (const auto& x : sw.samples) {
      const bool cover = x.cover_count <= m && x.stray == 0;
      const bool zeros = x.zeros_s_max <= 1 && x.zeros_ds_max <= 1;
      const bool nonvan = !x.s_vanishes;
      ok += cover && zeros && nonvan;
      rows.add(nu).add(x.t).add(x.c).add(x.measure).add(x.set_measure).add(x.cover_count).add(x.stray);
      rows.add(x.inv_deriv).add(x.inv_deriv_quad).add(x.zeros_s_max).add(x.zeros_ds_max);
      rows.add(cover).add(zeros).add(nonvan).end_row(x.seed);
      worst[x.t] = std::max(worst[x.t], x.measure);
    }
    PlotSeries ps{"nu=" + nu_label(nu), {}, {}};
    for (auto [t, v] : worst) {
      ps.x.push_back(t);
      ps.y.push_back(v);
    }
    plot.push_back(ps);
    const double frac = static_cast<double>(ok) / static_cast<double>(sw.samples.size());
    std::printf("lemma-check nu=%-7s c=%.4g paths=%zu samples=%zu pass rate %.2f%%\n", nu_label(nu).c_str(), c,
                seeds.size(), sw.samples.size(), 100.0 * frac);
    run.extra()["pass_rate"][nu_label(nu)] = frac;
    if (frac < 1.0) status = 1;
    if (nu > 0.0) {
      const auto tr = verify_tail_bound(nu, params, N, cfg.tail_paths, derive_seed(cfg.master_seed, 5));
      tails.add(nu).add(tr.delta).add(tr.p).add(tr.n_paths).add(tr.empirical_p).add(tr.standard_error);
      tails.add(tr.exit_probability).add(tr.gaussian_bound).add(tr.rate_bound).add(tr.nu0).add(tr.pass);
      tails.end_row(cfg.master_seed);
      std::printf("  tail bound: P(bad)=%.4g (exit series %.4g) gaussian bound %.4g rate bound %.4g nu0=%.3g %s\n",
                  tr.empirical_p, tr.exit_probability, tr.gaussian_bound, tr.rate_bound, tr.nu0,
                  tr.pass ? "pass" : "FAIL");
    }
  }
  if (!plot.empty() && !plot.front().x.empty())
    write_loglog_svg(run.file("sublevel_measure.svg"), "max sublevel cover measure, b=" + b.id(), plot,
                     {-rate, plot.front().x.front(), plot.front().y.front(), "slope " + format_double(-rate)}, "t",
                     "measure");
  run.finish(status);
  return status;
}

int run_fk_validate(const ExperimentConfig& cfg) {
  Run run(cfg, "fk-validate");
  const auto& b = cfg.shear;
  const PeriodicGrid2D grid(cfg.fk_grid, cfg.fk_grid);
  const auto f0 = ScalarField::sample(grid, [&](double x, double y) { return cfg.f0.poly(x, y); });
  CsvWriter nodes(run.file("fk_nodes.csv"), "fk_nodes", {"nu", "t", "x", "y", "mc", "se", "spectral", "z"}, cfg.hash);
  CsvWriter summary(run.file("fk_summary.csv"), "fk_summary", {"nu", "t", "n_paths", "fraction_within_3se", "max_abs_err"},
                    cfg.hash);
  int status = 0;
  for (double nu : cfg.nus) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, 3);
    const std::size_t n_paths = nu == 0.0 ? 1 : cfg.n_paths + (cfg.n_paths % 2);
    MCOptions opt;
    opt.master_seed = seed;
    opt.antithetic = nu > 0.0;
    opt.threads = cfg.threads;
    const auto mc = at_coordinate(seed, cfg.fk_t, nu, [&] { return estimate_solution(f0, b, nu, cfg.fk_t, n_paths, grid, opt); });

    const std::size_t ny_ref = std::max<std::size_t>(
        {256, cfg.fk_grid, resolution_ny(b, max_wavenumber(cfg.f0), nu, cfg.fk_t)});
    const ModeField m0 = initial_modes(cfg.f0, ny_ref);
    ModeField ref_modes = m0;
    if (nu == 0.0) {
      ref_modes = exact_inviscid_modes(m0, b, cfg.fk_t);
    } else {
      EvolutionConfig ec;
      ec.nu = nu;
      ec.sample_times = {cfg.fk_t};
      ec.max_wavenumber = max_wavenumber(cfg.f0);
      ec.ny = ny_ref;
      ref_modes = evolve_modes(m0, b, ec).front().modes;
    }
    const auto fine = synthesize(ref_modes, cfg.fk_grid);
    const std::size_t stride = ny_ref / cfg.fk_grid;
    std::size_t within = 0;
    double max_err = 0.0;
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double ref = fine.at(ix, iy * stride);
        const double est = mc.mean.at(ix, iy), se = mc.standard_error.at(ix, iy);
        const double err = std::abs(est - ref);
        const double z = se > 0.0 ? err / se : (err <= 1e-10 ? 0.0 : std::numeric_limits<double>::infinity());
        within += z <= 3.0;
        max_err = std::max(max_err, err);
        nodes.add(nu).add(cfg.fk_t).add(kTwoPi * ix / grid.nx).add(kTwoPi * iy / grid.ny).add(est).add(se).add(ref).add(z);
        nodes.end_row(seed);
      }
    const double frac = static_cast<double>(within) / static_cast<double>(grid.nx * grid.ny);
    summary.add(nu).add(cfg.fk_t).add(n_paths).add(frac).add(max_err).end_row(seed);
    const std::string tag = "fk_nu" + nu_label(nu);
    write_field_dump(run.file(tag + ".bin"), mc.mean, cfg.fk_t, nu, seed);
    write_field_dump(run.file(tag + ".se.bin"), mc.standard_error, cfg.fk_t, nu, seed);
    std::printf("fk-validate nu=%-7s t=%g paths=%zu within 3 SE: %.2f%%  max |err| %.3g\n", nu_label(nu).c_str(),
                cfg.fk_t, n_paths, 100.0 * frac, max_err);
    run.extra()["within_3se"][nu_label(nu)] = frac;
    if (frac < 0.99) status = 1;
  }
  run.finish(status);
  return status;
}

int run_oscillatory(const ExperimentConfig& cfg) {
  Run run(cfg, "oscillatory");
  const auto& b = cfg.shear;
  const auto params = cfg.good_event();
  const auto F = PeriodicFunction::by_name(cfg.F);
  const auto g = PeriodicFunction::by_name(cfg.g);
  CsvWriter rows(run.file("ratio_report.csv"), "ratio_report", {"nu", "k", "t", "abs_integral", "ratio", "pass"},
                 cfg.hash);
  std::vector<double> nus = cfg.nus;
  if (std::find(nus.begin(), nus.end(), 0.0) == nus.end()) nus.insert(nus.begin(), 0.0);
  std::sort(nus.begin(), nus.end());
  std::vector<IbpReport> reps;
  for (double nu : nus) {
    IbpSweep sw;
    sw.nu = nu;
    sw.ks = cfg.ks;
    sw.times = dyadic_times(1.0, nu > 0.0 ? params.t_nu(nu) : cfg.t_max, 1);
    sw.n_paths = cfg.n_paths;
    sw.params = params;
    sw.master_seed = derive_seed(cfg.master_seed, 4);
    sw.bound = reps.empty() ? 0.0 : 2.0 * reps.front().max_ratio;
    reps.push_back(verify_lemma_ibp(b, cfg.order, F, g, sw));
  }
  int status = 0;
  std::vector<PlotSeries> plot;
  for (const auto& r : reps) {
    const double nu = r.rows.empty() ? 0.0 : r.rows.front().nu;
    std::map<double, double> worst;
    for (const auto& row : r.rows) {
      rows.add(row.nu).add(row.k).add(row.t).add(row.abs_integral).add(row.ratio).add(r.pass).end_row(row.seed);
      worst[row.t] = std::max(worst[row.t], row.abs_integral);
    }
    PlotSeries ps{"nu=" + nu_label(nu), {}, {}};
    for (auto [t, v] : worst) {
      ps.x.push_back(t);
      ps.y.push_back(v);
    }
    plot.push_back(ps);
    std::printf("oscillatory nu=%-7s max ratio %.4f (bound %.4f) %s\n", nu_label(nu).c_str(), r.max_ratio, r.bound,
                r.pass ? "pass" : "FAIL");
    run.extra()["max_ratio"][nu_label(nu)] = r.max_ratio;
    if (!r.pass) status = 1;
  }
  const double rate = 1.0 / (cfg.order + 1);
  write_loglog_svg(run.file("oscillatory.svg"), "max |integral| over paths and k, F=" + F.name() + " g=" + g.name(),
                   plot, {-rate, plot.front().x.front(), plot.front().y.front(), "slope " + format_double(-rate)}, "t",
                   "|integral|");
  run.finish(status);
  return status;
}

int run_geometry(const ExperimentConfig& cfg) {
  Run run(cfg, "geometry");
  const auto& b = cfg.shear;
  const int N = cfg.order;
  const auto params = cfg.good_event();
  const auto s = analyze_critical_structure(b);
  const double rate = 1.0 / (N + 1);
  const auto g = PeriodicFunction::sine();
  const double tol_scale = cfg.f0.sup * 1.0;
  CsvWriter rows(run.file("geometry_report.csv"), "geometry_report",
                 {"nu", "t", "interval", "max_slope", "wraps", "max_line_integral", "cov_gap", "pass"}, cfg.hash);
  CsvWriter curves(run.file("curves.csv"), "curves", {"nu", "t", "interval", "y", "x_image", "y_image"}, cfg.hash);
  int status = 0;
  for (double nu : cfg.nus) {
    const auto times = dyadic_times(std::max(1.0, cfg.t_min), window_end(nu, params, cfg.t_max), 1);
    const auto seeds = sweep_seeds(nu, params, cfg.geometry_paths, derive_seed(cfg.master_seed, 6));
    std::size_t bad = 0, total = 0;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const auto fields = path_phase_fields(b, nu, params, seeds[si], times);
      for (const auto& f : fields) {
        const auto rep = sublevel_set(f, 1.0, N, s, params.delta);
        for (std::size_t ii = 0; ii < rep.complement.size(); ++ii) {
          const auto& J = rep.complement[ii];
          at_coordinate(seeds[si], f.t(), nu, [&] {
            const ImageCurve curve(f, 0.0, J);
            const double slope = curve.max_slope();
            const auto li = line_integral_mean_zero(curve, cfg.f0.poly);
            double li_max = 0.0;
            for (double v : li) li_max = std::max(li_max, std::abs(v));
            const auto cv = change_of_variables_check(curve, cfg.f0.poly, g);
            const bool pass = slope <= std::pow(f.t(), -rate) * 1.001 && cv.gap < 1e-6 * tol_scale;
            bad += !pass;
            ++total;
            rows.add(nu).add(f.t()).add(static_cast<int>(ii)).add(slope).add(curve.graphs().size()).add(li_max);
            rows.add(cv.gap).add(pass).end_row(seeds[si]);
            if (si == 0 && &f == &fields.back()) {
              const std::size_t n = 256;
              for (std::size_t q = 0; q <= n; ++q) {
                const double y = J.lo + J.length() * static_cast<double>(q) / n;
                curves.add(nu).add(f.t()).add(static_cast<int>(ii)).add(y).add(curve.X(y)).add(curve.Y(y));
                curves.end_row(seeds[si]);
              }
            }
          });
        }
      }
    }
    std::printf("geometry nu=%-7s paths=%zu curves=%zu failures=%zu\n", nu_label(nu).c_str(), seeds.size(), total, bad);
    run.extra()["failures"][nu_label(nu)] = bad;
    if (bad) status = 1;
  }
  run.finish(status);
  return status;
}

int run_dissipation(const ExperimentConfig& cfg) {
  Run run(cfg, "dissipation");
  const auto& b = cfg.shear;
  const int N = cfg.order;
  std::vector<double> nus;
  for (double nu : cfg.nus)
    if (nu > 0.0) nus.push_back(nu);
  if (nus.size() < 2) throw ConfigError("dissipation needs at least two positive nu values");
  const auto f0 = initial_modes(cfg.f0, 512);
  HalfLifeOptions opt;
  if (cfg.ny) opt.ny = cfg.ny;
  const auto sw = half_life_sweep(b, nus, f0, cfg.threshold, opt, cfg.threads);
  const double target = -static_cast<double>(N + 1) / (N + 3);
  CsvWriter rows(run.file("dissipation.csv"), "dissipation", {"nu", "N", "half_life", "fitted_slope"}, cfg.hash);
  CsvWriter cross(run.file("crossover.csv"), "crossover", {"nu", "N", "p", "margin", "holds"}, cfg.hash);
  CsvWriter floor(run.file("length_floor.csv"), "length_floor",
                  {"nu", "window_lo", "window_hi", "min_viscous", "min_inviscid", "ratio", "pass"}, cfg.hash);
  const auto params = cfg.good_event();
  for (std::size_t i = 0; i < nus.size(); ++i) {
    rows.add(nus[i]).add(N).add(sw.half_life[i]).add(sw.slope).end_row(cfg.master_seed);
    const auto cr = crossover_consistency(nus[i], N, params.p);
    cross.add(nus[i]).add(N).add(params.p).add(cr.margin).add(cr.holds).end_row(cfg.master_seed);
    const auto fl = length_scale_floor(b, nus[i], params.p, f0);
    floor.add(nus[i]).add(fl.window_lo).add(fl.window_hi).add(fl.min_viscous).add(fl.min_inviscid).add(fl.ratio);
    floor.add(fl.pass).end_row(cfg.master_seed);
    std::printf("dissipation nu=%-7s half-life %.4g  crossover margin %.3g  length floor ratio %.3g\n",
                nu_label(nus[i]).c_str(), sw.half_life[i], cr.margin, fl.ratio);
  }
  std::printf("  slope %.4f (target %.4f), monotone in nu: %s\n", sw.slope, target, sw.monotone ? "yes" : "NO");
  run.extra()["slope"] = sw.slope;
  write_loglog_svg(run.file("half_life.svg"), "half-life vs nu, b=" + b.id(), {{"half-life", sw.nu, sw.half_life}},
                   {target, sw.nu.front(), sw.half_life.front(), "slope " + format_double(target)}, "nu", "half-life");
  const int status = sw.monotone ? 0 : 1;
  run.finish(status);
  return status;
}

int run_all(const ExperimentConfig& cfg) {
  Run run(cfg, "all");
  AcceptanceOptions opt;
  opt.master_seed = cfg.master_seed;
  opt.threads = cfg.threads;
  CsvWriter rows(run.file("acceptance.csv"), "acceptance", {"id", "title", "pass", "seconds"}, cfg.hash);
  bool all_pass = true;
  for (const auto& id : criterion_ids()) {
    const auto r = run_criterion(id, opt);
    print_result(std::cout, r);
    rows.add(r.id).add(r.title).add(r.pass).add(r.seconds).end_row(cfg.master_seed);
    run.extra()[r.id] = r.pass;
    all_pass = all_pass && r.pass;
  }
  const int status = all_pass ? 0 : 1;
  run.finish(status);
  return status;
}

std::vector<std::string> subcommands() {
  return {"mix-decay", "lemma-check", "fk-validate", "oscillatory", "geometry", "dissipation", "all"};
}

int run(const std::string& sub, const ExperimentConfig& cfg) {
  set_default_threads(cfg.threads);
  if (sub == "mix-decay") return run_mix_decay(cfg);
  if (sub == "lemma-check") return run_lemma_check(cfg);
  if (sub == "fk-validate") return run_fk_validate(cfg);
  if (sub == "oscillatory") return run_oscillatory(cfg);
  if (sub == "geometry") return run_geometry(cfg);
  if (sub == "dissipation") return run_dissipation(cfg);
  if (sub == "all") return run_all(cfg);
  throw ConfigError("unknown subcommand '" + sub + "'");
}

}  // namespace shearmix::harness
