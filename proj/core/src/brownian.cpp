#include "shearmix/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearmix/error.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/rng.hpp"

namespace shearmix {

double BrownianPath::sigma() const { return std::sqrt(2.0 * nu); }

namespace {

double interp(const std::vector<double>& v, double dt, double s) {
  if (s <= 0.0) return v.front();
  const double u = s / dt;
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= v.size() - 1) return v.back();
  const double f = u - static_cast<double>(i);
  return v[i] + f * (v[i + 1] - v[i]);
}

}  // namespace

double BrownianPath::w_at(double s) const { return interp(w, dt(), s); }
double BrownianPath::b_at(double s) const { return interp(b, dt(), s); }

BrownianPath sample_path(std::uint64_t seed, double horizon, std::size_t steps, double nu) {
  if (steps < 2) throw InvalidArgument("a path needs at least 2 steps");
  if (!(horizon > 0.0)) throw InvalidArgument("path horizon must be positive");
  BrownianPath p;
  p.horizon = horizon;
  p.steps = steps;
  p.seed = seed;
  p.nu = nu;
  p.w.resize(steps + 1);
  p.b.resize(steps + 1);
  const double sd = std::sqrt(horizon / static_cast<double>(steps));
  NormalStream zw(derive_seed(seed, 0)), zb(derive_seed(seed, 1));
  p.w[0] = p.b[0] = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) p.w[i] = p.w[i - 1] + sd * zw();
  for (std::size_t i = 1; i <= steps; ++i) p.b[i] = p.b[i - 1] + sd * zb();
  return p;
}

BrownianPath antithetic(const BrownianPath& p) {
  BrownianPath q = p;
  for (auto& v : q.w) v = -v;
  for (auto& v : q.b) v = -v;
  return q;
}

std::size_t phase_path_steps(double horizon) {
  const double ds = std::min(0.01, horizon / 2048.0);
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(horizon / ds - 1e-9)));
}

GoodEventParams GoodEventParams::midpoint(double delta, int N) {
  const double lo = (N + 1.0) / (N + 3.0);
  return {delta, 0.5 * (lo + 1.0)};
}

double GoodEventParams::t_nu(double nu) const {
  if (nu <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(nu, -p);
}

void GoodEventParams::validate(int N) const {
  const double lo = (N + 1.0) / (N + 3.0);
  if (!(p > lo && p < 1.0))
    throw InvalidArgument("p = " + std::to_string(p) + " outside ((N+1)/(N+3), 1) = (" + std::to_string(lo) +
                          ", 1)");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be non-negative");
}

void GoodEventParams::validate(const CriticalStructure& s) const {
  validate(s.max_order);
  check_delta_separation(s, delta);
}

bool classify_good_event(const BrownianPath& path, const GoodEventParams& params, double nu) {
  if (nu == 0.0) return true;
  const double tn = params.t_nu(nu);
  if (path.horizon < tn * (1.0 - 1e-12)) throw InvalidArgument("path horizon shorter than t_nu");
  const double sigma = std::sqrt(2.0 * nu);
  const double dt = path.dt();
  for (std::size_t i = 0; i <= path.steps; ++i) {
    if (dt * static_cast<double>(i) > tn * (1.0 + 1e-12)) break;
    if (sigma * std::abs(path.w[i]) > params.delta) return false;
  }
  return true;
}

double running_sup_abs(std::uint64_t seed, double horizon, std::size_t steps, double t_stop, double abort_above) {
  const double dt = horizon / static_cast<double>(steps);
  const double sd = std::sqrt(dt);
  NormalStream zw(derive_seed(seed, 0));
  double w = 0.0, sup = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    if (dt * static_cast<double>(i) > t_stop * (1.0 + 1e-12)) break;
    w += sd * zw();
    sup = std::max(sup, std::abs(w));
    if (sup > abort_above) break;
  }
  return sup;
}

bool good_event_streaming(std::uint64_t seed, double horizon, std::size_t steps, const GoodEventParams& params,
                          double nu) {
  if (nu == 0.0) return true;
  const double tn = params.t_nu(nu);
  if (horizon < tn * (1.0 - 1e-12)) throw InvalidArgument("path horizon shorter than t_nu");
  const double sigma = std::sqrt(2.0 * nu);
  // Compare in the same scaled form as classify_good_event.
  const double dt = horizon / static_cast<double>(steps);
  const double sd = std::sqrt(dt);
  NormalStream zw(derive_seed(seed, 0));
  double w = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    if (dt * static_cast<double>(i) > tn * (1.0 + 1e-12)) break;
    w += sd * zw();
    if (sigma * std::abs(w) > params.delta) return false;
  }
  return params.delta >= 0.0;
}

GoodPathSearch find_good_paths(double nu, const GoodEventParams& params, std::size_t n_good,
                               std::uint64_t master_seed, std::size_t steps, std::size_t max_tries) {
  GoodPathSearch out;
  if (n_good == 0) return out;
  if (nu == 0.0) {
    for (std::size_t i = 0; i < n_good; ++i) out.seeds.push_back(derive_seed(master_seed, i));
    out.tried = n_good;
    return out;
  }
  const double tn = params.t_nu(nu);
  constexpr std::size_t kBlock = 256;
  std::vector<char> good(kBlock);
  for (std::size_t base = 0; base < max_tries && out.seeds.size() < n_good; base += kBlock) {
    parallel_for(kBlock, [&](std::size_t j) {
      good[j] = good_event_streaming(derive_seed(master_seed, base + j), tn, steps, params, nu) ? 1 : 0;
    });
    for (std::size_t j = 0; j < kBlock && out.seeds.size() < n_good; ++j) {
      out.tried = base + j + 1;
      if (good[j]) out.seeds.push_back(derive_seed(master_seed, base + j));
    }
  }
  if (out.seeds.size() < n_good)
    throw NumericalError("only " + std::to_string(out.seeds.size()) + " good paths in " + std::to_string(max_tries) +
                         " tries at nu = " + std::to_string(nu));
  return out;
}

double gaussian_upper_tail(double a) { return 0.5 * std::erfc(a / std::sqrt(2.0)); }

double two_sided_exit_probability(double a, double T) {
  if (a <= 0.0) return 1.0;
  const double u = a / std::sqrt(T);
  if (u > 1.0) {
    double s = 0.0;
    for (int j = 0; j < 50; ++j) {
      const double term = 4.0 * gaussian_upper_tail((2 * j + 1) * u);
      s += (j % 2 == 0) ? term : -term;
      if (term < 1e-300) break;
    }
    return std::clamp(s, 0.0, 1.0);
  }
  // Eigenfunction series for the survival probability.
  double stay = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double m = 2 * j + 1;
    const double term = 4.0 / (kPi * m) * std::exp(-m * m * kPi * kPi / (8.0 * u * u));
    stay += (j % 2 == 0) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(1.0 - stay, 0.0, 1.0);
}

double find_nu0(const GoodEventParams& params, int N) {
  // margin(nu) = log P_exit(t_nu) - log t_nu^{-1/(N+1)}, negative for small nu.
  auto margin = [&](double log_nu) {
    const double nu = std::exp(log_nu);
    const double tn = params.t_nu(nu);
    const double pe = two_sided_exit_probability(params.delta, 2.0 * nu * tn);
    const double rate = std::pow(tn, -1.0 / (N + 1));
    if (pe <= 0.0) return -1e300;
    return std::log(pe) - std::log(rate);
  };
  // At nu = 1 the bound is 1 and holds trivially, so scan up from tiny nu
  // for the first failure instead of bisecting on [tiny, 1].
  double lo = std::log(1e-300);
  if (margin(lo) > 0.0) return 0.0;
  double hi = 0.0;
  bool found = false;
  for (double x = lo; x < 0.0 && !found; x += 0.25 * std::log(10.0)) {
    if (margin(x) > 0.0) {
      hi = x;
      found = true;
    } else {
      lo = x;
    }
  }
  if (!found) return 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) <= 0.0) lo = mid; else hi = mid;
  }
  return std::exp(lo);
}

TailReport verify_tail_bound(double nu, const GoodEventParams& params, int N, std::size_t n_paths,
                             std::uint64_t master_seed, std::size_t steps, double C) {
  if (!(nu > 0.0)) throw InvalidArgument("tail bound needs nu > 0");
  TailReport r;
  r.nu = nu;
  r.delta = params.delta;
  r.p = params.p;
  r.order = N;
  r.n_paths = n_paths;
  r.steps = steps;
  r.t_nu = params.t_nu(nu);
  // Blocks of fixed size keep the count independent of the thread layout.
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<std::size_t> bad(blocks, 0);
  parallel_for(blocks, [&](std::size_t blk) {
    const std::size_t lo = blk * kBlock, hi = std::min(n_paths, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i)
      if (!good_event_streaming(derive_seed(master_seed, i), r.t_nu, steps, params, nu)) ++bad[blk];
  });
  std::size_t total = 0;
  for (auto b : bad) total += b;
  const double ph = static_cast<double>(total) / static_cast<double>(n_paths);
  r.empirical_p = ph;
  r.standard_error = std::sqrt(ph * (1.0 - ph) / static_cast<double>(n_paths));
  const double sigma = std::sqrt(2.0 * nu * r.t_nu);
  r.reflection_lower = 2.0 * gaussian_upper_tail(params.delta / sigma);
  r.reflection_upper = 4.0 * gaussian_upper_tail(params.delta / sigma);
  r.exit_probability = two_sided_exit_probability(params.delta, sigma * sigma);
  r.gaussian_bound = C * std::exp(-params.delta * params.delta / (8.0 * std::pow(nu, 1.0 - params.p)));
  r.rate_bound = std::pow(r.t_nu, -1.0 / (N + 1));
  r.nu0 = find_nu0(params, N);
  r.within_reflection_bracket = ph >= r.reflection_lower && ph <= r.reflection_upper;
  r.below_gaussian_bound = ph <= r.gaussian_bound;
  r.below_rate_bound = ph <= r.rate_bound;
  r.pass = r.below_gaussian_bound && (nu > r.nu0 || r.below_rate_bound);
  return r;
}

std::vector<double> bad_probability_curve(double nu, double p, const std::vector<double>& deltas,
                                          std::size_t n_paths, std::uint64_t master_seed, std::size_t steps) {
  const double tn = std::pow(nu, -p);
  const double sigma = std::sqrt(2.0 * nu);
  double dmax = 0.0;
  for (double d : deltas) dmax = std::max(dmax, d);
  std::vector<double> sups(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    sups[i] = sigma * running_sup_abs(derive_seed(master_seed, i), tn, steps, tn, dmax / sigma);
  });
  std::vector<double> out;
  for (double d : deltas) {
    std::size_t bad = 0;
    for (double s : sups) bad += s > d ? 1 : 0;
    out.push_back(static_cast<double>(bad) / static_cast<double>(n_paths));
  }
  return out;
}

}  // namespace shearmix
