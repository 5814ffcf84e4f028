#include "shearmix/fkmc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shearmix/error.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/rng.hpp"

namespace shearmix {

std::vector<FlowMapSample> sample_flow_map(const ShearProfile& b, const BrownianPath& path, double nu, double t,
                                           const std::vector<std::pair<double, double>>& points) {
  if (t > path.horizon * (1.0 + 1e-12)) throw InvalidArgument("path horizon shorter than t");
  const auto m = phase_moments(path, nu, b.bandwidth(), {t}).front();
  const PhaseField field(b, m, nu, path.seed, 64);
  const double sigma = std::sqrt(2.0 * nu);
  std::vector<FlowMapSample> out;
  out.reserve(points.size());
  for (const auto& [x, y] : points) {
    FlowMapSample s;
    s.x = x;
    s.y = y;
    s.path_seed = path.seed;
    s.out_x = wrap_angle(x + sigma * m.b_t - field.phi_at(y));
    s.out_y = wrap_angle(y + sigma * m.w_t);
    out.push_back(s);
  }
  return out;
}

namespace {

// f0 written as sum_k g_k(y) e^{ikx} with g_k a short trig polynomial.
struct ModeTable {
  std::vector<int> ks;
  std::vector<std::vector<TrigPolynomial2D::Term>> terms;  // per k
};

ModeTable mode_table(const TrigPolynomial2D& p) {
  std::map<int, std::vector<TrigPolynomial2D::Term>> by_k;
  for (const auto& t : p.terms()) by_k[t.k].push_back(t);
  ModeTable m;
  for (auto& [k, v] : by_k) {
    m.ks.push_back(k);
    m.terms.push_back(v);
  }
  return m;
}

// Values of f0 o Phi on the grid for one path realization.
void push_forward(const ModeTable& mt, const PhaseField& field, double sigma, double w_t, double b_t,
                  const PeriodicGrid2D& grid, const std::vector<Complex>& ex, std::vector<double>& out) {
  const std::size_t nx = grid.nx, ny = grid.ny;
  const auto gy = grid.y();
  std::vector<Complex> d(mt.ks.size());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double y = gy.node(iy);
    const double Y = y + sigma * w_t;
    const double shift = sigma * b_t - field.phi_at(y);
    for (std::size_t q = 0; q < mt.ks.size(); ++q) {
      Complex g{};
      for (const auto& term : mt.terms[q]) g += term.c * std::polar(1.0, term.l * Y);
      d[q] = g * std::polar(1.0, mt.ks[q] * shift);
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
      double v = 0.0;
      for (std::size_t q = 0; q < mt.ks.size(); ++q) {
        const long k = mt.ks[q];
        const std::size_t idx = static_cast<std::size_t>(((k % static_cast<long>(nx)) + static_cast<long>(nx)) %
                                                         static_cast<long>(nx)) * nx + ix;
        v += (d[q] * ex[idx]).real();
      }
      out[iy * nx + ix] = v;
    }
  }
}

struct Moments {
  std::size_t n = 0;
  std::vector<double> mean, m2;
};

void welford_add(Moments& m, const std::vector<double>& v) {
  ++m.n;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - m.mean[i];
    m.mean[i] += d / static_cast<double>(m.n);
    m.m2[i] += d * (v[i] - m.mean[i]);
  }
}

void chan_merge(Moments& a, const Moments& b) {
  if (b.n == 0) return;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = na + nb;
  for (std::size_t i = 0; i < a.mean.size(); ++i) {
    const double d = b.mean[i] - a.mean[i];
    a.mean[i] += d * nb / n;
    a.m2[i] += b.m2[i] + d * d * na * nb / n;
  }
  a.n += b.n;
}

}  // namespace

MCEstimate estimate_solution(const ScalarField& f0, const ShearProfile& b, double nu, double t, std::size_t n_paths,
                             const PeriodicGrid2D& grid, const MCOptions& opts) {
  const bool deterministic = nu == 0.0;
  if (n_paths < 2 && !(deterministic && n_paths == 1))
    throw InvalidArgument("estimate_solution needs n_paths >= 2 (n_paths = 1 only at nu = 0)");
  const bool pair = opts.antithetic && !deterministic;
  if (pair && n_paths % 2 != 0) throw InvalidArgument("antithetic pairing needs an even n_paths");
  if (t < 0.0) throw InvalidArgument("t must be >= 0");

  const auto poly = TrigPolynomial2D::from_field(f0);
  const auto mt = mode_table(poly);
  const std::size_t nx = grid.nx, ny = grid.ny, nodes = nx * ny;
  // ex[(k mod nx) * nx + ix] = e^{ik x_ix}
  std::vector<Complex> ex(nx * nx);
  const auto gx = grid.x();
  for (int k : mt.ks) {
    const std::size_t row = static_cast<std::size_t>(((k % static_cast<long>(nx)) + static_cast<long>(nx)) %
                                                     static_cast<long>(nx));
    for (std::size_t ix = 0; ix < nx; ++ix) ex[row * nx + ix] = std::polar(1.0, k * gx.node(ix));
  }
  const double sigma = std::sqrt(2.0 * nu);
  const std::size_t samples = pair ? n_paths / 2 : n_paths;
  const std::size_t steps = phase_path_steps(std::max(t, 1e-300));
  const std::size_t phase_ny = std::max<std::size_t>(64, next_power_of_two(4 * b.bandwidth() + 8));

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(
      chunks,
      [&](std::size_t c) {
        Moments& m = parts[c];
        m.mean.assign(nodes, 0.0);
        m.m2.assign(nodes, 0.0);
        std::vector<double> v(nodes), v2(nodes);
        const std::size_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) {
          const std::uint64_t seed = derive_seed(opts.master_seed, i);
          PhaseMoments pm;
          if (deterministic || t == 0.0) {
            pm.t = t;
            pm.e.assign(b.bandwidth() + 1, Complex(t, 0.0));
          } else {
            const auto path = sample_path(seed, t, steps, nu);
            pm = phase_moments(path, nu, b.bandwidth(), {t}).front();
          }
          const PhaseField field(b, pm, nu, seed, phase_ny);
          push_forward(mt, field, sigma, pm.w_t, pm.b_t, grid, ex, v);
          if (pair) {
            // The mirrored path has conjugate moments and negated endpoints.
            PhaseMoments am = pm;
            for (auto& e : am.e) e = std::conj(e);
            am.w_t = -pm.w_t;
            am.b_t = -pm.b_t;
            const PhaseField anti(b, am, nu, seed, phase_ny);
            push_forward(mt, anti, sigma, am.w_t, am.b_t, grid, ex, v2);
            for (std::size_t q = 0; q < nodes; ++q) v[q] = 0.5 * (v[q] + v2[q]);
          }
          welford_add(m, v);
        }
      },
      opts.threads);

  Moments total;
  total.mean.assign(nodes, 0.0);
  total.m2.assign(nodes, 0.0);
  for (const auto& p : parts) chan_merge(total, p);

  MCEstimate est{ScalarField(grid), ScalarField(grid), n_paths};
  est.mean.values = total.mean;
  const double n = static_cast<double>(total.n);
  for (std::size_t q = 0; q < nodes; ++q)
    est.standard_error.values[q] = total.n > 1 ? std::sqrt(total.m2[q] / (n - 1.0) / n) : 0.0;
  return est;
}

double chi2_quantile(std::size_t dof, double z) {
  const double k = static_cast<double>(dof);
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3);
}

UniformityReport measure_preservation_chi2(const ShearProfile& b, const BrownianPath& path, double nu, double t,
                                           std::size_t n_points, std::size_t bins, std::uint64_t seed) {
  if (bins < 2 || n_points < bins * bins * 5) throw InvalidArgument("too few points for the chi-square test");
  UniformStream u(seed);
  std::vector<std::pair<double, double>> pts(n_points);
  for (auto& p : pts) {
    p.first = kTwoPi * u();
    p.second = kTwoPi * u();
  }
  const auto mapped = sample_flow_map(b, path, nu, t, pts);
  std::vector<std::size_t> counts(bins * bins, 0);
  const double w = kTwoPi / static_cast<double>(bins);
  for (const auto& s : mapped) {
    const auto ix = std::min(bins - 1, static_cast<std::size_t>(s.out_x / w));
    const auto iy = std::min(bins - 1, static_cast<std::size_t>(s.out_y / w));
    ++counts[iy * bins + ix];
  }
  const double expected = static_cast<double>(n_points) / static_cast<double>(bins * bins);
  UniformityReport r;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    r.statistic += d * d / expected;
  }
  r.dof = bins * bins - 1;
  r.quantile_999 = chi2_quantile(r.dof, 3.090232306167813);
  r.pass = r.statistic <= r.quantile_999;
  return r;
}

}  // namespace shearmix
