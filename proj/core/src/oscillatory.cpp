#include "shearmix/oscillatory.hpp"

#include <algorithm>
#include <cmath>

#include "shearmix/error.hpp"
#include "shearmix/parallel.hpp"

namespace shearmix {

PeriodicFunction::PeriodicFunction(std::string name, std::function<double(double)> value,
                                   std::function<double(double)> derivative)
    : name_(std::move(name)), value_(std::move(value)), derivative_(std::move(derivative)) {
  constexpr std::size_t n = 16384;
  double a = 0.0, b = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = kTwoPi * static_cast<double>(j) / n;
    const double v = std::abs(value_(y)), d = std::abs(derivative_(y));
    a += v;
    b += d;
    sa = std::max(sa, v);
    sb = std::max(sb, d);
  }
  w11_ = (a + b) / n;
  w1inf_ = sa + sb;
}

PeriodicFunction PeriodicFunction::one() {
  return {"one", [](double) { return 1.0; }, [](double) { return 0.0; }};
}

PeriodicFunction PeriodicFunction::sine() {
  return {"sin", [](double y) { return std::sin(y); }, [](double y) { return std::cos(y); }};
}

PeriodicFunction PeriodicFunction::smoothed_sawtooth() {
  // Sawtooth series with a Gaussian taper on the coefficients.
  constexpr int terms = 24;
  auto coef = [](int n) { return (n % 2 == 1 ? 1.0 : -1.0) / n * std::exp(-std::pow(n / 8.0, 2)); };
  return {"sawtooth",
          [=](double y) {
            double s = 0.0;
            for (int n = 1; n <= terms; ++n) s += coef(n) * std::sin(n * y);
            return s;
          },
          [=](double y) {
            double s = 0.0;
            for (int n = 1; n <= terms; ++n) s += coef(n) * n * std::cos(n * y);
            return s;
          }};
}

PeriodicFunction PeriodicFunction::bump() {
  // exp(-1/(1-u^2)) with u = (y - pi)/a on |u| < 1.
  constexpr double a = 1.0;
  return {"bump",
          [=](double y) {
            const double u = (wrap_angle(y) - kPi) / a;
            return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
          },
          [=](double y) {
            const double u = (wrap_angle(y) - kPi) / a;
            if (std::abs(u) >= 1.0) return 0.0;
            const double q = 1.0 - u * u;
            return std::exp(1.0 - 1.0 / q) * (-2.0 * u / (q * q)) / a;
          }};
}

PeriodicFunction PeriodicFunction::by_name(const std::string& name) {
  if (name == "one") return one();
  if (name == "sin") return sine();
  if (name == "sawtooth") return smoothed_sawtooth();
  if (name == "bump") return bump();
  throw InvalidArgument("unknown test function '" + name + "'");
}

PeriodicFunction PeriodicFunction::scaled(double lambda) const {
  auto v = value_;
  auto d = derivative_;
  return {name_ + "*" + std::to_string(lambda), [=](double y) { return lambda * v(y); },
          [=](double y) { return lambda * d(y); }};
}

namespace {

constexpr double kCauchyTol = 1e-8;
constexpr std::size_t kMaxNodes = std::size_t{1} << 24;

// Doubles n until successive rectangle-rule values agree.
template <class PhaseOnGrid>
QuadratureResult refine(std::size_t n0, PhaseOnGrid&& phase, const PeriodicFunction& g, const PeriodicFunction& h,
                        int k) {
  auto rule = [&](std::size_t n) {
    const auto ph = phase(n);
    Complex s{};
    for (std::size_t j = 0; j < n; ++j) {
      const double y = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
      const double w = g(y) * h(y);
      if (w != 0.0) s += w * std::polar(1.0, -k * ph[j]);
    }
    return s * (kTwoPi / static_cast<double>(n));
  };
  std::size_t n = n0;
  Complex prev = rule(n);
  for (;;) {
    if (2 * n > kMaxNodes)
      throw NumericalError("oscillatory quadrature failed to resolve within " + std::to_string(kMaxNodes) + " nodes");
    const Complex next = rule(2 * n);
    const double gap = std::abs(next - prev);
    n *= 2;
    if (gap < kCauchyTol) return {next, n, gap};
    prev = next;
  }
}

std::size_t start_nodes(double max_freq) {
  return next_power_of_two(static_cast<std::size_t>(std::ceil(1.25 * max_freq)) + 64);
}

}  // namespace

QuadratureResult deterministic_integral(const ShearProfile& b, int k, double t, const PeriodicFunction& g,
                                        const PeriodicFunction& h) {
  if (k == 0) throw InvalidArgument("oscillatory integrals exclude k = 0");
  const double kt = std::abs(k) * std::abs(t);
  // Resolution floor: n >= 8 k |b|_inf t / 2pi, and the local frequency k t |b'|.
  const double floor_nodes = std::max(8.0 * kt * b.sup_norm(0) / kTwoPi, 1.25 * kt * b.sup_norm(1));
  const std::size_t n0 = start_nodes(floor_nodes);
  return refine(
      n0,
      [&](std::size_t n) {
        std::vector<double> ph(n);
        for (std::size_t j = 0; j < n; ++j) ph[j] = t * b.evaluate(kTwoPi * static_cast<double>(j) / n);
        return ph;
      },
      g, h, k);
}

QuadratureResult stochastic_integral(const PhaseField& field, int k, const PeriodicFunction& F,
                                     const PeriodicFunction& g) {
  if (k == 0) throw InvalidArgument("oscillatory integrals exclude k = 0");
  const double freq = std::abs(k) * field.max_abs_s();
  const std::size_t n0 = std::max(start_nodes(freq), next_power_of_two(4 * field.bandwidth() + 4));
  return refine(n0, [&](std::size_t n) { return field.phi_grid(n); }, F, g, k);
}

IbpReport verify_lemma_ibp(const ShearProfile& b, int N, const PeriodicFunction& F, const PeriodicFunction& g,
                           const IbpSweep& sw) {
  for (int k : sw.ks)
    if (k == 0) throw InvalidArgument("oscillatory integrals exclude k = 0");
  IbpReport rep;
  rep.bound = sw.bound;
  const double norm = F.w11_norm() * g.w11_norm();
  const double rate = 1.0 / (N + 1);
  std::vector<std::uint64_t> seeds;
  double horizon = 0.0;
  std::size_t steps = 0;
  if (sw.nu == 0.0) {
    seeds = {0};
  } else {
    horizon = sw.params.t_nu(sw.nu);
    for (double t : sw.times)
      if (t > horizon * (1.0 + 1e-12)) throw InvalidArgument("lemma sweep times must lie in [1, t_nu]");
    steps = phase_path_steps(horizon);
    auto found = find_good_paths(sw.nu, sw.params, sw.n_paths, sw.master_seed, steps);
    seeds = std::move(found.seeds);
    rep.paths_tried = found.tried;
  }
  std::vector<std::vector<IbpRow>> per_path(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    std::vector<PhaseMoments> moments;
    if (sw.nu == 0.0) {
      for (double t : sw.times) moments.push_back({t, std::vector<Complex>(b.bandwidth() + 1, Complex(t, 0.0)), 0, 0});
    } else {
      moments = phase_moments(sample_path(seeds[i], horizon, steps, sw.nu), sw.nu, b.bandwidth(), sw.times);
    }
    for (const auto& m : moments) {
      const PhaseField field(b, m, sw.nu, seeds[i], 64);
      for (int k : sw.ks) {
        const auto q = stochastic_integral(field, k, F, g);
        IbpRow r;
        r.seed = seeds[i];
        r.nu = sw.nu;
        r.k = k;
        r.t = m.t;
        r.abs_integral = std::abs(q.value);
        r.ratio = r.abs_integral * std::pow(m.t, rate) / norm;
        per_path[i].push_back(r);
      }
    }
  });
  for (auto& v : per_path)
    for (auto& r : v) {
      rep.max_ratio = std::max(rep.max_ratio, r.ratio);
      rep.rows.push_back(r);
    }
  rep.pass = sw.bound <= 0.0 || rep.max_ratio <= sw.bound;
  return rep;
}

}  // namespace shearmix
