#include "shearmix/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "shearmix/error.hpp"

namespace shearmix {

std::string norm_name(NormId id) {
  switch (id) {
    case NormId::Hminus1: return "Hminus1";
    case NormId::L2: return "L2";
    case NormId::L2kW11: return "L2kW11";
    case NormId::L2kWm1inf: return "L2kWm1inf";
    case NormId::LinfW1inf: return "LinfW1inf";
    case NormId::LinfWm11: return "LinfWm11";
    case NormId::LengthScale: return "LengthScale";
  }
  return "?";
}

NormId parse_norm(const std::string& name) {
  for (auto id : {NormId::Hminus1, NormId::L2, NormId::L2kW11, NormId::L2kWm1inf, NormId::LinfW1inf,
                  NormId::LinfWm11, NormId::LengthScale})
    if (norm_name(id) == name) return id;
  throw InvalidArgument("unknown norm id '" + name + "'");
}

namespace {

std::vector<Complex> y_coefficients(std::span<const Complex> fk) {
  std::vector<Complex> a(fk.begin(), fk.end());
  Fft1D fft(a.size());
  fft.forward(a);
  for (auto& v : a) v /= static_cast<double>(a.size());
  return a;
}

double mean_abs(std::span<const Complex> v) {
  double s = 0.0;
  for (auto z : v) s += std::abs(z);
  return s / static_cast<double>(v.size());
}

}  // namespace

double h_minus1(const ModeField& f) {
  double s = 0.0, zero = 0.0, scale = 0.0;
  for (int k : f.active_wavenumbers()) {
    const auto a = y_coefficients(f.mode(k));
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double l = static_cast<double>(wavenumber(j, a.size()));
      const double w = static_cast<double>(k) * k + l * l;
      scale = std::max(scale, std::abs(a[j]));
      if (w == 0.0) {
        zero = std::abs(a[j]);
        continue;
      }
      s += std::norm(a[j]) / w;
    }
  }
  if (zero > 1e-10 * std::max(scale, 1e-300) && zero > 1e-14)
    throw InvalidArgument("H^-1 norm needs a field with zero total mean");
  return std::sqrt(s);
}

double h_minus1(const ScalarField& f) { return h_minus1(analyze(f)); }

double l2(const ModeField& f) {
  double s = 0.0;
  for (int k : f.active_wavenumbers())
    for (auto v : f.mode(k)) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(f.ny));
}

double l2(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s / static_cast<double>(f.values.size()));
}

double w11_profile(std::span<const Complex> fk) {
  const auto d = spectral_derivative(fk, 1);
  return mean_abs(fk) + mean_abs(d);
}

double l2k_w11(const ModeField& f) {
  double s = 0.0;
  for (int k : f.active_wavenumbers()) {
    const double v = w11_profile(f.mode(k));
    s += v * v;
  }
  return std::sqrt(s);
}

double l2k_w11(const ScalarField& f) { return l2k_w11(analyze(f)); }

namespace {

struct Circle {
  Complex c;
  double r;
  bool contains(Complex p) const { return std::abs(p - c) <= r * (1.0 + 1e-12) + 1e-300; }
};

Circle from2(Complex a, Complex b) { return {(a + b) / 2.0, std::abs(a - b) / 2.0}; }

Circle from3(Complex a, Complex b, Complex c) {
  const Complex ab = b - a, ac = c - a;
  const double d = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
  if (std::abs(d) < 1e-300) {
    // Collinear: the widest pair spans the circle.
    Circle best = from2(a, b);
    for (const Circle& cand : {from2(a, c), from2(b, c)})
      if (cand.r > best.r) best = cand;
    return best;
  }
  const double nb = std::norm(ab), nc = std::norm(ac);
  const Complex o((ac.imag() * nb - ab.imag() * nc) / d, (ab.real() * nc - ac.real() * nb) / d);
  return {a + o, std::abs(o)};
}

}  // namespace

double enclosing_radius(std::span<const Complex> in) {
  if (in.empty()) return 0.0;
  std::vector<Complex> p(in.begin(), in.end());
  std::mt19937_64 rng(0x5eed5eedULL);
  std::shuffle(p.begin(), p.end(), rng);
  Circle c{p[0], 0.0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (c.contains(p[i])) continue;
    c = {p[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(p[j])) continue;
      c = from2(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!c.contains(p[k])) c = from3(p[i], p[j], p[k]);
    }
  }
  return c.r;
}

double wm1inf_profile(std::span<const Complex> fk) {
  Complex mean{};
  for (auto v : fk) mean += v;
  mean /= static_cast<double>(fk.size());
  std::vector<Complex> fl(fk.begin(), fk.end());
  for (auto& v : fl) v -= mean;
  const auto prim = periodic_primitive(std::span<const Complex>(fl));
  return std::abs(mean) + enclosing_radius(prim);
}

double l2k_wm1inf_surrogate(const ModeField& f) {
  double s = 0.0;
  for (int k : f.active_wavenumbers()) {
    const double v = wm1inf_profile(f.mode(k));
    s += v * v;
  }
  return std::sqrt(s);
}

double l2k_wm1inf_surrogate(const ScalarField& f) { return l2k_wm1inf_surrogate(analyze(f)); }

namespace {

// int_0^1 |p(u)| du for the cubic Hermite p through (g0, d0), (g1, d1) with
// derivatives given per unit of u.
double abs_hermite_integral(double g0, double d0, double g1, double d1) {
  // p(u) = a + b u + c u^2 + e u^3
  const double a = g0, b = d0;
  const double c = 3.0 * (g1 - g0) - 2.0 * d0 - d1;
  const double e = 2.0 * (g0 - g1) + d0 + d1;
  auto p = [&](double u) { return a + u * (b + u * (c + u * e)); };
  auto P = [&](double u) { return u * (a + u * (b / 2.0 + u * (c / 3.0 + u * e / 4.0))); };
  std::vector<double> cuts{0.0};
  // Monotone pieces split at the critical points of p.
  const double qa = 3.0 * e, qb = 2.0 * c, qc = b;
  std::vector<double> crit;
  if (std::abs(qa) > 1e-300) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      crit = {(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)};
    }
  } else if (std::abs(qb) > 1e-300) {
    crit = {-qc / qb};
  }
  std::sort(crit.begin(), crit.end());
  std::vector<double> knots{0.0};
  for (double u : crit)
    if (u > 0.0 && u < 1.0) knots.push_back(u);
  knots.push_back(1.0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = knots[i], hi = knots[i + 1];
    if ((p(lo) < 0.0) != (p(hi) < 0.0)) {
      const bool neg_lo = p(lo) < 0.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((p(mid) < 0.0) == neg_lo) lo = mid; else hi = mid;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
  }
  cuts.push_back(1.0);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += std::abs(P(cuts[i + 1]) - P(cuts[i]));
  return s;
}

}  // namespace

double wm11_column(std::span<const double> column) {
  const std::size_t n = column.size();
  const double h = kTwoPi / static_cast<double>(n);
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(n);
  std::vector<double> fl(column.begin(), column.end());
  for (auto& v : fl) v -= mean;
  auto prim = periodic_primitive(fl, Centering::MeanZero);
  std::vector<double> sorted = prim;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double med = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
    med = 0.5 * (med + lower);
  }
  // Trapezoid with the per-cell Euler-Maclaurin term on cells where P - med
  // keeps its sign (these telescope over smooth stretches), and an exact
  // cubic Hermite integral of |P - med| on cells containing a crossing.
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    const double g0 = prim[j] - med, g1 = prim[k] - med;
    if ((g0 < 0.0) == (g1 < 0.0)) {
      const double sg = g0 < 0.0 ? -1.0 : 1.0;
      s += 0.5 * h * (std::abs(g0) + std::abs(g1)) - h * h / 12.0 * sg * (fl[k] - fl[j]);
    } else {
      s += h * abs_hermite_integral(g0, h * fl[j], g1, h * fl[k]);
    }
  }
  return std::abs(mean) + s / kTwoPi;
}

namespace {

// Calls fn(column) for each physical x column of a mode field.
template <class Fn>
void for_each_column(const ModeField& f, std::size_t nx, Fn&& fn) {
  const auto ks = f.active_wavenumbers();
  std::vector<double> col(f.ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double x = kTwoPi * static_cast<double>(ix) / static_cast<double>(nx);
    std::fill(col.begin(), col.end(), 0.0);
    for (int k : ks) {
      const Complex e = std::polar(1.0, k * x);
      const auto m = f.mode(k);
      for (std::size_t j = 0; j < f.ny; ++j) col[j] += (m[j] * e).real();
    }
    fn(std::span<const double>(col));
  }
}

template <class Fn>
void for_each_column(const ScalarField& f, Fn&& fn) {
  std::vector<double> col(f.grid.ny);
  for (std::size_t ix = 0; ix < f.grid.nx; ++ix) {
    for (std::size_t iy = 0; iy < f.grid.ny; ++iy) col[iy] = f.at(ix, iy);
    fn(std::span<const double>(col));
  }
}

double w1inf_column(std::span<const double> col) {
  const auto d = spectral_derivative(col, 1);
  double a = 0.0, b = 0.0;
  for (double v : col) a = std::max(a, std::abs(v));
  for (double v : d) b = std::max(b, std::abs(v));
  return a + b;
}

}  // namespace

double linf_w1inf(const ScalarField& f) {
  double m = 0.0;
  for_each_column(f, [&](std::span<const double> c) { m = std::max(m, w1inf_column(c)); });
  return m;
}

double linf_w1inf(const ModeField& f, std::size_t nx) {
  double m = 0.0;
  for_each_column(f, nx, [&](std::span<const double> c) { m = std::max(m, w1inf_column(c)); });
  return m;
}

double linf_wm11_surrogate(const ScalarField& f) {
  double m = 0.0;
  for_each_column(f, [&](std::span<const double> c) { m = std::max(m, wm11_column(c)); });
  return m;
}

double linf_wm11_surrogate(const ModeField& f, std::size_t nx) {
  double m = 0.0;
  for_each_column(f, nx, [&](std::span<const double> c) { m = std::max(m, wm11_column(c)); });
  return m;
}

double length_scale(const ModeField& f) {
  double num = 0.0, den = 0.0;
  for (int k : f.active_wavenumbers()) {
    const auto a = y_coefficients(f.mode(k));
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double l = static_cast<double>(wavenumber(j, a.size()));
      num += std::norm(a[j]);
      den += (static_cast<double>(k) * k + l * l) * std::norm(a[j]);
    }
  }
  if (!(den > 1e-28 * std::max(num, 1e-300)) || den == 0.0)
    throw InvalidArgument("length scale undefined for a field with zero gradient");
  return std::sqrt(num / den);
}

double length_scale(const ScalarField& f) { return length_scale(analyze(f)); }

double evaluate_norm(NormId id, const ModeField& f, std::size_t nx) {
  switch (id) {
    case NormId::Hminus1: return h_minus1(f);
    case NormId::L2: return l2(f);
    case NormId::L2kW11: return l2k_w11(f);
    case NormId::L2kWm1inf: return l2k_wm1inf_surrogate(f);
    case NormId::LinfW1inf: return linf_w1inf(f, nx);
    case NormId::LinfWm11: return linf_wm11_surrogate(f, nx);
    case NormId::LengthScale: return length_scale(f);
  }
  throw InvalidArgument("unknown norm id");
}

Complex pairing(const ModeField& f, const ModeField& g) {
  if (f.ny != g.ny) throw InvalidArgument("pairing needs equal y grids");
  Complex s{};
  for (int k : f.active_wavenumbers()) {
    if (k < -g.max_wavenumber || k > g.max_wavenumber || !g.active(k)) continue;
    const auto a = f.mode(k), b = g.mode(k);
    for (std::size_t j = 0; j < f.ny; ++j) s += a[j] * std::conj(b[j]);
  }
  return s / static_cast<double>(f.ny);
}

double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

void NormSeries::add(double time, double v) {
  if (!t.empty() && time <= t.back()) throw InvalidArgument("norm series times must increase");
  if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("norm series values must be finite and >= 0");
  t.push_back(time);
  value.push_back(v);
}

DecayFit fit_decay_exponent(const NormSeries& s, double t_min, double t_max) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_min * (1.0 - 1e-12) || s.t[i] > t_max * (1.0 + 1e-12)) continue;
    if (!(s.value[i] > 0.0)) throw InvalidArgument("decay fit needs positive values");
    lx.push_back(std::log(s.t[i]));
    ly.push_back(std::log(s.value[i]));
  }
  if (lx.size() < 5) throw InvalidArgument("decay fit needs at least 5 samples in the window");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  DecayFit f;
  f.n = lx.size();
  f.exponent = sxy / sxx;
  f.constant = std::exp(my - f.exponent * mx);
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double envelope_constant(const NormSeries& s, double t_min, double t_max, double rate) {
  double c = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_min * (1.0 - 1e-12) || s.t[i] > t_max * (1.0 + 1e-12)) continue;
    c = std::max(c, s.value[i] * std::pow(japanese_bracket(s.t[i]), rate));
    any = true;
  }
  if (!any) throw InvalidArgument("no samples in the envelope window");
  return c;
}

}  // namespace shearmix
