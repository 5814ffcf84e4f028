#include "shearmix/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearmix/error.hpp"

namespace shearmix {

std::vector<PhaseMoments> phase_moments(const BrownianPath& path, double nu, int bandwidth,
                                        const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) throw InvalidArgument("phase times must increase");
    if (times[i] > path.horizon * (1.0 + 1e-12)) throw InvalidArgument("path horizon shorter than requested t");
  }
  const double sigma = std::sqrt(2.0 * nu);
  const std::size_t nb = static_cast<std::size_t>(bandwidth) + 1;
  std::vector<PhaseMoments> out;
  out.reserve(times.size());
  auto record = [&](double t, const std::vector<Complex>& e) {
    PhaseMoments m;
    m.t = t;
    m.e = e;
    m.w_t = path.w_at(t);
    m.b_t = path.b_at(t);
    out.push_back(std::move(m));
  };
  if (sigma == 0.0) {
    for (double t : times) record(t, std::vector<Complex>(nb, Complex(t, 0.0)));
    return out;
  }
  auto powers = [&](double w, std::vector<Complex>& z) {
    const Complex base = std::polar(1.0, sigma * w);
    z[0] = 1.0;
    for (std::size_t n = 1; n < nb; ++n) z[n] = z[n - 1] * base;
  };
  const double dt = path.dt();
  std::vector<Complex> acc(nb), z_prev(nb), z_next(nb), z_part(nb), tmp(nb);
  powers(path.w[0], z_prev);
  std::size_t cell = 0;  // acc holds the integral up to time cell*dt
  for (double t : times) {
    const double u = t / dt;
    auto full = static_cast<std::size_t>(std::floor(u * (1.0 + 1e-14)));
    full = std::min(full, path.steps);
    for (; cell < full; ++cell) {
      powers(path.w[cell + 1], z_next);
      for (std::size_t n = 0; n < nb; ++n) acc[n] += 0.5 * dt * (z_prev[n] + z_next[n]);
      std::swap(z_prev, z_next);
    }
    const double rest = t - static_cast<double>(cell) * dt;
    tmp = acc;
    if (rest > 1e-14 * dt && cell < path.steps) {
      powers(path.w_at(t), z_part);
      for (std::size_t n = 0; n < nb; ++n) tmp[n] += 0.5 * rest * (z_prev[n] + z_part[n]);
    }
    record(t, tmp);
  }
  return out;
}

PhaseField::PhaseField(const ShearProfile& b, const PhaseMoments& m, double nu, std::uint64_t path_seed,
                       std::size_t ny)
    : t_(m.t), nu_(nu), seed_(path_seed), w_t_(m.w_t), b_t_(m.b_t), band_(b.bandwidth()) {
  if (static_cast<int>(m.e.size()) < band_ + 1) throw InvalidArgument("phase moments narrower than the shear");
  coeff_.assign(2 * band_ + 1, Complex{});
  for (int n = -band_; n <= band_; ++n) {
    const Complex e = n >= 0 ? m.e[n] : std::conj(m.e[-n]);
    coeff_[n + band_] = b.coefficient(n) * e;
  }
  fill_grid(ny);
}

PhaseField PhaseField::synthetic(std::vector<Complex> phi_coeffs, double slope, double t, std::size_t ny) {
  if (phi_coeffs.size() % 2 != 1) throw InvalidArgument("coefficient list must be odd-length");
  PhaseField f;
  f.t_ = t;
  f.band_ = static_cast<int>(phi_coeffs.size() / 2);
  f.coeff_ = std::move(phi_coeffs);
  f.slope_ = slope;
  f.fill_grid(ny);
  return f;
}

void PhaseField::fill_grid(std::size_t ny) {
  if (!is_power_of_two(ny) || ny < static_cast<std::size_t>(4 * band_ + 4))
    throw InvalidArgument("phase grid must be a power of two well above the shear bandwidth");
  std::vector<Complex> a(ny), d(ny);
  for (int n = -band_; n <= band_; ++n) {
    const std::size_t j = n >= 0 ? static_cast<std::size_t>(n) : ny - static_cast<std::size_t>(-n);
    a[j] = coeff_[n + band_];
    d[j] = coeff_[n + band_] * Complex(0.0, n);
  }
  Fft1D fft(ny);
  fft.inverse(a);
  fft.inverse(d);
  phi_.resize(ny);
  s_.resize(ny);
  const PeriodicGrid1D g(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    phi_[j] = a[j].real() + slope_ * g.node(j);
    s_[j] = d[j].real() + slope_;
  }
  ds_ = spectral_derivative(std::span<const double>(s_), 1);
}

double PhaseField::eval(double y, int order) const {
  static const Complex unit[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double acc = 0.0;
  for (int n = -band_; n <= band_; ++n) {
    const Complex c = coeff_[n + band_];
    if (c == Complex{} || (n == 0 && order > 0)) continue;
    const Complex f = unit[order % 4] * std::pow(static_cast<double>(n), order);
    acc += (c * f * std::polar(1.0, n * y)).real();
  }
  return acc;
}

double PhaseField::max_abs_s() const {
  double m = 0.0;
  for (double v : s_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> PhaseField::phi_grid(std::size_t n) const {
  if (!is_power_of_two(n) || n < static_cast<std::size_t>(2 * band_ + 2))
    throw InvalidArgument("phi grid must be a power of two above the bandwidth");
  std::vector<Complex> a(n);
  for (int k = -band_; k <= band_; ++k) {
    const std::size_t j = k >= 0 ? static_cast<std::size_t>(k) : n - static_cast<std::size_t>(-k);
    a[j] = coeff_[k + band_];
  }
  Fft1D fft(n);
  fft.inverse(a);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real() + slope_ * kTwoPi * static_cast<double>(j) / n;
  return out;
}

PhaseField compute_phase_field(const ShearProfile& b, const BrownianPath& path, double nu, double t, std::size_t ny) {
  return PhaseField(b, phase_moments(path, nu, b.bandwidth(), {t}).front(), nu, path.seed, ny);
}

std::vector<PhaseField> compute_phase_fields(const ShearProfile& b, const BrownianPath& path, double nu,
                                             const std::vector<double>& times, std::size_t ny) {
  std::vector<PhaseField> out;
  for (const auto& m : phase_moments(path, nu, b.bandwidth(), times)) out.emplace_back(b, m, nu, path.seed, ny);
  return out;
}

double direct_phase_quadrature(const ShearProfile& b, const BrownianPath& path, double nu, double t, double y,
                               int order) {
  const double sigma = std::sqrt(2.0 * nu);
  const double dt = path.dt();
  auto full = static_cast<std::size_t>(std::floor(t / dt * (1.0 + 1e-14)));
  full = std::min(full, path.steps);
  double acc = 0.0;
  double prev = b.evaluate(y + sigma * path.w[0], order);
  for (std::size_t i = 0; i < full; ++i) {
    const double next = b.evaluate(y + sigma * path.w[i + 1], order);
    acc += 0.5 * dt * (prev + next);
    prev = next;
  }
  const double rest = t - static_cast<double>(full) * dt;
  if (rest > 1e-14 * dt) acc += 0.5 * rest * (prev + b.evaluate(y + sigma * path.w_at(t), order));
  return acc;
}

bool Interval::contains(double y) const {
  const double u = wrap_angle(y - lo);
  return u <= length();
}

namespace {

template <class F>
double bisect_root(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Event {
  double y;
  bool enter;
};

std::vector<Interval> sublevel_components(const PhaseField& f, double theta) {
  const std::size_t n = f.ny();
  const double h = kTwoPi / static_cast<double>(n);
  const auto& s = f.s();
  const auto& ds = f.ds();
  auto g = [&](double y) { return std::abs(f.s_at(y)) - theta; };
  auto in = [&](std::size_t j) { return std::abs(s[j % n]) <= theta; };
  std::vector<Event> ev;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = h * static_cast<double>(j), b = a + h;
    const bool ia = in(j), ib = in(j + 1);
    if (ia != ib) {
      ev.push_back({bisect_root(g, a, b), !ia});
      continue;
    }
    // Interior extremum of |S|: zero of S or of S'.
    double r = std::numeric_limits<double>::quiet_NaN();
    const double sa = s[j], sb = s[(j + 1) % n];
    if ((sa < 0) != (sb < 0)) {
      r = bisect_root([&](double y) { return f.s_at(y); }, a, b);
    } else if ((ds[j] < 0) != (ds[(j + 1) % n] < 0)) {
      r = bisect_root([&](double y) { return f.ds_at(y); }, a, b);
    }
    if (std::isnan(r)) continue;
    const bool ir = g(r) <= 0.0;
    if (ir == ia) continue;
    const double e1 = bisect_root(g, a, r), e2 = bisect_root(g, r, b);
    ev.push_back({e1, ir});
    ev.push_back({e2, !ir});
  }
  for (std::size_t i = 1; i < ev.size(); ++i)
    if (ev[i].enter == ev[i - 1].enter) throw NumericalError("inconsistent sublevel crossings");
  std::vector<Interval> comps;
  if (ev.empty()) {
    if (in(0)) comps.push_back({0.0, kTwoPi});
    return comps;
  }
  if (!ev.front().enter) {
    Event first = ev.front();
    ev.erase(ev.begin());
    first.y += kTwoPi;
    ev.push_back(first);
  }
  for (std::size_t i = 0; i + 1 < ev.size(); i += 2) {
    double lo = ev[i].y, hi = ev[i + 1].y;
    if (lo >= kTwoPi) {
      lo -= kTwoPi;
      hi -= kTwoPi;
    }
    comps.push_back({lo, hi});
  }
  return comps;
}

// Offset of y from c in [-pi, pi).
double signed_offset(double y, double c) {
  double d = wrap_angle(y - c);
  if (d >= kPi) d -= kTwoPi;
  return d;
}

std::vector<Interval> complement_of(std::vector<Interval> cover) {
  std::vector<Interval> out;
  if (cover.empty()) {
    out.push_back({0.0, kTwoPi});
    return out;
  }
  for (auto& iv : cover) {
    if (iv.length() >= kTwoPi) return out;
    iv.lo = wrap_angle(iv.lo);
    iv.hi = iv.lo + iv.length();
  }
  std::sort(cover.begin(), cover.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  // Merge overlaps along the circle.
  std::vector<Interval> merged;
  for (const auto& iv : cover) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  while (merged.size() > 1 && merged.back().hi >= merged.front().lo + kTwoPi) {
    merged.front().lo = merged.back().lo - kTwoPi;
    merged.front().hi = std::max(merged.front().hi, merged.back().hi - kTwoPi);
    merged.pop_back();
    if (merged.front().lo < 0) {
      merged.front().lo += kTwoPi;
      merged.front().hi += kTwoPi;
    }
    std::sort(merged.begin(), merged.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  }
  if (merged.size() == 1 && merged.front().length() >= kTwoPi) return out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double a = merged[i].hi;
    const double b = i + 1 < merged.size() ? merged[i + 1].lo : merged.front().lo + kTwoPi;
    if (b > a) {
      Interval g{a, b};
      if (g.lo >= kTwoPi) {
        g.lo -= kTwoPi;
        g.hi -= kTwoPi;
      }
      out.push_back(g);
    }
  }
  return out;
}

SublevelReport base_report(const PhaseField& field, double c, int N) {
  if (!(c > 0.0)) throw InvalidArgument("sublevel constant c must be positive");
  SublevelReport r;
  r.c = c;
  r.t = field.t();
  r.threshold = c * std::pow(field.t(), 1.0 / (N + 1));
  r.components = sublevel_components(field, r.threshold);
  for (const auto& iv : r.components) r.set_measure += iv.length();
  return r;
}

void finish_report(SublevelReport& r) {
  r.measure = 0.0;
  for (const auto& iv : r.intervals) r.measure += iv.length();
  r.cover_count = static_cast<int>(r.intervals.size());
  r.complement = complement_of(r.intervals);
}

}  // namespace

SublevelReport sublevel_set(const PhaseField& field, double c, int N) {
  SublevelReport r = base_report(field, c, N);
  r.intervals = r.components;
  finish_report(r);
  return r;
}

SublevelReport sublevel_set(const PhaseField& field, double c, int N, const CriticalStructure& s, double delta) {
  SublevelReport r = base_report(field, c, N);
  const double radius = 2.0 * delta;
  std::vector<std::vector<Interval>> groups(s.points.size());
  for (const auto& iv : r.components) {
    if (iv.length() >= kTwoPi) {
      r.intervals = {iv};
      r.stray_components = 1;
      finish_report(r);
      return r;
    }
    bool placed = false;
    for (std::size_t i = 0; i < s.points.size() && !placed; ++i) {
      const double lo = signed_offset(iv.lo, s.points[i]);
      if (lo >= -radius && lo + iv.length() <= radius) {
        groups[i].push_back(iv);
        placed = true;
      }
    }
    if (!placed) {
      r.intervals.push_back(iv);
      ++r.stray_components;
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) continue;
    double lo = kPi, hi = -kPi;
    for (const auto& iv : groups[i]) {
      const double a = signed_offset(iv.lo, s.points[i]);
      lo = std::min(lo, a);
      hi = std::max(hi, a + iv.length());
    }
    const double base = wrap_angle(s.points[i] + lo);
    r.intervals.push_back({base, base + (hi - lo)});
  }
  std::sort(r.intervals.begin(), r.intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  finish_report(r);
  return r;
}

namespace {

// Sample points covering [a, b] at roughly the field grid spacing / 4.
std::vector<double> sample_points(double a, double b, std::size_t ny) {
  const double h = kTwoPi / static_cast<double>(ny) / 4.0;
  const auto m = static_cast<std::size_t>(std::ceil((b - a) / h)) + 1;
  std::vector<double> pts(m + 1);
  for (std::size_t i = 0; i <= m; ++i) pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m);
  return pts;
}

}  // namespace

InverseDerivativeResult check_inverse_derivative_integral(const PhaseField& field, const SublevelReport& report) {
  InverseDerivativeResult res;
  const double scale = std::max(field.max_abs_s(), 1e-300);
  for (const auto& J : report.complement) {
    const auto pts = sample_points(J.lo, J.hi, field.ny());
    std::vector<double> breaks{J.lo};
    double prev_s = field.s_at(pts.front()), prev_d = field.ds_at(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double sv = field.s_at(pts[i]), dv = field.ds_at(pts[i]);
      if ((sv < 0) != (prev_s < 0) || std::abs(sv) <= 1e-14 * scale) res.s_vanishes = true;
      if ((dv < 0) != (prev_d < 0))
        breaks.push_back(bisect_root([&](double y) { return field.ds_at(y); }, pts[i - 1], pts[i]));
      prev_s = sv;
      prev_d = dv;
    }
    breaks.push_back(J.hi);
    if (res.s_vanishes) break;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      res.value += std::abs(1.0 / field.s_at(breaks[i + 1]) - 1.0 / field.s_at(breaks[i]));
  }
  if (res.s_vanishes) res.value = std::numeric_limits<double>::infinity();
  return res;
}

double inverse_derivative_quadrature(const PhaseField& field, const SublevelReport& report, std::size_t panels) {
  const auto gl = gauss_legendre(8);
  double total = 0.0;
  for (const auto& J : report.complement) {
    const double w = (J.hi - J.lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = J.lo + w * static_cast<double>(p);
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double y = a + 0.5 * w * (gl.nodes[q] + 1.0);
        const double sv = field.s_at(y);
        total += 0.5 * w * gl.weights[q] * std::abs(field.ds_at(y)) / (sv * sv);
      }
    }
  }
  return total;
}

namespace {

// Zeros of g on [a, b]: sign changes plus touching zeros where dg changes
// sign and |g| is at round-off relative to gscale.
template <class G, class DG>
int count_zeros(G&& g, DG&& dg, double a, double b, std::size_t ny, double gscale) {
  const auto pts = sample_points(a, b, ny);
  int count = 0;
  double pg = g(pts.front()), pd = dg(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double gv = g(pts[i]), dv = dg(pts[i]);
    if ((gv < 0) != (pg < 0) && gv != 0.0 && pg != 0.0) {
      ++count;
    } else if ((dv < 0) != (pd < 0)) {
      const double r = bisect_root(dg, pts[i - 1], pts[i]);
      if (std::abs(g(r)) <= 1e-9 * gscale) ++count;
    } else if (gv == 0.0 && i + 1 < pts.size()) {
      ++count;
    }
    pg = gv;
    pd = dv;
  }
  return count;
}

}  // namespace

std::vector<ZeroCount> count_zeros_near_critical_points(const PhaseField& field, const CriticalStructure& s,
                                                        double delta) {
  std::vector<ZeroCount> out;
  double s_scale = 0.0, d_scale = 0.0;
  for (double v : field.s()) s_scale = std::max(s_scale, std::abs(v));
  for (double v : field.ds()) d_scale = std::max(d_scale, std::abs(v));
  for (double y : s.points) {
    const double a = y - 2.0 * delta, b = y + 2.0 * delta;
    ZeroCount zc;
    zc.center = y;
    zc.zeros_s = count_zeros([&](double u) { return field.s_at(u); }, [&](double u) { return field.ds_at(u); }, a, b,
                             field.ny(), s_scale);
    zc.zeros_ds = count_zeros([&](double u) { return field.ds_at(u); }, [&](double u) { return field.dds_at(u); }, a,
                              b, field.ny(), d_scale);
    out.push_back(zc);
  }
  return out;
}

double min_abs_s_outside_balls(const PhaseField& field, const CriticalStructure& s, double delta) {
  std::vector<Interval> balls;
  for (double y : s.points) {
    const double lo = wrap_angle(y - 2.0 * delta);
    balls.push_back({lo, lo + 4.0 * delta});
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& J : complement_of(balls)) {
    const auto pts = sample_points(J.lo, J.hi, field.ny());
    double pd = field.ds_at(pts.front());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best = std::min(best, std::abs(field.s_at(pts[i])));
      if (i == 0) continue;
      const double dv = field.ds_at(pts[i]);
      if ((dv < 0) != (pd < 0)) {
        const double r = bisect_root([&](double u) { return field.ds_at(u); }, pts[i - 1], pts[i]);
        best = std::min(best, std::abs(field.s_at(r)));
      }
      pd = dv;
      // S itself crossing zero between samples.
      if (i > 0 && (field.s_at(pts[i]) < 0) != (field.s_at(pts[i - 1]) < 0)) best = 0.0;
    }
  }
  return best;
}

}  // namespace shearmix
