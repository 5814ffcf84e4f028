#include "shearmix/shear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shearmix/error.hpp"

namespace shearmix {
namespace {

double binomial(int m, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (m - j + i) / i;
  return r;
}

// (i n)^d
Complex ipow(int n, int d) {
  static const Complex unit[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return unit[d % 4] * std::pow(static_cast<double>(n), d);
}

}  // namespace

ShearProfile ShearProfile::cos_power(int m) {
  if (m < 1) throw InvalidArgument("cos power must be a positive integer");
  ShearProfile p;
  p.family_ = Family::CosPower;
  p.power_ = m;
  p.declared_order_ = std::max(1, m - 1);
  p.bandwidth_ = m;
  p.beta_.assign(2 * m + 1, Complex{});
  const double scale = std::ldexp(1.0, -m);
  for (int j = 0; j <= m; ++j) p.beta_[2 * j - m + m] += scale * binomial(m, j);
  for (int n = 0; n <= m; ++n) {
    const Complex c = p.beta_[n + m];
    const double a = n == 0 ? c.real() : 2.0 * c.real();
    if (std::abs(a) > 0.0) p.modes_.push_back({n, a, 0.0});
  }
  p.finalize();
  return p;
}

ShearProfile ShearProfile::fourier_series(std::vector<FourierMode> modes, int declared_order,
                                          std::optional<CriticalStructure> expected) {
  if (declared_order < 1) throw InvalidArgument("declared vanishing order must be >= 1");
  ShearProfile p;
  p.family_ = Family::FourierSeries;
  p.declared_order_ = declared_order;
  int band = 0;
  for (const auto& m : modes) {
    if (m.wavenumber < 0) throw InvalidArgument("Fourier shear wavenumbers must be >= 0");
    if (!std::isfinite(m.cos_amplitude) || !std::isfinite(m.sin_amplitude))
      throw InvalidArgument("non-finite Fourier shear amplitude");
    band = std::max(band, m.wavenumber);
  }
  p.bandwidth_ = band;
  p.beta_.assign(2 * band + 1, Complex{});
  for (const auto& m : modes) {
    if (m.wavenumber == 0) {
      p.beta_[band] += m.cos_amplitude;
      continue;
    }
    p.beta_[band + m.wavenumber] += Complex(m.cos_amplitude, -m.sin_amplitude) / 2.0;
    p.beta_[band - m.wavenumber] += Complex(m.cos_amplitude, m.sin_amplitude) / 2.0;
  }
  p.modes_ = std::move(modes);
  p.expected_ = std::move(expected);
  p.finalize();
  return p;
}

void ShearProfile::finalize() {
  const int n = std::max(4096, 64 * (bandwidth_ + 1));
  sup_cache_.assign(declared_order_ + 3, 0.0);
  for (int d = 0; d <= declared_order_ + 2; ++d) {
    double mx = 0.0;
    for (int j = 0; j < n; ++j) mx = std::max(mx, std::abs(evaluate_unchecked(kTwoPi * j / n, d)));
    sup_cache_[d] = mx;
  }
}

Complex ShearProfile::coefficient(int n) const {
  if (n < -bandwidth_ || n > bandwidth_) return {};
  return beta_[n + bandwidth_];
}

double ShearProfile::evaluate_unchecked(double y, int order) const {
  double acc = 0.0;
  for (int n = -bandwidth_; n <= bandwidth_; ++n) {
    const Complex c = beta_[n + bandwidth_];
    if (c == Complex{}) continue;
    acc += (c * ipow(n, order) * std::polar(1.0, n * y)).real();
  }
  return acc;
}

double ShearProfile::evaluate(double y, int order) const {
  if (order < 0 || order > declared_order_ + 2)
    throw InvalidArgument("derivative order " + std::to_string(order) +
                          " exceeds supported order N+2 = " + std::to_string(declared_order_ + 2));
  return evaluate_unchecked(y, order);
}

double ShearProfile::sup_norm(int order) const {
  if (order < 0 || order > declared_order_ + 2)
    throw InvalidArgument("sup_norm order exceeds N+2");
  return sup_cache_[order];
}

std::string ShearProfile::id() const {
  std::ostringstream os;
  if (family_ == Family::CosPower) {
    os << "cos^" << power_;
  } else {
    os << "fourier";
    for (const auto& m : modes_) os << "_" << m.wavenumber << ":" << m.cos_amplitude << ":" << m.sin_amplitude;
  }
  return os.str();
}

double wrap_angle(double y) {
  double r = std::fmod(y, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double torus_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

namespace {

// Bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
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

struct Refined {
  double y;
  bool converged;
};

// Newton on b^{(q)} with derivative b^{(q+1)}, confined to [y0-w, y0+w].
Refined newton_on_derivative(const ShearProfile& b, int q, double y0, double w, double tol) {
  double y = y0;
  for (int it = 0; it < 100; ++it) {
    const double f = b.evaluate(y, q);
    const double df = b.evaluate(y, q + 1);
    if (f == 0.0) return {y, true};
    if (df == 0.0) return {y, false};
    double step = f / df;
    double next = std::clamp(y - step, y0 - w, y0 + w);
    step = y - next;
    y = next;
    if (std::abs(step) <= tol) return {y, true};
  }
  return {y, false};
}

}  // namespace

CriticalStructure analyze_critical_structure(const ShearProfile& b, int grid_size,
                                             double newton_tol, double order_threshold) {
  if (grid_size < 64) throw InvalidArgument("critical-point grid needs at least 64 nodes");
  if (b.bandwidth() == 0) throw InvalidArgument("constant shear has no isolated critical points");
  const int n_max = b.declared_order();
  const double h = kTwoPi / grid_size;
  auto d1 = [&](double y) { return b.evaluate(y, 1); };
  auto d2 = [&](double y) { return b.evaluate(y, 2); };
  const double max_d1 = b.sup_norm(1);

  // Odd-multiplicity zeros of b' show up as sign changes of b'; even ones
  // as sign changes of b'' at a point where b' (nearly) vanishes.
  std::vector<double> rough;
  for (int j = 0; j < grid_size; ++j) {
    const double lo = h * j, hi = h * (j + 1);
    const double a1 = d1(lo), c1 = d1(hi);
    if (a1 == 0.0) {
      rough.push_back(lo);
    } else if ((a1 < 0) != (c1 < 0) && c1 != 0.0) {
      rough.push_back(bisect(d1, lo, hi, 1e-14));
    }
    const double a2 = d2(lo), c2 = d2(hi);
    if ((a2 < 0) != (c2 < 0) || a2 == 0.0) {
      const double y = a2 == 0.0 ? lo : bisect(d2, lo, hi, 1e-14);
      if (std::abs(d1(y)) <= 1e-6 * max_d1) rough.push_back(y);
    }
  }

  std::vector<double> pts;
  std::vector<int> ords;
  for (double y0 : rough) {
    int order = -1;
    double y_found = y0;
    bool any_converged = false;
    for (int q = 1; q <= n_max + 1; ++q) {
      const Refined r = newton_on_derivative(b, q, y0, h, newton_tol);
      any_converged = any_converged || r.converged;
      if (!r.converged) continue;
      bool lower_vanish = true;
      for (int j = 1; j <= q; ++j) {
        if (std::abs(b.evaluate(r.y, j)) > order_threshold * b.sup_norm(j)) lower_vanish = false;
      }
      if (!lower_vanish) continue;
      // b^{(q+1)} must be bounded away from zero near the point, not just at
      // a slightly misplaced root of a lower derivative.
      const double thr = order_threshold * b.sup_norm(q + 1);
      const double r0 = 1e-5;
      const double v0 = b.evaluate(r.y, q + 1);
      const double vm = b.evaluate(r.y - r0, q + 1);
      const double vp = b.evaluate(r.y + r0, q + 1);
      if (std::abs(v0) > thr && std::abs(vm) > thr && std::abs(vp) > thr && (vm < 0) == (v0 < 0) &&
          (vp < 0) == (v0 < 0)) {
        order = q;
        y_found = r.y;
        break;
      }
    }
    if (order < 0) {
      if (!any_converged) throw ConvergenceError("Newton refinement of a critical point did not converge");
      throw NumericalError("degenerate beyond supported order: b' vanishes to order > " +
                           std::to_string(n_max + 1) + " near y = " + std::to_string(y0));
    }
    pts.push_back(wrap_angle(y_found));
    ords.push_back(order);
  }

  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto c) { return pts[a] < pts[c]; });
  CriticalStructure out;
  for (auto i : idx) {
    bool dup = false;
    for (std::size_t j = 0; j < out.points.size(); ++j) {
      if (torus_distance(out.points[j], pts[i]) < 1e-6) {
        dup = true;
        out.orders[j] = std::max(out.orders[j], ords[i]);
      }
    }
    if (!dup) {
      out.points.push_back(pts[i]);
      out.orders.push_back(ords[i]);
    }
  }
  for (int o : out.orders) out.max_order = std::max(out.max_order, o);
  return out;
}

void validate_critical_structure(const ShearProfile& b, const CriticalStructure& found,
                                 double point_tol) {
  CriticalStructure expect;
  if (b.family() == ShearProfile::Family::CosPower) {
    // b' = -m cos^{m-1} y sin y.
    const int m = b.power();
    const int cos_mult = m - 1;
    expect.points = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    expect.orders = {1, cos_mult, 1, cos_mult};
    if (cos_mult == 0) {
      expect.points = {0.0, kPi};
      expect.orders = {1, 1};
    }
  } else {
    if (!b.expected_structure())
      throw InvalidArgument("Fourier-series shear must declare its critical structure");
    expect = *b.expected_structure();
  }
  if (expect.points.size() != found.points.size())
    throw InvalidArgument("critical point count " + std::to_string(found.points.size()) +
                          " differs from declared " + std::to_string(expect.points.size()));
  for (std::size_t i = 0; i < expect.points.size(); ++i) {
    bool matched = false;
    for (std::size_t j = 0; j < found.points.size(); ++j) {
      if (torus_distance(expect.points[i], found.points[j]) <= point_tol) {
        if (expect.orders[i] != found.orders[j])
          throw InvalidArgument("vanishing order mismatch at y = " + std::to_string(expect.points[i]));
        matched = true;
      }
    }
    if (!matched)
      throw InvalidArgument("declared critical point " + std::to_string(expect.points[i]) + " not found");
  }
  int n = 0;
  for (int o : found.orders) n = std::max(n, o);
  if (n > b.declared_order())
    throw InvalidArgument("found vanishing order " + std::to_string(n) + " exceeds declared N");
}

double min_critical_separation(const CriticalStructure& s) {
  double d = kPi;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    for (std::size_t j = i + 1; j < s.points.size(); ++j) d = std::min(d, torus_distance(s.points[i], s.points[j]));
  return d;
}

void check_delta_separation(const CriticalStructure& s, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const double limit = 0.25 * min_critical_separation(s);
  if (!(delta < limit))
    throw InvalidArgument("delta = " + std::to_string(delta) + " violates separation bound " +
                          std::to_string(limit));
}

}  // namespace shearmix
