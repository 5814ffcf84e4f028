#include "shearmix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearmix/error.hpp"

namespace shearmix {
namespace {

const GaussLegendre& gl16() {
  static const GaussLegendre g = gauss_legendre(16);
  return g;
}

std::vector<double> fritsch_carlson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) m[k] = (d[k - 1] * d[k] <= 0.0) ? 0.0 : 0.5 * (d[k - 1] + d[k]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (d[k] == 0.0) {
      m[k] = m[k + 1] = 0.0;
      continue;
    }
    const double a = m[k] / d[k], b = m[k + 1] / d[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[k] = tau * a * d[k];
      m[k + 1] = tau * b * d[k];
    }
  }
  return m;
}

}  // namespace

ImageCurve::ImageCurve(PhaseField field, double x0, Interval source)
    : field_(std::move(field)), x0_(x0), source_(source) {
  const double len = source_.length();
  if (!(len > 0.0) || len >= kTwoPi) throw InvalidArgument("image curve source must be a proper interval");
  // Fixed sign of S on I.
  const double h = kTwoPi / static_cast<double>(field_.ny()) / 4.0;
  const auto m = static_cast<std::size_t>(std::ceil(len / h)) + 1;
  const double s0 = field_.s_at(source_.lo);
  for (std::size_t i = 0; i <= m; ++i) {
    const double y = source_.lo + len * static_cast<double>(i) / static_cast<double>(m);
    const double s = field_.s_at(y);
    if (s == 0.0 || (s < 0) != (s0 < 0))
      throw InvalidArgument("S_t changes sign inside the source interval (sublevel lemma violated)");
  }
  decreasing_ = s0 > 0.0;  // X' = -S

  const double x_span = std::abs(X(source_.hi) - X(source_.lo));
  const auto np = std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(x_span / kTwoPi * 64.0)));
  xs_.resize(np + 1);
  ys_.resize(np + 1);
  for (std::size_t i = 0; i <= np; ++i) {
    const double y = source_.lo + len * static_cast<double>(i) / static_cast<double>(np);
    ys_[i] = y;
    xs_[i] = X(y);
  }
  if (decreasing_) {
    std::reverse(xs_.begin(), xs_.end());
    std::reverse(ys_.begin(), ys_.end());
  }
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1])) throw NumericalError("X is not strictly monotone on the parameter grid");
  ms_ = fritsch_carlson(xs_, ys_);
  x_lo_ = xs_.front();
  x_hi_ = xs_.back();

  std::vector<double> cuts{x_lo_};
  const auto j0 = static_cast<long>(std::ceil(x_lo_ / kTwoPi));
  const auto j1 = static_cast<long>(std::floor(x_hi_ / kTwoPi));
  for (long j = j0; j <= j1; ++j) {
    const double c = kTwoPi * static_cast<double>(j);
    if (c > x_lo_ && c < x_hi_) cuts.push_back(c);
  }
  cuts.push_back(x_hi_);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    GraphPiece p;
    p.x_lo = cuts[i];
    p.x_hi = cuts[i + 1];
    const double ya = i == 0 ? ys_.front() : inverse(p.x_lo);
    const double yb = i + 2 == cuts.size() ? ys_.back() : inverse(p.x_hi);
    p.y_lo = std::min(ya, yb);
    p.y_hi = std::max(ya, yb);
    const bool full = i > 0 && i + 2 < cuts.size();
    (full ? graphs_ : remainder_).push_back(p);
  }
}

double ImageCurve::X(double y) const { return x0_ + field_.sigma() * field_.b_t() - field_.phi_at(y); }

double ImageCurve::Y(double y) const { return y + field_.sigma() * field_.w_t(); }

double ImageCurve::interp_guess(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double hk = xs_[k + 1] - xs_[k];
  const double u = (x - xs_[k]) / hk;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * ys_[k] + h10 * hk * ms_[k] + h01 * ys_[k + 1] + h11 * hk * ms_[k + 1];
}

double ImageCurve::interpolant_slope(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  k = std::clamp<std::size_t>(k, 1, xs_.size() - 1) - 1;
  const double hk = xs_[k + 1] - xs_[k];
  const double u = (x - xs_[k]) / hk;
  const double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
  const double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
  return (d00 * ys_[k] + d01 * ys_[k + 1]) / hk + d10 * ms_[k] + d11 * ms_[k + 1];
}

double ImageCurve::inverse(double x) const {
  double y = interp_guess(x);
  const double lo = source_.lo, hi = source_.hi;
  for (int it = 0; it < 20; ++it) {
    const double f = X(y) - x;
    const double df = -field_.s_at(y);
    const double next = std::clamp(y - f / df, lo, hi);
    const double step = std::abs(next - y);
    y = next;
    if (step <= 1e-15 * (1.0 + std::abs(y))) break;
  }
  return y;
}

double ImageCurve::slope(double x) const { return -1.0 / field_.s_at(inverse(x)); }

double ImageCurve::max_slope(const GraphPiece& p) const {
  const double h = kTwoPi / static_cast<double>(field_.ny()) / 4.0;
  const auto m = static_cast<std::size_t>(std::ceil((p.y_hi - p.y_lo) / h)) + 1;
  double best = std::numeric_limits<double>::infinity();
  double prev_d = field_.ds_at(p.y_lo), prev_y = p.y_lo;
  for (std::size_t i = 0; i <= m; ++i) {
    const double y = p.y_lo + (p.y_hi - p.y_lo) * static_cast<double>(i) / static_cast<double>(m);
    best = std::min(best, std::abs(field_.s_at(y)));
    const double d = field_.ds_at(y);
    if (i > 0 && (d < 0) != (prev_d < 0)) {
      double a = prev_y, b = y, fa = prev_d;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = field_.ds_at(mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      best = std::min(best, std::abs(field_.s_at(0.5 * (a + b))));
    }
    prev_d = d;
    prev_y = y;
  }
  return 1.0 / best;
}

double ImageCurve::max_slope() const {
  double m = 0.0;
  for (const auto& p : graphs_) m = std::max(m, max_slope(p));
  return m;
}

double ImageCurve::remainder_arclength() const {
  double s = 0.0;
  for (const auto& p : remainder_) {
    const double span = std::abs(X(p.y_hi) - X(p.y_lo));
    const auto panels = static_cast<std::size_t>(std::ceil(span / kTwoPi * 16.0)) + 4;
    s += gl_integrate(
        [&](double y) {
          const double sv = field_.s_at(y);
          return std::sqrt(1.0 + sv * sv);
        },
        p.y_lo, p.y_hi, panels, gl16());
  }
  return s;
}

ImageCurve build_image_curve(const PhaseField& field, double x0, const Interval& I) { return {field, x0, I}; }

double JacobianField::max() const {
  double m = 0.0;
  for (double v : j) m = std::max(m, v);
  return m;
}

JacobianField jacobian_field(const ImageCurve& curve, std::size_t n) {
  JacobianField jf;
  const auto& I = curve.source();
  for (std::size_t i = 0; i <= n; ++i) {
    const double y = I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n);
    const double s = curve.field().s_at(y);
    jf.y.push_back(y);
    jf.j.push_back(1.0 / std::sqrt(1.0 + s * s));
  }
  return jf;
}

namespace {

std::size_t panels_for(const GraphPiece& p, std::size_t per_window) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((p.x_hi - p.x_lo) / kTwoPi * per_window)));
}

// Integrates fn(x, y, S) over the x-window of a piece, with y = X^{-1}(x).
template <class Fn>
double over_piece(const ImageCurve& c, const GraphPiece& p, std::size_t per_window, Fn&& fn) {
  return gl_integrate(
      [&](double x) {
        const double y = c.inverse(x);
        return fn(x, y, c.field().s_at(y));
      },
      p.x_lo, p.x_hi, panels_for(p, per_window), gl16());
}

}  // namespace

std::vector<double> line_integral_mean_zero(const ImageCurve& curve, const TrigPolynomial2D& f0,
                                            std::size_t panels_per_window) {
  std::vector<double> out;
  for (const auto& p : curve.graphs()) {
    out.push_back(over_piece(curve, p, panels_per_window, [&](double x, double y, double s) {
      return f0(x, curve.Y(y)) * std::sqrt(1.0 + 1.0 / (s * s));
    }));
  }
  return out;
}

double line_integral_taylor_bound(double max_slope, double dy_f0_sup, double f0_sup) {
  return kPi * kPi * max_slope * dy_f0_sup + kPi * max_slope * max_slope * f0_sup;
}

namespace {

double source_integral(const PhaseField& field, double x0, double a, double b, const TrigPolynomial2D& f0,
                       const PeriodicFunction& g) {
  // Panels follow the fastest x-motion max|S| so each covers < 2pi/16 in X.
  const double span = field.max_abs_s() * (b - a);
  const auto panels = static_cast<std::size_t>(std::ceil(span / kTwoPi * 16.0)) + 8;
  const double shift = x0 + field.sigma() * field.b_t();
  const double ys = field.sigma() * field.w_t();
  return gl_integrate([&](double y) { return f0(shift - field.phi_at(y), y + ys) * g(y); }, a, b, panels, gl16());
}

}  // namespace

ChangeOfVariables change_of_variables_check(const ImageCurve& curve, const TrigPolynomial2D& f0,
                                            const PeriodicFunction& g, std::size_t panels_per_window) {
  ChangeOfVariables r;
  r.lhs = source_integral(curve.field(), curve.x0(), curve.source().lo, curve.source().hi, f0, g);
  auto piece = [&](const GraphPiece& p) {
    return over_piece(curve, p, panels_per_window, [&](double x, double y, double s) {
      const double jac = 1.0 / std::sqrt(1.0 + s * s);
      const double ds = std::sqrt(1.0 + 1.0 / (s * s));
      return f0(x, curve.Y(y)) * g(y) * jac * ds;
    });
  };
  for (const auto& p : curve.graphs()) r.rhs += piece(p);
  for (const auto& p : curve.remainder()) r.rhs += piece(p);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

GraphTerms graph_terms(const ImageCurve& curve, const TrigPolynomial2D& f0, const PeriodicFunction& g,
                       std::size_t panels_per_window) {
  GraphTerms t;
  for (const auto& p : curve.graphs()) {
    auto arc = [&](auto&& fn) {
      return over_piece(curve, p, panels_per_window, [&](double x, double y, double s) {
        return fn(x, y, s) * std::sqrt(1.0 + 1.0 / (s * s));
      });
    };
    auto jac = [](double s) { return 1.0 / std::sqrt(1.0 + s * s); };
    const double len = arc([](double, double, double) { return 1.0; });
    const double gj = arc([&](double, double y, double) { return g(y); }) / len;
    const double jj = arc([&](double, double, double s) { return jac(s); }) / len;
    const double a = arc([&](double x, double y, double) { return f0(x, curve.Y(y)); });
    const double b = arc([&](double x, double y, double) { return f0(x, curve.Y(y)) * (g(y) - gj); });
    const double c = arc([&](double x, double y, double s) { return f0(x, curve.Y(y)) * g(y) * (jac(s) - jj); });
    t.t21 += gj * jj * a;
    t.t22 += jj * b;
    t.t23 += c;
  }
  for (const auto& p : curve.remainder()) {
    t.remainder += over_piece(curve, p, panels_per_window, [&](double x, double y, double s) {
      return f0(x, curve.Y(y)) * g(y) / std::abs(s);
    });
  }
  return t;
}

DynamicalEstimate dynamical_estimate(const PhaseField& field, const SublevelReport& report, int N,
                                     const TrigPolynomial2D& f0, double f0_norm, const PeriodicFunction& g, double x0) {
  DynamicalEstimate d;
  d.total = source_integral(field, x0, 0.0, kTwoPi, f0, g);
  for (const auto& I : report.intervals) d.bad_part += source_integral(field, x0, I.lo, I.hi, f0, g);
  for (const auto& J : report.complement) {
    const ImageCurve curve(field, x0, J);
    d.per_interval.push_back(graph_terms(curve, f0, g));
    d.good_part += d.per_interval.back().total();
  }
  d.ratio = std::abs(d.total) * std::pow(field.t(), 1.0 / (N + 1)) / (f0_norm * g.w1inf_norm());
  return d;
}

}  // namespace shearmix
