#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shearmix/brownian.hpp"
#include "shearmix/phase.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

// A smooth 2pi-periodic test function with its derivative.
class PeriodicFunction {
 public:
  PeriodicFunction(std::string name, std::function<double(double)> value, std::function<double(double)> derivative);

  static PeriodicFunction one();
  static PeriodicFunction sine();
  static PeriodicFunction smoothed_sawtooth();
  static PeriodicFunction bump();
  static PeriodicFunction by_name(const std::string& name);

  double operator()(double y) const { return value_(y); }
  double derivative(double y) const { return derivative_(y); }
  const std::string& name() const { return name_; }
  PeriodicFunction scaled(double lambda) const;

  // Normalized mean|f| + mean|f'| and sup|f| + sup|f'|, on a fine grid.
  double w11_norm() const { return w11_; }
  double w1inf_norm() const { return w1inf_; }

 private:
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double w11_ = 0.0;
  double w1inf_ = 0.0;
};

struct QuadratureResult {
  Complex value;
  std::size_t nodes = 0;
  double cauchy_gap = 0.0;
};

// int_T e^{-ikb(y)t} g h dy (unnormalized dy), doubling the grid until two
// successive values differ by < 1e-8.
QuadratureResult deterministic_integral(const ShearProfile& b, int k, double t, const PeriodicFunction& g,
                                        const PeriodicFunction& h);

// int_T e^{-ik phi_t(y)} F g dy on one path.
QuadratureResult stochastic_integral(const PhaseField& field, int k, const PeriodicFunction& F,
                                     const PeriodicFunction& g);

struct IbpRow {
  std::uint64_t seed = 0;
  double nu = 0.0;
  int k = 0;
  double t = 0.0;
  double abs_integral = 0.0;
  double ratio = 0.0;
};

struct IbpReport {
  std::vector<IbpRow> rows;
  double max_ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::size_t paths_tried = 0;
};

struct IbpSweep {
  double nu = 0.0;
  std::vector<int> ks{1};
  std::vector<double> times;
  std::size_t n_paths = 100;  // good-event paths (ignored at nu = 0)
  GoodEventParams params;
  std::uint64_t master_seed = 0;
  double bound = 0.0;  // pass iff max ratio <= bound (0: no bound)
};

// ratio = |I| t^{1/(N+1)} / (|F|_{W11} |g|_{W11}) per good path, t and k.
IbpReport verify_lemma_ibp(const ShearProfile& b, int N, const PeriodicFunction& F, const PeriodicFunction& g,
                           const IbpSweep& sweep);

}  // namespace shearmix
