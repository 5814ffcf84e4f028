#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "shearmix/brownian.hpp"
#include "shearmix/grid.hpp"
#include "shearmix/phase.hpp"
#include "shearmix/shear.hpp"

namespace shearmix {

struct FlowMapSample {
  double x = 0.0;
  double y = 0.0;
  double out_x = 0.0;  // in [0, 2pi)
  double out_y = 0.0;
  std::uint64_t path_seed = 0;
};

// Phi_t(x, y) = (x + sqrt(2nu) B_t - phi_t(y), y + sqrt(2nu) W_t) mod 2pi.
std::vector<FlowMapSample> sample_flow_map(const ShearProfile& b, const BrownianPath& path, double nu, double t,
                                           const std::vector<std::pair<double, double>>& points);

struct MCEstimate {
  ScalarField mean;
  ScalarField standard_error;
  std::size_t n_paths = 0;
};

struct MCOptions {
  std::uint64_t master_seed = 0;
  bool antithetic = true;
  std::size_t threads = 0;
};

// Per-node mean of f0 o Phi_t over paths; one path drives every node. With
// antithetic pairing each (W, B) is paired with (-W, -B) and the standard
// error is computed from the n_paths/2 pair means.
MCEstimate estimate_solution(const ScalarField& f0, const ShearProfile& b, double nu, double t, std::size_t n_paths,
                             const PeriodicGrid2D& grid, const MCOptions& opts = {});

struct UniformityReport {
  double statistic = 0.0;
  double quantile_999 = 0.0;
  std::size_t dof = 0;
  bool pass = false;
};

// Chi-square test of the image of n_points uniform points under one Phi_t.
UniformityReport measure_preservation_chi2(const ShearProfile& b, const BrownianPath& path, double nu, double t,
                                           std::size_t n_points, std::size_t bins, std::uint64_t seed);

// Upper quantile of chi-square with dof degrees of freedom (Wilson-Hilferty).
double chi2_quantile(std::size_t dof, double z);

}  // namespace shearmix
