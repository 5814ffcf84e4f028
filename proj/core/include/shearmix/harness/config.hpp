#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shearmix/brownian.hpp"
#include "shearmix/grid.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/shear.hpp"

namespace shearmix::harness {

// Flat key-value text with [table] headers:
//   key = 1.5 | "text" | true | [1, 2, 3] | ["a", "b"]
// Keys are stored as "table.key". '#' starts a comment.
using Value = std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>>;

class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, Value>& values() const { return values_; }

  double number(const std::string& key, double fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) const;

  // Sorted "key = value" lines with round-trip number formatting.
  std::string canonical() const;

 private:
  std::map<std::string, Value> values_;
};

std::uint64_t fnv1a64(const std::string& s);

struct InitialData {
  std::string id;
  TrigPolynomial2D poly;
  // Normalized L^2 norm and L^inf_x W^{1,inf}_y norm of the data.
  double l2 = 0.0;
  double linf_w1inf = 0.0;
  double dy_sup = 0.0;
  double sup = 0.0;
};

// Library ids: cosx, cosx_siny, cosx_cosy, cos2x_siny; or "fourier" with
// explicit terms (see parse_initial_data).
InitialData initial_data(const std::string& id);
ModeField initial_modes(const InitialData& f0, std::size_t ny);

// "cos^m" or "fourier".
ShearProfile shear_from_config(const ConfigDocument& doc);

struct ExperimentConfig {
  std::string shear_spec = "cos^1";
  ShearProfile shear = ShearProfile::cos_power(1);
  int order = 1;
  std::vector<double> nus{0.0, 1e-3, 1e-4, 1e-5};
  InitialData f0 = initial_data("cosx_siny");
  std::vector<NormId> norms{NormId::Hminus1, NormId::L2kWm1inf, NormId::LinfWm11};
  double t_min = 16.0;
  double t_max = 1024.0;
  int per_octave = 2;
  std::size_t ny = 0;  // 0: resolution rule
  std::size_t nx = 16;
  std::size_t n_paths = 1000;
  std::uint64_t master_seed = 20240601;
  double delta = 0.3;
  double p = 0.0;  // 0: midpoint
  std::string c_mode = "calibrated";
  double c = 0.1;
  std::size_t pilot_paths = 100;
  std::vector<int> ks{1, 2, 4, 8};
  std::string F = "one";
  std::string g = "one";
  double threshold = 0.01;
  double fk_t = 8.0;
  std::size_t fk_grid = 64;
  std::size_t geometry_paths = 20;
  std::size_t tail_paths = 100000;
  std::string out_dir = "out";
  unsigned threads = 0;

  std::uint64_t hash = 0;
  std::string canonical;

  GoodEventParams good_event() const;
  // Throws ConfigError on an empty nu list, a bad p, delta not separating
  // the critical points, or a grid that is not a power of two.
  void validate() const;
};

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::vector<double>> nus;
};

ExperimentConfig make_config(ConfigDocument doc, const Overrides& o = {});
std::vector<double> parse_number_list(const std::string& text);

}  // namespace shearmix::harness
