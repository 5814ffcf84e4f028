#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "shearmix/grid.hpp"

namespace shearmix::harness {

// First line "schema=shearmix.<name>.v<version>", then a header row whose
// first two columns are config_hash and seed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& columns,
            std::uint64_t config_hash, int version = 1);

  CsvWriter& add(double v);
  CsvWriter& add(long long v);
  CsvWriter& add(const std::string& v);
  CsvWriter& add(bool v) { return add(std::string(v ? "1" : "0")); }
  CsvWriter& add(int v) { return add(static_cast<long long>(v)); }
  CsvWriter& add(std::size_t v) { return add(static_cast<long long>(v)); }
  void end_row(std::uint64_t seed);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::uint64_t hash_;
  std::size_t columns_;
  std::vector<std::string> row_;
};

std::string hex64(std::uint64_t v);
// Shortest round-trip decimal.
std::string format_double(double v);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ReferenceSlope {
  double slope = 0.0;
  double x0 = 1.0;  // the line passes through (x0, y0)
  double y0 = 1.0;
  std::string label;
};

// Self-contained log-log SVG: axes with decade ticks, one polyline with
// markers per series, a dashed reference line.
void write_loglog_svg(const std::string& path, const std::string& title, const std::vector<PlotSeries>& series,
                      const ReferenceSlope& ref, const std::string& xlabel = "t", const std::string& ylabel = "");

// 64-byte header: "SHMXFLD1", u64 nx, u64 ny, f64 t, f64 nu, u64 seed,
// 16 zero bytes; then nx*ny little-endian doubles, row-major in y.
struct FieldDump {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double t = 0.0;
  double nu = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

void write_field_dump(const std::string& path, const ScalarField& f, double t, double nu, std::uint64_t seed);
FieldDump read_field_dump(const std::string& path);

}  // namespace shearmix::harness
