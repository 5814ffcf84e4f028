#include "shearmix/harness/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

#include "shearmix/error.hpp"

namespace shearmix::harness {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& columns,
                     std::uint64_t config_hash, int version)
    : path_(path), out_(path), hash_(config_hash), columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot write '" + path + "'");
  out_ << "schema=shearmix." << schema << ".v" << version << "\n";
  out_ << "config_hash,seed";
  for (const auto& c : columns) out_ << ',' << c;
  out_ << '\n';
}

CsvWriter& CsvWriter::add(double v) {
  row_.push_back(format_double(v));
  return *this;
}

CsvWriter& CsvWriter::add(long long v) {
  row_.push_back(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::add(const std::string& v) {
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    row_.push_back(q + "\"");
  } else {
    row_.push_back(v);
  }
  return *this;
}

void CsvWriter::end_row(std::uint64_t seed) {
  if (row_.size() != columns_)
    throw InvalidArgument("csv row has " + std::to_string(row_.size()) + " fields, expected " +
                          std::to_string(columns_));
  out_ << hex64(hash_) << ',' << seed;
  for (const auto& f : row_) out_ << ',' << f;
  out_ << '\n';
  row_.clear();
}

namespace {

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title, const std::vector<PlotSeries>& series,
                      const ReferenceSlope& ref, const std::string& xlabel, const std::string& ylabel) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > 0.0)) {
    xmin = 1.0;
    xmax = 10.0;
    ymin = 0.1;
    ymax = 1.0;
  }
  const double lx0 = std::floor(std::log10(xmin)), lx1 = std::max(lx0 + 1, std::ceil(std::log10(xmax)));
  const double ly0 = std::floor(std::log10(ymin)), ly1 = std::max(ly0 + 1, std::ceil(std::log10(ymax)));
  const double W = 640, H = 480, L = 80, R = 170, T = 40, B = 60;
  auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = lx0; e <= lx1; e += 1.0) {
    const double x = L + (e - lx0) / (lx1 - lx0) * (W - L - R);
    out << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\"" << H - B + 5
        << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << H - B + 20 << "\" text-anchor=\"middle\">1e"
        << e << "</text>\n";
  }
  for (double e = ly0; e <= ly1; e += 1.0) {
    const double y = H - B - (e - ly0) / (ly1 - ly0) * (H - T - B);
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
        << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e
        << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << esc(xlabel)
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << esc(ylabel) << "</text>\n";
  out << "<clipPath id=\"plot\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";

  const double xa = std::pow(10.0, lx0), xb = std::pow(10.0, lx1);
  auto ref_y = [&](double x) { return ref.y0 * std::pow(x / ref.x0, ref.slope); };
  out << "<line x1=\"" << px(xa) << "\" y1=\"" << py(ref_y(xa)) << "\" x2=\"" << px(xb) << "\" y2=\""
      << py(ref_y(xb)) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* col = kColors[s % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (series[s].x[i] > 0.0 && series[s].y[i] > 0.0) out << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
    out << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (series[s].x[i] > 0.0 && series[s].y[i] > 0.0)
        out << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i]) << "\" r=\"2.5\" fill=\""
            << col << "\"/>\n";
  }
  out << "</g>\n";
  double ly = T + 10;
  for (std::size_t s = 0; s < series.size(); ++s, ly += 18) {
    out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << kColors[s % std::size(kColors)] << "\" stroke-width=\"2\"/><text x=\"" << W - R + 35
        << "\" y=\"" << ly + 4 << "\">" << esc(series[s].label) << "</text>\n";
  }
  out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/><text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">"
      << esc(ref.label) << "</text>\n";
  out << "</svg>\n";
}

namespace {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

constexpr char kMagic[8] = {'S', 'H', 'M', 'X', 'F', 'L', 'D', '1'};

}  // namespace

void write_field_dump(const std::string& path, const ScalarField& f, double t, double nu, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.write(kMagic, 8);
  put<std::uint64_t>(out, f.grid.nx);
  put<std::uint64_t>(out, f.grid.ny);
  put<double>(out, t);
  put<double>(out, nu);
  put<std::uint64_t>(out, seed);
  const char zeros[16] = {};
  out.write(zeros, 16);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("'" + path + "' is not a field dump");
  FieldDump d;
  d.nx = get<std::uint64_t>(in);
  d.ny = get<std::uint64_t>(in);
  d.t = get<double>(in);
  d.nu = get<double>(in);
  d.seed = get<std::uint64_t>(in);
  in.ignore(16);
  d.values.resize(d.nx * d.ny);
  in.read(reinterpret_cast<char*>(d.values.data()), static_cast<std::streamsize>(d.values.size() * sizeof(double)));
  if (!in) throw ConfigError("'" + path + "' is truncated");
  return d;
}

}  // namespace shearmix::harness
