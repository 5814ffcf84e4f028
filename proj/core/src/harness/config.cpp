#include "shearmix/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shearmix/error.hpp"

namespace shearmix::harness {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

std::string parse_string(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw ConfigError("line " + std::to_string(line) + ": unterminated string");
  return s.substr(1, s.size() - 2);
}

std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  bool in_str = false;
  for (char ch : body) {
    if (ch == '"') in_str = !in_str;
    if (ch == ',' && !in_str) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

Value parse_value(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') return parse_string(s, line);
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated array");
    const auto items = split_items(s.substr(1, s.size() - 2));
    if (!items.empty() && items.front().front() == '"') {
      std::vector<std::string> v;
      for (const auto& it : items) v.push_back(parse_string(it, line));
      return v;
    }
    std::vector<double> v;
    for (const auto& it : items) v.push_back(parse_double(it, line));
    return v;
  }
  return parse_double(s, line);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_value(const Value& v) {
  struct {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
    std::string operator()(const std::vector<double>& a) const {
      std::string out = "[";
      for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + format_number(a[i]);
      return out + "]";
    }
    std::string operator()(const std::vector<std::string>& a) const {
      std::string out = "[";
      for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", \"" : "\"") + a[i] + "\"";
      return out + "]";
    }
  } visit;
  return std::visit(visit, v);
}

template <class T>
const T* get_if_key(const std::map<std::string, Value>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return nullptr;
  const T* p = std::get_if<T>(&it->second);
  if (!p) throw ConfigError("config key '" + key + "' has the wrong type");
  return p;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string line, table;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[' && s.find('=') == std::string::npos) {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(n) + ": malformed table header");
      table = trim(s.substr(1, s.size() - 2));
      if (table.empty()) throw ConfigError("line " + std::to_string(n) + ": empty table name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(n) + ": empty key");
    const std::string full = table.empty() ? key : table + "." + key;
    if (doc.has(full)) throw ConfigError("line " + std::to_string(n) + ": duplicate key '" + full + "'");
    doc.values_[full] = parse_value(s.substr(eq + 1), n);
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

double ConfigDocument::number(const std::string& key, double fallback) const {
  const auto* p = get_if_key<double>(values_, key);
  return p ? *p : fallback;
}

std::string ConfigDocument::string(const std::string& key, const std::string& fallback) const {
  const auto* p = get_if_key<std::string>(values_, key);
  return p ? *p : fallback;
}

bool ConfigDocument::boolean(const std::string& key, bool fallback) const {
  const auto* p = get_if_key<bool>(values_, key);
  return p ? *p : fallback;
}

std::vector<double> ConfigDocument::numbers(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second)) return {*d};
  // An empty array parses as numeric.
  const auto* p = get_if_key<std::vector<double>>(values_, key);
  return *p;
}

std::vector<std::string> ConfigDocument::strings(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return {*s};
  if (const auto* d = std::get_if<std::vector<double>>(&it->second); d && d->empty()) return {};
  return *get_if_key<std::vector<std::string>>(values_, key);
}

std::string ConfigDocument::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + format_value(v) + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// a cos(kx + ly) + s sin(kx + ly)
void add_real_term(std::vector<TrigPolynomial2D::Term>& terms, int k, int l, double a, double s) {
  terms.push_back({k, l, Complex(a, -s) / 2.0});
  terms.push_back({-k, -l, Complex(a, s) / 2.0});
}

InitialData finish(std::string id, std::vector<TrigPolynomial2D::Term> terms) {
  InitialData d;
  d.id = std::move(id);
  d.poly = TrigPolynomial2D(std::move(terms));
  for (const auto& t : d.poly.terms())
    if (t.k == 0 && std::abs(t.c) > 0.0) throw ConfigError("initial data must be mean-zero in x (k = 0 term present)");
  const std::size_t n = 256;
  double ss = 0.0, lw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kTwoPi * static_cast<double>(i) / n;
    double col_sup = 0.0, col_dy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = kTwoPi * static_cast<double>(j) / n;
      const double v = d.poly(x, y), dv = d.poly.d_dy(x, y);
      ss += v * v;
      col_sup = std::max(col_sup, std::abs(v));
      col_dy = std::max(col_dy, std::abs(dv));
    }
    d.sup = std::max(d.sup, col_sup);
    d.dy_sup = std::max(d.dy_sup, col_dy);
    lw = std::max(lw, col_sup + col_dy);
  }
  d.l2 = std::sqrt(ss / static_cast<double>(n * n));
  d.linf_w1inf = lw;
  return d;
}

}  // namespace

InitialData initial_data(const std::string& id) {
  std::vector<TrigPolynomial2D::Term> t;
  if (id == "cosx") {
    add_real_term(t, 1, 0, 1.0, 0.0);
  } else if (id == "cosx_siny") {
    // cos x sin y = (sin(x + y) - sin(x - y)) / 2
    add_real_term(t, 1, 1, 0.0, 0.5);
    add_real_term(t, 1, -1, 0.0, -0.5);
  } else if (id == "cosx_cosy") {
    add_real_term(t, 1, 1, 0.5, 0.0);
    add_real_term(t, 1, -1, 0.5, 0.0);
  } else if (id == "cos2x_siny") {
    add_real_term(t, 2, 1, 0.0, 0.5);
    add_real_term(t, 2, -1, 0.0, -0.5);
  } else {
    throw ConfigError("unknown initial data id '" + id + "'");
  }
  return finish(id, std::move(t));
}

ModeField initial_modes(const InitialData& f0, std::size_t ny) {
  int K = 1;
  for (const auto& t : f0.poly.terms()) K = std::max(K, std::abs(t.k));
  ModeField m(ny, K);
  for (const auto& t : f0.poly.terms()) {
    auto prof = m.activate(t.k);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = kTwoPi * static_cast<double>(j) / static_cast<double>(ny);
      prof[j] += t.c * std::polar(1.0, t.l * y);
    }
  }
  return m;
}

ShearProfile shear_from_config(const ConfigDocument& doc) {
  const std::string spec = doc.string("shear.profile", "cos^1");
  if (spec.rfind("cos^", 0) == 0) {
    const double m = parse_double(spec.substr(4), 0);
    if (m != std::floor(m) || m < 1) throw ConfigError("cos power must be a positive integer");
    return ShearProfile::cos_power(static_cast<int>(m));
  }
  if (spec == "fourier") {
    const auto raw = doc.numbers("shear.modes", {});
    if (raw.empty() || raw.size() % 3 != 0) throw ConfigError("shear.modes must hold (n, cos, sin) triples");
    std::vector<FourierMode> modes;
    for (std::size_t i = 0; i < raw.size(); i += 3) modes.push_back({static_cast<int>(raw[i]), raw[i + 1], raw[i + 2]});
    const int order = static_cast<int>(doc.number("shear.order", 0));
    const auto pts = doc.numbers("shear.critical_points", {});
    const auto ords = doc.numbers("shear.critical_orders", {});
    if (pts.empty() || pts.size() != ords.size())
      throw ConfigError("fourier shear needs matching shear.critical_points and shear.critical_orders");
    CriticalStructure s;
    s.points = pts;
    for (double o : ords) {
      s.orders.push_back(static_cast<int>(o));
      s.max_order = std::max(s.max_order, static_cast<int>(o));
    }
    return ShearProfile::fourier_series(std::move(modes), order, s);
  }
  throw ConfigError("unknown shear profile '" + spec + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_items(text)) out.push_back(parse_double(item, 0));
  return out;
}

GoodEventParams ExperimentConfig::good_event() const {
  GoodEventParams g = p > 0.0 ? GoodEventParams{delta, p} : GoodEventParams::midpoint(delta, order);
  return g;
}

void ExperimentConfig::validate() const {
  if (nus.empty()) throw ConfigError("nu list is empty");
  for (double v : nus)
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("nu values must lie in [0, 1]");
  if (!(t_min > 0.0 && t_max > t_min)) throw ConfigError("need 0 < t_min < t_max");
  if (per_octave < 1) throw ConfigError("per_octave must be >= 1");
  if (ny != 0 && !is_power_of_two(ny)) throw ConfigError("grid ny must be a power of two");
  if (!is_power_of_two(nx)) throw ConfigError("grid nx must be a power of two");
  if (n_paths < 2) throw ConfigError("mc.n_paths must be >= 2");
  if (!is_power_of_two(fk_grid)) throw ConfigError("fk.grid must be a power of two");
  if (!(fk_t > 0.0)) throw ConfigError("fk.t must be positive");
  if (geometry_paths < 1 || tail_paths < 1) throw ConfigError("path counts must be positive");
  if (threshold <= 0.0 || threshold >= 1.0) throw ConfigError("dissipation threshold must lie in (0, 1)");
  if (c_mode != "calibrated" && c_mode != "fixed") throw ConfigError("lemma.c_mode must be 'calibrated' or 'fixed'");
  for (int k : ks)
    if (k == 0) throw ConfigError("oscillatory wavenumbers must be nonzero");
  try {
    good_event().validate(order);
    const auto s = analyze_critical_structure(shear);
    validate_critical_structure(shear, s);
    check_delta_separation(s, delta);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const NumericalError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig make_config(ConfigDocument doc, const Overrides& o) {
  if (o.out_dir) doc.set("run.out", *o.out_dir);
  if (o.seed) doc.set("run.seed", static_cast<double>(*o.seed));
  if (o.nus) doc.set("run.nu", *o.nus);
  // Threads and the output directory do not change results.
  ConfigDocument hashed = doc;
  hashed.erase("run.threads");
  hashed.erase("run.out");

  ExperimentConfig c;
  c.shear_spec = doc.string("shear.profile", "cos^1");
  c.shear = shear_from_config(doc);
  c.order = static_cast<int>(doc.number("shear.order", c.shear.declared_order()));
  if (c.order != c.shear.declared_order())
    throw ConfigError("shear.order " + std::to_string(c.order) + " does not match the profile's order " +
                      std::to_string(c.shear.declared_order()));
  c.nus = doc.numbers("run.nu", c.nus);
  c.master_seed = static_cast<std::uint64_t>(doc.number("run.seed", static_cast<double>(c.master_seed)));
  c.out_dir = doc.string("run.out", c.out_dir);
  c.threads = static_cast<unsigned>(doc.number("run.threads", 0));
  if (o.threads) c.threads = *o.threads;

  const std::string f0 = doc.string("initial.f0", "cosx_siny");
  if (f0 == "fourier") {
    const auto raw = doc.numbers("initial.terms", {});
    if (raw.empty() || raw.size() % 4 != 0) throw ConfigError("initial.terms must hold (k, l, cos, sin) quadruples");
    std::vector<TrigPolynomial2D::Term> t;
    for (std::size_t i = 0; i < raw.size(); i += 4)
      add_real_term(t, static_cast<int>(raw[i]), static_cast<int>(raw[i + 1]), raw[i + 2], raw[i + 3]);
    c.f0 = finish("fourier", std::move(t));
  } else {
    c.f0 = initial_data(f0);
  }

  std::vector<std::string> def_norms;
  for (auto id : c.norms) def_norms.push_back(norm_name(id));
  c.norms.clear();
  try {
    for (const auto& n : doc.strings("norms.ids", def_norms)) c.norms.push_back(parse_norm(n));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  c.t_min = doc.number("time.t_min", c.t_min);
  c.t_max = doc.number("time.t_max", c.t_max);
  c.per_octave = static_cast<int>(doc.number("time.per_octave", c.per_octave));
  c.ny = static_cast<std::size_t>(doc.number("time.ny", 0));
  c.nx = static_cast<std::size_t>(doc.number("time.nx", static_cast<double>(c.nx)));
  c.n_paths = static_cast<std::size_t>(doc.number("mc.n_paths", static_cast<double>(c.n_paths)));
  c.delta = doc.number("lemma.delta", c.delta);
  c.p = doc.number("lemma.p", 0.0);
  c.c_mode = doc.string("lemma.c_mode", c.c_mode);
  c.c = doc.number("lemma.c", c.c);
  c.pilot_paths = static_cast<std::size_t>(doc.number("lemma.pilot_paths", static_cast<double>(c.pilot_paths)));
  c.ks.clear();
  for (double k : doc.numbers("oscillatory.ks", {1, 2, 4, 8})) c.ks.push_back(static_cast<int>(k));
  c.F = doc.string("oscillatory.F", c.F);
  c.g = doc.string("oscillatory.g", c.g);
  c.threshold = doc.number("dissipation.threshold", c.threshold);
  c.fk_t = doc.number("fk.t", c.fk_t);
  c.fk_grid = static_cast<std::size_t>(doc.number("fk.grid", static_cast<double>(c.fk_grid)));
  c.geometry_paths = static_cast<std::size_t>(doc.number("geometry.paths", static_cast<double>(c.geometry_paths)));
  c.tail_paths = static_cast<std::size_t>(doc.number("lemma.tail_paths", static_cast<double>(c.tail_paths)));

  c.canonical = hashed.canonical();
  c.hash = fnv1a64(c.canonical);
  c.validate();
  return c;
}

}  // namespace shearmix::harness
