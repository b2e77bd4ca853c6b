#include "qhm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace qhm {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "[a, b, c]" -> {"a", "b", "c"}; a bare scalar gives one item.
std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  if (s.empty() || s.front() != '[') return {s};
  if (s.back() != ']') throw ConfigError("'" + key + "': unterminated list '" + s + "'");
  std::vector<std::string> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_ll(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected an integer, got '" + s + "'");
  }
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + s + "'");
  }
}

int parse_int(const std::string& key, const std::string& s) { return static_cast<int>(parse_ll(key, s)); }

Rational rational_value(const std::string& key, const std::string& v) {
  auto items = split_list(key, v);
  try {
    if (items.size() == 2) {
      long long d = parse_ll(key, items[1]);
      if (d == 0) throw ConfigError("'" + key + "': zero denominator");
      return Rational(parse_ll(key, items[0]), d);
    }
    if (items.size() == 1) return parse_rational(items[0]);
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
  throw ConfigError("'" + key + "': expected num/den or [num, den], got '" + v + "'");
}

std::string rat(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

}  // namespace

Rational parse_rational(const std::string& s0) {
  std::string s = trim(s0);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_ll("rational", s));
  long long n = parse_ll("rational", trim(s.substr(0, slash)));
  long long d = parse_ll("rational", trim(s.substr(slash + 1)));
  if (d == 0) throw ConfigError("zero denominator in '" + s + "'");
  return Rational(n, d);
}

GridSpec RunConfig::grid(int scale) const {
  if (scale < 1) throw ConfigError("grid scale must be a positive integer");
  return make_grid(c, mu, nu, nx_per_unit * scale, ny * scale, x_lo, x_hi, p_radius, 8 * scale);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");

    if (key == "c") {
      cfg.c = parse_int(key, val);
    } else if (key == "mu") {
      cfg.mu = rational_value(key, val);
    } else if (key == "nu") {
      cfg.nu = rational_value(key, val);
    } else if (key == "nx_per_unit") {
      cfg.nx_per_unit = parse_int(key, val);
    } else if (key == "ny") {
      cfg.ny = parse_int(key, val);
    } else if (key == "window") {
      auto items = split_list(key, val);
      if (items.size() != 2) throw ConfigError("'window': expected [lo, hi]");
      cfg.x_lo = parse_rational(items[0]);
      cfg.x_hi = parse_rational(items[1]);
    } else if (key == "p_radius") {
      cfg.p_radius = parse_int(key, val);
    } else if (key == "tolerances.alg") {
      cfg.tol.alg = parse_double(key, val);
    } else if (key == "tolerances.calc") {
      cfg.tol.calc = parse_double(key, val);
    } else if (key == "tolerances") {
      // {alg: 1e-10, calc: 1e-6}
      std::string s = val;
      std::replace(s.begin(), s.end(), '{', ' ');
      std::replace(s.begin(), s.end(), '}', ' ');
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("'tolerances': expected {alg: a, calc: b}");
        std::string k = trim(item.substr(0, colon)), v = trim(item.substr(colon + 1));
        if (k == "alg") cfg.tol.alg = parse_double("tolerances.alg", v);
        else if (k == "calc") cfg.tol.calc = parse_double("tolerances.calc", v);
        else throw ConfigError("'tolerances': unknown entry '" + k + "'");
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_ll(key, val));
    } else if (key == "connection.kind") {
      cfg.connection.kind = val;
    } else if (key == "connection.base") {
      cfg.connection.base = val;
    } else if (key == "connection.alpha") {
      cfg.connection.alpha = parse_double(key, val);
    } else if (key == "connection.seed_sigma") {
      cfg.connection.seed_sigma = parse_double(key, val);
    } else if (key == "connection.coefficients") {
      cfg.connection.coefficients.clear();
      for (const auto& s : split_list(key, val)) cfg.connection.coefficients.push_back(parse_double(key, s));
    } else {
      cfg.extra[key] = val;
    }
  }
  cfg.tol.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "c = " << cfg.c << "\n";
  os << "mu = [" << cfg.mu.numerator() << ", " << cfg.mu.denominator() << "]\n";
  os << "nu = [" << cfg.nu.numerator() << ", " << cfg.nu.denominator() << "]\n";
  os << "nx_per_unit = " << cfg.nx_per_unit << "\n";
  os << "ny = " << cfg.ny << "\n";
  os << "window = [" << rat(cfg.x_lo) << ", " << rat(cfg.x_hi) << "]\n";
  os << "p_radius = " << cfg.p_radius << "\n";
  os << "tolerances.alg = " << cfg.tol.alg << "\n";
  os << "tolerances.calc = " << cfg.tol.calc << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "connection.kind = " << cfg.connection.kind << "\n";
  os << "connection.base = " << cfg.connection.base << "\n";
  os << "connection.alpha = " << cfg.connection.alpha << "\n";
  os << "connection.seed_sigma = " << cfg.connection.seed_sigma << "\n";
  if (!cfg.connection.coefficients.empty()) {
    os << "connection.coefficients = [";
    for (std::size_t i = 0; i < cfg.connection.coefficients.size(); ++i)
      os << (i ? ", " : "") << cfg.connection.coefficients[i];
    os << "]\n";
  }
  for (const auto& [k, v] : cfg.extra) os << k << " = " << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void write_header(std::ostream& os, const char* type, const GridSpec& g, std::size_t n) {
  os << "qhm-field " << type << " c=" << g.c << " mu=" << rat(g.mu) << " nu=" << rat(g.nu) << " nx=" << g.nx
     << " ny=" << g.ny << " x_lo=" << rat(g.x_lo) << " x_hi=" << rat(g.x_hi) << " P=" << g.P
     << " margin=" << g.margin << " n=" << n << "\n";
}

void write_values(std::ostream& os, const std::vector<cplx>& v) {
  os << std::setprecision(17);
  for (const auto& z : v) os << z.real() << " " << z.imag() << "\n";
}

std::pair<GridSpec, std::size_t> read_header(std::istream& is, const char* expected) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("field dump: missing header");
  std::stringstream ss(line);
  std::string magic, type;
  ss >> magic >> type;
  if (magic != "qhm-field") throw ConfigError("field dump: bad magic '" + magic + "'");
  if (type != expected) throw ConfigError("field dump: expected " + std::string(expected) + ", found " + type);
  std::map<std::string, std::string> kv;
  std::string tok;
  while (ss >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("field dump: bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto get = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError(std::string("field dump: header lacks ") + k);
    return it->second;
  };
  GridSpec g = make_grid(parse_int("c", get("c")), parse_rational(get("mu")), parse_rational(get("nu")),
                         parse_int("nx", get("nx")), parse_int("ny", get("ny")), parse_rational(get("x_lo")),
                         parse_rational(get("x_hi")), parse_int("P", get("P")), parse_int("margin", get("margin")));
  return {g, static_cast<std::size_t>(parse_ll("n", get("n")))};
}

void read_values(std::istream& is, std::vector<cplx>& v, std::size_t n) {
  if (v.size() != n) throw ConfigError("field dump: sample count does not match the grid");
  for (auto& z : v) {
    double re, im;
    if (!(is >> re >> im)) throw ConfigError("field dump: truncated data");
    z = cplx(re, im);
  }
}

}  // namespace

void write_field(std::ostream& os, const ModuleField& f) {
  write_header(os, "module", f.grid, f.v.size());
  write_values(os, f.v);
}

void write_field(std::ostream& os, const EField& f) {
  write_header(os, "E", f.grid, f.v.size());
  write_values(os, f.v);
}

void write_field(std::ostream& os, const DField& f) {
  write_header(os, "D", f.grid, f.v.size());
  write_values(os, f.v);
}

ModuleField read_module_field(std::istream& is) {
  auto [g, n] = read_header(is, "module");
  ModuleField f(g);
  read_values(is, f.v, n);
  return f;
}

EField read_e_field(std::istream& is) {
  auto [g, n] = read_header(is, "E");
  EField f(g);
  read_values(is, f.v, n);
  return f;
}

DField read_d_field(std::istream& is) {
  auto [g, n] = read_header(is, "D");
  DField f(g);
  read_values(is, f.v, n);
  return f;
}

}  // namespace qhm
