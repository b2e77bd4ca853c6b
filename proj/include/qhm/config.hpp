#pragma once

#include "qhm/algebra.hpp"

#include <iosfwd>
#include <map>
#include <optional>

namespace qhm {

// Key/value run configuration.  One `key = value` per line, `#` starts a
// comment.  Rationals are written `3/4` or `[3, 4]`; the window is
// `[lo, hi]` with rational endpoints; lists are `[a, b, ...]`.
//
//   c = 1
//   mu = [1, 2]
//   nu = [1, 4]
//   nx_per_unit = 128
//   ny = 128
//   window = [-4, 4]
//   p_radius = 4
//   tolerances.alg = 1e-10
//   tolerances.calc = 1e-6
//   connection.kind = thm51
//   connection.base = nabla0
//   connection.alpha = 0.125
//   connection.coefficients = [1, 0]
struct ConnectionSpec {
  std::string kind = "nabla0";  // nabla0 | nabla1 | thm51 | thm47 | example48 | grassmannian
  std::string base = "nabla0";  // what the perturbed kinds are built on
  double alpha = 0.125;
  std::vector<double> coefficients;
  double seed_sigma = 0.3;      // grassmannian frame seed
};

struct RunConfig {
  int c = 1;
  Rational mu{1, 2};
  Rational nu{1, 4};
  int nx_per_unit = 128;
  int ny = 128;
  Rational x_lo{-4};
  Rational x_hi{4};
  int p_radius = 4;
  ToleranceSet tol;
  std::uint64_t seed = 7;
  ConnectionSpec connection;
  std::map<std::string, std::string> extra;  // unrecognized keys, kept for reports

  GridSpec grid(int scale = 1) const;
};

Rational parse_rational(const std::string& s);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& cfg);

// Text dumps of fields: a header line with the GridSpec followed by one
// `re im` pair per sample in storage order.
void write_field(std::ostream& os, const ModuleField& f);
void write_field(std::ostream& os, const EField& f);
void write_field(std::ostream& os, const DField& f);
ModuleField read_module_field(std::istream& is);
EField read_e_field(std::istream& is);
DField read_d_field(std::istream& is);

}  // namespace qhm
