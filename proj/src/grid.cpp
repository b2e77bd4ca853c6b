#include "qhm/grid.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qhm {

namespace {

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

}  // namespace

int smallest_aligned_nx(Rational mu, int nx) {
  Rational two_mu = mu * 2;
  long long den = two_mu.denominator();
  long long k = den / std::gcd(den, static_cast<long long>(nx));
  return static_cast<int>(nx * k);
}

int smallest_aligned_ny(Rational nu, int ny) {
  Rational two_nu = nu * 2;
  long long den = two_nu.denominator();
  long long k = den / std::gcd(den, static_cast<long long>(ny));
  return static_cast<int>(ny * k);
}

GridSpec make_grid(int c, Rational mu, Rational nu, int nx_per_unit, int ny,
                   Rational x_lo, Rational x_hi, int p_radius, int margin) {
  if (c < 1) throw ConfigError("c must be a positive integer, got " + std::to_string(c));
  if (mu <= 0) throw ConfigError("mu must be positive, got " + rat_str(mu));
  if (nx_per_unit < 1 || ny < 2) throw ConfigError("grid resolutions must be positive");
  if (p_radius < 0) throw ConfigError("p_radius must be non-negative");
  if (!(x_lo < x_hi)) throw ConfigError("empty window [" + rat_str(x_lo) + ", " + rat_str(x_hi) + "]");

  Rational ex = mu * 2 * nx_per_unit;
  if (!is_integer(ex)) {
    throw ConfigError("misaligned mu: 2*mu*nx_per_unit = " + rat_str(ex) +
                      " is not an integer; smallest conforming nx_per_unit is " +
                      std::to_string(smallest_aligned_nx(mu, nx_per_unit)));
  }
  Rational ey = nu * 2 * ny;
  if (!is_integer(ey)) {
    throw ConfigError("misaligned nu: (2*nu mod 1)*ny is not an integer; smallest conforming ny is " +
                      std::to_string(smallest_aligned_ny(nu, ny)));
  }
  Rational lo = x_lo * nx_per_unit, hi = x_hi * nx_per_unit;
  if (!is_integer(lo) || !is_integer(hi)) {
    throw ConfigError("window endpoints must be multiples of 1/nx_per_unit");
  }

  GridSpec g;
  g.c = c;
  g.mu = mu;
  g.nu = nu;
  g.nx = nx_per_unit;
  g.ny = ny;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.P = p_radius;
  g.margin = margin;
  g.m_lo = lo.numerator();
  g.Nx = static_cast<int>(hi.numerator() - lo.numerator());
  g.Ne = static_cast<int>(ex.numerator());
  g.sy = static_cast<int>(pos_mod(ey.numerator(), ny));
  if (g.Nx <= 2 * margin + 8) throw ConfigError("window too small for the support margin");

  // Phase arguments c*k*p*(j/ny - p*nu) are rationals with denominator
  // ny*den(nu); tabulate e(n/D) once so phases are exact up to one rounding.
  g.phase_den = static_cast<long long>(ny) * nu.denominator();
  auto table = std::make_shared<std::vector<cplx>>(g.phase_den);
  for (long long n = 0; n < g.phase_den; ++n) {
    double t = 2.0 * kPi * static_cast<double>(n) / static_cast<double>(g.phase_den);
    (*table)[n] = cplx(std::cos(t), std::sin(t));
  }
  g.phase_table = table;
  return g;
}

cplx GridSpec::phase_D(long long k, long long p, long long j) const {
  if (k == 0 || p == 0) return 1.0;
  // c k p (j bnu - p anu ny) / (ny bnu)
  long long num = static_cast<long long>(c) * k * p *
                  (j * nu.denominator() - p * nu.numerator() * ny);
  return (*phase_table)[pos_mod(num, phase_den)];
}

cplx GridSpec::phase_E(long long k, long long p, long long j) const {
  if (k == 0 || p == 0) return 1.0;
  long long num = static_cast<long long>(c) * p * k *
                  (j * nu.denominator() - k * nu.numerator() * ny);
  return (*phase_table)[pos_mod(num, phase_den)];
}

bool GridSpec::same_as(const GridSpec& o) const {
  return c == o.c && mu == o.mu && nu == o.nu && nx == o.nx && ny == o.ny && x_lo == o.x_lo &&
         x_hi == o.x_hi && P == o.P;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "c=" << c << " mu=" << rat_str(mu) << " nu=" << rat_str(nu) << " nx=" << nx << " ny=" << ny
     << " window=[" << rat_str(x_lo) << "," << rat_str(x_hi) << "] P=" << P;
  return os.str();
}

GridSpec rescale(const GridSpec& g, int scale) {
  return make_grid(g.c, g.mu, g.nu, g.nx * scale, g.ny * scale, g.x_lo, g.x_hi, g.P, g.margin * scale);
}

GridSpec with_p_radius(const GridSpec& g, int P) {
  return make_grid(g.c, g.mu, g.nu, g.nx, g.ny, g.x_lo, g.x_hi, P, g.margin);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace qhm
