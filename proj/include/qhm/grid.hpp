#pragma once

#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhm {

using cplx = std::complex<double>;
using Rational = boost::rational<long long>;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

// Raised for malformed or misaligned configurations (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical precondition fails (support overflow, off-grid
// coordinates, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long long pos_mod(long long a, long long b) {
  long long r = a % b;
  return r < 0 ? r + b : r;
}

// Deformation parameters plus an aligned sampling of the plane.
//
// x samples are x_m = m / nx for integer m; the window stores m in
// [m_lo, m_lo + Nx).  y samples are y_j = j / ny on [0,1).
struct GridSpec {
  int c = 1;
  Rational mu{1, 2};
  Rational nu{1, 4};
  int nx = 128;
  int ny = 128;
  Rational x_lo{-4};
  Rational x_hi{4};
  int P = 4;
  int margin = 8;

  // Derived integers, filled by make_grid.
  long long m_lo = 0;
  int Nx = 0;       // window samples in x
  int Ne = 0;       // samples in the E fundamental domain [0, 2mu)
  int sy = 0;       // (2 nu * ny) mod ny: y-index shift of y -> y + 2nu
  long long phase_den = 1;
  std::shared_ptr<const std::vector<cplx>> phase_table;

  double h() const { return 1.0 / nx; }
  double hy() const { return 1.0 / ny; }
  double mu_d() const { return to_double(mu); }
  double nu_d() const { return to_double(nu); }
  double x_at(long long m) const { return static_cast<double>(m) / nx; }
  double y_at(long long j) const { return static_cast<double>(j) / ny; }
  double x_lo_d() const { return to_double(x_lo); }
  double x_hi_d() const { return to_double(x_hi); }
  std::size_t module_size() const { return static_cast<std::size_t>(Nx) * ny; }

  // e(c*k*p*(y_j - p*nu)), the rho-covariance phase.
  cplx phase_D(long long k, long long p, long long j) const;
  // e(c*p*k*(y_j - k*nu)), the gamma-covariance phase.
  cplx phase_E(long long k, long long p, long long j) const;

  bool same_as(const GridSpec& o) const;
  std::string describe() const;
};

GridSpec make_grid(int c, Rational mu, Rational nu, int nx_per_unit, int ny,
                   Rational x_lo, Rational x_hi, int p_radius, int margin = 8);

// Smallest multiplier k such that nx*k satisfies the x-alignment condition
// (used in error hints).
int smallest_aligned_nx(Rational mu, int nx);
int smallest_aligned_ny(Rational nu, int ny);

// Same parameters, resolutions multiplied by `scale`.
GridSpec rescale(const GridSpec& g, int scale);
// Same parameters and resolution, different p radius.
GridSpec with_p_radius(const GridSpec& g, int P);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace qhm
