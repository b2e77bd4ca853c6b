#pragma once

#include "qhm/grid.hpp"

#include <functional>
#include <type_traits>
#include <vector>

namespace qhm {

// A sampled element of the bimodule: values over (window) x [0,1).
// Values outside the window are taken to be zero.
struct ModuleField {
  GridSpec grid;
  std::vector<cplx> v;  // index i*ny + j, x_m with m = m_lo + i

  ModuleField() = default;
  explicit ModuleField(const GridSpec& g) : grid(g), v(g.module_size(), cplx(0.0)) {}

  cplx& at(int i, int j) { return v[static_cast<std::size_t>(i) * grid.ny + j]; }
  const cplx& at(int i, int j) const { return v[static_cast<std::size_t>(i) * grid.ny + j]; }
  // Value at absolute x-index m (zero outside the window), y-index j mod ny.
  cplx value(long long m, long long j) const {
    long long i = m - grid.m_lo;
    if (i < 0 || i >= grid.Nx) return 0.0;
    return v[static_cast<std::size_t>(i) * grid.ny + pos_mod(j, grid.ny)];
  }
  double x(int i) const { return grid.x_at(grid.m_lo + i); }

  ModuleField& operator+=(const ModuleField& o);
  ModuleField& operator-=(const ModuleField& o);
  ModuleField& operator*=(cplx a);
};

ModuleField operator+(ModuleField a, const ModuleField& b);
ModuleField operator-(ModuleField a, const ModuleField& b);
ModuleField operator*(cplx a, ModuleField b);

ModuleField sample_module(const GridSpec& g, const std::function<cplx(double, double)>& f);
// Pointwise product with a function of (x, y).
ModuleField multiply(const ModuleField& f, const std::function<cplx(double, double)>& m);
ModuleField conj(const ModuleField& f);

// Discrete L2 norm over the window.
double norm(const ModuleField& f);
double max_abs(const ModuleField& f);
// Largest |value| within `cells` samples of either window edge.
double edge_mass(const ModuleField& f, int cells);

// Covariant algebra element: samples on a fundamental domain for each p in
// [-P, P].  For D the domain is [0,1) (nx samples), for E it is [0,2mu)
// (Ne samples).  Out-of-domain values come from the covariance phase.
struct AlgebraField {
  GridSpec grid;
  int L = 0;  // samples per fundamental cell in x
  std::vector<cplx> v;  // ((p+P)*L + i)*ny + j

  AlgebraField() = default;
  AlgebraField(const GridSpec& g, int len)
      : grid(g), L(len), v(static_cast<std::size_t>(2 * g.P + 1) * len * g.ny, cplx(0.0)) {}

  std::size_t idx(int p, int i, int j) const {
    return (static_cast<std::size_t>(p + grid.P) * L + i) * grid.ny + j;
  }
  cplx& at(int p, int i, int j) { return v[idx(p, i, j)]; }
  const cplx& at(int p, int i, int j) const { return v[idx(p, i, j)]; }
  int P() const { return grid.P; }
  std::size_t slice_size() const { return static_cast<std::size_t>(L) * grid.ny; }
};

struct DField : AlgebraField {
  DField() = default;
  explicit DField(const GridSpec& g) : AlgebraField(g, g.nx) {}
  // Value at absolute x index m, y index j, frequency p (rho covariance).
  cplx value(long long m, long long j, int p) const;
  // out[t] = value(m, j0 + t, p) for t in [0, ny).
  void row(long long m, long long j0, int p, cplx* out) const;
};

struct EField : AlgebraField {
  EField() = default;
  explicit EField(const GridSpec& g) : AlgebraField(g, g.Ne) {}
  // Value at absolute x index m, y index j, frequency p (gamma covariance).
  cplx value(long long m, long long j, int p) const;
  void row(long long m, long long j0, int p, cplx* out) const;
};

template <class F>
  requires std::is_base_of_v<AlgebraField, F>
F operator+(F a, const F& b) {
  for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] += b.v[k];
  return a;
}
template <class F>
  requires std::is_base_of_v<AlgebraField, F>
F operator-(F a, const F& b) {
  for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] -= b.v[k];
  return a;
}
template <class F>
  requires std::is_base_of_v<AlgebraField, F>
F scale(cplx s, F a) {
  for (auto& z : a.v) z *= s;
  return a;
}

// L2 norm over the fundamental domain and all p (cell-area weighted).
double norm(const AlgebraField& a);
double max_abs(const AlgebraField& a);
double max_abs_slice(const AlgebraField& a, int p);
// Largest |value| over slices with p != 0.
double max_abs_offdiag(const AlgebraField& a);
// Largest p with a slice above `tol` (0 if only p = 0).
int support_radius(const AlgebraField& a, double tol);

// Coordinate-level evaluation.  Coordinates must be
// grid-aligned; |p| > P returns 0.
cplx eval_D(const DField& f, double x, double y, int p);
cplx eval_E(const EField& f, double x, double y, int p);

// Build from a function on the fundamental domain.
DField sample_D(const GridSpec& g, const std::function<cplx(double, double, int)>& f);
EField sample_E(const GridSpec& g, const std::function<cplx(double, double, int)>& f);

}  // namespace qhm
