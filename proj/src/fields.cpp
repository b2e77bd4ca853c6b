#include "qhm/fields.hpp"

#include <algorithm>
#include <cmath>

namespace qhm {

ModuleField& ModuleField::operator+=(const ModuleField& o) {
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
  return *this;
}
ModuleField& ModuleField::operator-=(const ModuleField& o) {
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
  return *this;
}
ModuleField& ModuleField::operator*=(cplx a) {
  for (auto& z : v) z *= a;
  return *this;
}
ModuleField operator+(ModuleField a, const ModuleField& b) { return a += b; }
ModuleField operator-(ModuleField a, const ModuleField& b) { return a -= b; }
ModuleField operator*(cplx a, ModuleField b) { return b *= a; }

ModuleField sample_module(const GridSpec& g, const std::function<cplx(double, double)>& f) {
  ModuleField out(g);
  for (int i = 0; i < g.Nx; ++i) {
    double x = out.x(i);
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(x, g.y_at(j));
  }
  return out;
}

ModuleField multiply(const ModuleField& f, const std::function<cplx(double, double)>& m) {
  ModuleField out(f.grid);
  const auto& g = f.grid;
  for (int i = 0; i < g.Nx; ++i) {
    double x = f.x(i);
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = m(x, g.y_at(j)) * f.at(i, j);
  }
  return out;
}

ModuleField conj(const ModuleField& f) {
  ModuleField out = f;
  for (auto& z : out.v) z = std::conj(z);
  return out;
}

double norm(const ModuleField& f) {
  double s = 0.0;
  for (const auto& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.grid.h() * f.grid.hy());
}

double max_abs(const ModuleField& f) {
  double m = 0.0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

double edge_mass(const ModuleField& f, int cells) {
  const auto& g = f.grid;
  double m = 0.0;
  for (int i = 0; i < std::min(cells, g.Nx); ++i) {
    for (int j = 0; j < g.ny; ++j) {
      m = std::max(m, std::abs(f.at(i, j)));
      m = std::max(m, std::abs(f.at(g.Nx - 1 - i, j)));
    }
  }
  return m;
}

double norm(const AlgebraField& a) {
  double s = 0.0;
  for (const auto& z : a.v) s += std::norm(z);
  return std::sqrt(s * a.grid.h() * a.grid.hy());
}

double max_abs(const AlgebraField& a) {
  double m = 0.0;
  for (const auto& z : a.v) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_slice(const AlgebraField& a, int p) {
  if (std::abs(p) > a.P()) return 0.0;
  double m = 0.0;
  std::size_t base = a.idx(p, 0, 0);
  for (std::size_t k = 0; k < a.slice_size(); ++k) m = std::max(m, std::abs(a.v[base + k]));
  return m;
}

double max_abs_offdiag(const AlgebraField& a) {
  double m = 0.0;
  for (int p = -a.P(); p <= a.P(); ++p)
    if (p != 0) m = std::max(m, max_abs_slice(a, p));
  return m;
}

int support_radius(const AlgebraField& a, double tol) {
  int r = 0;
  for (int p = -a.P(); p <= a.P(); ++p)
    if (max_abs_slice(a, p) > tol) r = std::max(r, std::abs(p));
  return r;
}

cplx DField::value(long long m, long long j, int p) const {
  if (std::abs(p) > grid.P) return 0.0;
  long long k = floor_div(m, grid.nx);
  int i = static_cast<int>(m - k * grid.nx);
  long long jj = pos_mod(j, grid.ny);
  cplx s = at(p, i, static_cast<int>(jj));
  if (k == 0 || p == 0) return s;
  return grid.phase_D(k, p, jj) * s;
}

cplx EField::value(long long m, long long j, int p) const {
  if (std::abs(p) > grid.P) return 0.0;
  long long k = floor_div(m, grid.Ne);
  int i = static_cast<int>(m - k * grid.Ne);
  long long jj = pos_mod(j, grid.ny);
  long long js = pos_mod(jj - k * grid.sy, grid.ny);
  cplx s = at(p, i, static_cast<int>(js));
  if (k == 0 || p == 0) return s;
  return grid.phase_E(k, p, jj) * s;
}

namespace {

// out[t] = phase(jj) * s[js] for jj = (j0 + t) mod ny, js = (jj - jshift) mod ny,
// with phase index (A jj + B) mod D.
void phased_row(const GridSpec& g, const cplx* s, long long j0, long long jshift, long long A, long long B,
                bool trivial, cplx* out) {
  const int ny = g.ny;
  long long jj = pos_mod(j0, ny);
  long long js = pos_mod(jj - jshift, ny);
  if (trivial) {
    for (int t = 0; t < ny; ++t) {
      out[t] = s[js];
      if (++js == ny) js = 0;
    }
    return;
  }
  const long long D = g.phase_den;
  const auto& tab = *g.phase_table;
  const long long Am = pos_mod(A, D), Bm = pos_mod(B, D);
  long long idx = pos_mod(Am * jj + Bm, D);
  for (int t = 0; t < ny; ++t) {
    out[t] = tab[idx] * s[js];
    if (++js == ny) js = 0;
    if (++jj == ny) {
      jj = 0;
      idx = Bm;
    } else {
      idx += Am;
      if (idx >= D) idx -= D;
    }
  }
}

}  // namespace

void DField::row(long long m, long long j0, int p, cplx* out) const {
  if (std::abs(p) > grid.P) {
    std::fill(out, out + grid.ny, cplx(0.0));
    return;
  }
  long long k = floor_div(m, grid.nx);
  int i = static_cast<int>(m - k * grid.nx);
  const long long ckp = static_cast<long long>(grid.c) * k * p;
  phased_row(grid, &at(p, i, 0), j0, 0, ckp * grid.nu.denominator(),
             -ckp * p * grid.nu.numerator() * grid.ny, k == 0 || p == 0, out);
}

void EField::row(long long m, long long j0, int p, cplx* out) const {
  if (std::abs(p) > grid.P) {
    std::fill(out, out + grid.ny, cplx(0.0));
    return;
  }
  long long k = floor_div(m, grid.Ne);
  int i = static_cast<int>(m - k * grid.Ne);
  const long long cpk = static_cast<long long>(grid.c) * p * k;
  phased_row(grid, &at(p, i, 0), j0, k * grid.sy, cpk * grid.nu.denominator(),
             -cpk * k * grid.nu.numerator() * grid.ny, k == 0 || p == 0, out);
}

namespace {

void aligned_indices(const GridSpec& g, double x, double y, long long& m, long long& j) {
  double mx = x * g.nx, my = y * g.ny;
  m = std::llround(mx);
  j = std::llround(my);
  if (std::abs(mx - static_cast<double>(m)) > 1e-7 || std::abs(my - static_cast<double>(j)) > 1e-7)
    throw std::invalid_argument("coordinates are not grid-aligned");
}

}  // namespace

cplx eval_D(const DField& f, double x, double y, int p) {
  long long m, j;
  aligned_indices(f.grid, x, y, m, j);
  return f.value(m, j, p);
}

cplx eval_E(const EField& f, double x, double y, int p) {
  long long m, j;
  aligned_indices(f.grid, x, y, m, j);
  return f.value(m, j, p);
}

DField sample_D(const GridSpec& g, const std::function<cplx(double, double, int)>& f) {
  DField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) out.at(p, i, j) = f(g.x_at(i), g.y_at(j), p);
  return out;
}

EField sample_E(const GridSpec& g, const std::function<cplx(double, double, int)>& f) {
  EField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.Ne; ++i)
      for (int j = 0; j < g.ny; ++j) out.at(p, i, j) = f(g.x_at(i), g.y_at(j), p);
  return out;
}

}  // namespace qhm
