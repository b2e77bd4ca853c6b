#include "qhm/diff.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace qhm {

namespace {

constexpr double kFD[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr double kEdgeTol = 1e-9;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanPair get_plans(int rows, int n) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_pair(rows, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> buf(static_cast<std::size_t>(rows) * n);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  PlanPair pp;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  pp.fwd = fftw_plan_many_dft(1, &n, rows, p, nullptr, 1, n, p, nullptr, 1, n, FFTW_FORWARD, flags);
  pp.bwd = fftw_plan_many_dft(1, &n, rows, p, nullptr, 1, n, p, nullptr, 1, n, FFTW_BACKWARD, flags);
  cache[key] = pp;
  return pp;
}

// In-place spectral y-derivative of `rows` contiguous rows of length n.
double spectral_dy(std::vector<cplx>& data, int rows, int n) {
  PlanPair pp = get_plans(rows, n);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(pp.fwd, p, p);
  double total = 0.0, nyq = 0.0;
  for (int r = 0; r < rows; ++r) {
    cplx* row = data.data() + static_cast<std::size_t>(r) * n;
    for (int k = 0; k < n; ++k) {
      total += std::norm(row[k]);
      int m = k <= n / 2 ? k : k - n;
      if (n % 2 == 0 && k == n / 2) {
        nyq += std::norm(row[k]);
        row[k] = 0.0;
        continue;
      }
      row[k] *= cplx(0.0, 2.0 * kPi * m) / static_cast<double>(n);
    }
  }
  fftw_execute_dft(pp.bwd, p, p);
  return total > 0.0 ? std::sqrt(nyq / total) : 0.0;
}

template <class F>
F diff_x_alg(const F& f) {
  F out(f.grid);
  const auto& g = f.grid;
  const double s = g.nx;
  std::vector<cplx> bp(g.ny), bm(g.ny);
  for (int p = -g.P; p <= g.P; ++p) {
    for (int i = 0; i < f.L; ++i) {
      cplx* o = &out.at(p, i, 0);
      for (int k = 1; k <= 4; ++k) {
        f.row(i + k, 0, p, bp.data());
        f.row(i - k, 0, p, bm.data());
        for (int j = 0; j < g.ny; ++j) o[j] += kFD[k - 1] * s * (bp[j] - bm[j]);
      }
    }
  }
  return out;
}

template <class F>
F diff_y_alg(const F& f) {
  F out = f;
  spectral_dy(out.v, static_cast<int>(out.v.size() / f.grid.ny), f.grid.ny);
  return out;
}

}  // namespace

ModuleField diff_x(const ModuleField& f) {
  const auto& g = f.grid;
  double scale = std::max(1.0, max_abs(f));
  if (edge_mass(f, 4) > kEdgeTol * scale)
    throw NumericalError("diff_x: support touches the window edge");
  ModuleField out(g);
  const double s = g.nx;
  for (int i = 0; i < g.Nx; ++i) {
    for (int k = 1; k <= 4; ++k) {
      int ip = i + k, im = i - k;
      const cplx* rp = ip < g.Nx ? &f.v[static_cast<std::size_t>(ip) * g.ny] : nullptr;
      const cplx* rm = im >= 0 ? &f.v[static_cast<std::size_t>(im) * g.ny] : nullptr;
      cplx* o = &out.v[static_cast<std::size_t>(i) * g.ny];
      double w = kFD[k - 1] * s;
      for (int j = 0; j < g.ny; ++j) {
        cplx a = rp ? rp[j] : cplx(0.0);
        cplx b = rm ? rm[j] : cplx(0.0);
        o[j] += w * (a - b);
      }
    }
  }
  return out;
}

ModuleField diff_y(const ModuleField& f, double* nyquist) {
  ModuleField out = f;
  double r = spectral_dy(out.v, f.grid.Nx, f.grid.ny);
  if (nyquist) *nyquist = r;
  return out;
}

DField diff_x(const DField& f) { return diff_x_alg(f); }
EField diff_x(const EField& f) { return diff_x_alg(f); }
DField diff_y(const DField& f) { return diff_y_alg(f); }
EField diff_y(const EField& f) { return diff_y_alg(f); }

cplx integrate(const GridSpec& g, const std::vector<cplx>& samples, Cell cell) {
  cplx s = 0.0;
  for (const auto& z : samples) s += z;
  (void)cell;
  // Each sample stands for an h x hy rectangle regardless of the cell.
  return s * g.h() * g.hy();
}

cplx integrate(const GridSpec& g, const std::function<cplx(double, double)>& f, Cell cell) {
  int L = cell == Cell::Unit ? g.nx : g.Ne;
  std::vector<cplx> s(static_cast<std::size_t>(L) * g.ny);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < g.ny; ++j) s[static_cast<std::size_t>(i) * g.ny + j] = f(g.x_at(i), g.y_at(j));
  return integrate(g, s, cell);
}

double boole_weight(int k, int n) {
  if (n % 4 != 0) throw std::invalid_argument("boole_weight: n must be divisible by 4");
  if (k == 0 || k == n) return 7.0 * 2.0 / 45.0;
  int r = k % 4;
  if (r == 0) return 14.0 * 2.0 / 45.0;
  if (r == 2) return 12.0 * 2.0 / 45.0;
  return 32.0 * 2.0 / 45.0;
}

}  // namespace qhm
