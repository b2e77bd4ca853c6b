#include "qhm/bimodule.hpp"

#include <cmath>

namespace qhm {

std::atomic<long>& window_leaks() {
  static std::atomic<long> n{0};
  return n;
}

namespace {

// Mass of f that lands outside the window after an x-shift by `shift`
// samples: those samples are lost by the window representation.
double lost_mass(const ModuleField& f, long long shift) {
  const auto& g = f.grid;
  double m = 0.0;
  for (int i = 0; i < g.Nx; ++i) {
    long long t = i - shift;
    if (t >= 0 && t < g.Nx) continue;
    for (int j = 0; j < g.ny; ++j) m = std::max(m, std::abs(f.at(i, j)));
  }
  return m;
}

void check_leak(double lost, double scale, const char* where) {
  if (lost <= 1e-12 * scale) return;
  ++window_leaks();
  if (lost > 1e-6 * scale)
    throw NumericalError(std::string(where) + ": result support exceeds the window");
}

std::vector<int> nonzero_slices(const AlgebraField& a) {
  std::vector<int> out;
  for (int p = -a.P(); p <= a.P(); ++p)
    if (max_abs_slice(a, p) > 0.0) out.push_back(p);
  return out;
}

}  // namespace

namespace {

bool row_is_zero(const cplx* r, int n) {
  for (int j = 0; j < n; ++j)
    if (r[j] != cplx(0.0)) return false;
  return true;
}

}  // namespace

ModuleField act_left(const EField& psi, const ModuleField& f) {
  require_same_grid(psi.grid, f.grid, "act_left");
  const auto& g = f.grid;
  ModuleField out(g);
  std::vector<cplx> buf(g.ny);
  double scale = max_abs(f) * std::max(1.0, max_abs(psi));
  for (int q : nonzero_slices(psi)) {
    const long long sh = static_cast<long long>(q) * g.nx;
    // output at m reads f at m + q; inputs at m' contribute to m' - q
    check_leak(lost_mass(f, sh) * max_abs_slice(psi, q), scale, "act_left");
    for (int i = 0; i < g.Nx; ++i) {
      long long m = g.m_lo + i;
      long long src = i + sh;
      if (src < 0 || src >= g.Nx) continue;
      const cplx* fr = &f.v[static_cast<std::size_t>(src) * g.ny];
      cplx* o = &out.v[static_cast<std::size_t>(i) * g.ny];
      if (row_is_zero(fr, g.ny)) continue;
      psi.row(m, 0, q, buf.data());
      for (int j = 0; j < g.ny; ++j) o[j] += std::conj(buf[j]) * fr[j];
    }
  }
  return out;
}

ModuleField act_right(const ModuleField& f, const DField& phi) {
  require_same_grid(phi.grid, f.grid, "act_right");
  const auto& g = f.grid;
  ModuleField out(g);
  std::vector<cplx> buf(g.ny);
  double scale = max_abs(f) * std::max(1.0, max_abs(phi));
  for (int q : nonzero_slices(phi)) {
    const long long sh = static_cast<long long>(q) * g.Ne;
    const long long shy = static_cast<long long>(q) * g.sy;
    check_leak(lost_mass(f, sh) * max_abs_slice(phi, q), scale, "act_right");
    for (int i = 0; i < g.Nx; ++i) {
      long long src = i + sh;
      if (src < 0 || src >= g.Nx) continue;
      long long m = g.m_lo + src;
      cplx* o = &out.v[static_cast<std::size_t>(i) * g.ny];
      const cplx* fr = &f.v[static_cast<std::size_t>(src) * g.ny];
      if (row_is_zero(fr, g.ny)) continue;
      phi.row(m, shy, q, buf.data());
      long long js = pos_mod(shy, g.ny);
      for (int j = 0; j < g.ny; ++j) {
        o[j] += fr[js] * std::conj(buf[j]);
        if (++js == g.ny) js = 0;
      }
    }
  }
  return out;
}

std::pair<double, double> x_support(const ModuleField& f, double tol) {
  const auto& g = f.grid;
  double mx = max_abs(f);
  int lo = g.Nx, hi = -1;
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (std::abs(f.at(i, j)) > tol * mx && mx > 0.0) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
  if (hi < 0) return {1.0, 0.0};
  return {f.x(lo), f.x(hi)};
}

namespace {

// Largest |p| for which shifting by p*step can still overlap the supports.
void note_inner_clip(const ModuleField& f, const ModuleField& g, double step) {
  auto [fa, fb] = x_support(f);
  auto [ga, gb] = x_support(g);
  if (fa > fb || ga > gb) return;
  double reach = std::max(fb - ga, gb - fa);
  int pmax = static_cast<int>(std::floor(reach / step + 1e-12));
  if (pmax > f.grid.P) ++clip_events();
}

}  // namespace

DField inner_D(const ModuleField& f, const ModuleField& h) {
  require_same_grid(f.grid, h.grid, "inner_D");
  const auto& g = f.grid;
  note_inner_clip(f, h, 2.0 * g.mu_d());
  DField out(g);
  // k range such that x + k (x in [0,1)) meets the window
  long long k_lo = floor_div(g.m_lo, g.nx) - 1;
  long long k_hi = floor_div(g.m_lo + g.Nx, g.nx) + 1;
  std::vector<cplx> ph(g.ny);
  for (int p = -g.P; p <= g.P; ++p) {
    for (long long k = k_lo; k <= k_hi; ++k) {
      for (int j = 0; j < g.ny; ++j) ph[j] = std::conj(g.phase_D(k, p, j));
      for (int i = 0; i < g.nx; ++i) {
        long long m = i + k * g.nx;
        long long fi = m - g.m_lo;
        if (fi < 0 || fi >= g.Nx) continue;
        long long m2 = m - static_cast<long long>(p) * g.Ne;
        long long gi = m2 - g.m_lo;
        if (gi < 0 || gi >= g.Nx) continue;
        for (int j = 0; j < g.ny; ++j) {
          cplx fv = f.at(static_cast<int>(fi), j);
          if (fv == cplx(0.0)) continue;
          long long j2 = static_cast<long long>(j) - static_cast<long long>(p) * g.sy;
          cplx gv = h.at(static_cast<int>(gi), static_cast<int>(pos_mod(j2, g.ny)));
          if (gv == cplx(0.0)) continue;
          out.at(p, i, j) += ph[j] * fv * std::conj(gv);
        }
      }
    }
  }
  return out;
}

EField inner_E(const ModuleField& f, const ModuleField& h) {
  require_same_grid(f.grid, h.grid, "inner_E");
  const auto& g = f.grid;
  note_inner_clip(f, h, 1.0);
  EField out(g);
  // x - 2k mu must meet the window for x in [0, 2mu)
  long long k_lo = -floor_div(g.m_lo + g.Nx, g.Ne) - 1;
  long long k_hi = -floor_div(g.m_lo, g.Ne) + 1;
  std::vector<cplx> ph(g.ny);
  for (int p = -g.P; p <= g.P; ++p) {
    for (long long k = k_lo; k <= k_hi; ++k) {
      for (int j = 0; j < g.ny; ++j) ph[j] = g.phase_E(k, p, j);
      for (int i = 0; i < g.Ne; ++i) {
        long long m = i - k * g.Ne;
        long long fi = m - g.m_lo;
        if (fi < 0 || fi >= g.Nx) continue;
        long long gi = fi + static_cast<long long>(p) * g.nx;
        if (gi < 0 || gi >= g.Nx) continue;
        for (int j = 0; j < g.ny; ++j) {
          long long jj = pos_mod(static_cast<long long>(j) - k * g.sy, g.ny);
          cplx fv = f.at(static_cast<int>(fi), static_cast<int>(jj));
          if (fv == cplx(0.0)) continue;
          cplx gv = h.at(static_cast<int>(gi), static_cast<int>(jj));
          if (gv == cplx(0.0)) continue;
          out.at(p, i, j) += ph[j] * std::conj(fv) * gv;
        }
      }
    }
  }
  return out;
}

double Frame::left_gram_error() const { return max_abs(left_gram - make_identity_E(left_gram.grid)); }

double Frame::projection_error() const {
  double a = max_abs(d_mul(d_star(right_gram), right_gram) - right_gram);
  double b = max_abs(d_star(right_gram) - right_gram);
  return std::max(a, b);
}

Frame frame_normalize(const ModuleField& seed, const FrameOptions& opt) {
  EField G = inner_E(seed, seed);
  Frame fr;
  EField a = inv_sqrt_E(G, opt.inv_sqrt, &fr.normalization);
  fr.R = act_left(a, seed);
  fr.left_gram = inner_E(fr.R, fr.R);
  fr.right_gram = inner_D(fr.R, fr.R);
  if (fr.left_gram_error() > opt.gram_tol) {
    throw NumericalError("frame_normalize: left Gram differs from Id by " +
                         std::to_string(fr.left_gram_error()));
  }
  return fr;
}

}  // namespace qhm
