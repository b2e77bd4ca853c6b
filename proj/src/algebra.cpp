#include "qhm/algebra.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qhm {

void ToleranceSet::validate() const {
  if (!(alg > 0.0 && alg <= calc && calc < 1.0))
    throw ConfigError("tolerances must satisfy 0 < alg <= calc < 1");
}

std::atomic<long>& clip_events() {
  static std::atomic<long> n{0};
  return n;
}

namespace {

std::vector<int> active_slices(const AlgebraField& a) {
  std::vector<int> ps;
  for (int p = -a.P(); p <= a.P(); ++p)
    if (max_abs_slice(a, p) > 0.0) ps.push_back(p);
  return ps;
}

void note_clipping(const AlgebraField& a, const AlgebraField& b) {
  int ra = 0, rb = 0;
  for (int p : active_slices(a)) ra = std::max(ra, std::abs(p));
  for (int p : active_slices(b)) rb = std::max(rb, std::abs(p));
  if (ra + rb > a.P()) ++clip_events();
}

}  // namespace

DField d_mul(const DField& a, const DField& b) {
  require_same_grid(a.grid, b.grid, "d_mul");
  note_clipping(a, b);
  const auto& g = a.grid;
  DField out(g);
  auto qa = active_slices(a);
  auto qb = active_slices(b);
  std::vector<char> b_on(2 * g.P + 1, 0);
  std::vector<cplx> buf(g.ny);
  for (int p : qb) b_on[p + g.P] = 1;
  for (int p = -g.P; p <= g.P; ++p) {
    for (int q : qa) {
      int r = p - q;
      if (std::abs(r) > g.P || !b_on[r + g.P]) continue;
      // Phi1(x,y,q) Phi2(x - 2q mu, y - 2q nu, p - q)
      for (int i = 0; i < g.nx; ++i) {
        long long m = static_cast<long long>(i) - static_cast<long long>(q) * g.Ne;
        b.row(m, -static_cast<long long>(q) * g.sy, r, buf.data());
        const cplx* ar = &a.at(q, i, 0);
        cplx* o = &out.at(p, i, 0);
        for (int j = 0; j < g.ny; ++j) o[j] += ar[j] * buf[j];
      }
    }
  }
  return out;
}

EField e_mul(const EField& a, const EField& b) {
  require_same_grid(a.grid, b.grid, "e_mul");
  note_clipping(a, b);
  const auto& g = a.grid;
  EField out(g);
  auto qa = active_slices(a);
  auto qb = active_slices(b);
  std::vector<char> b_on(2 * g.P + 1, 0);
  std::vector<cplx> buf(g.ny);
  for (int p : qb) b_on[p + g.P] = 1;
  for (int p = -g.P; p <= g.P; ++p) {
    for (int q : qa) {
      int r = p - q;
      if (std::abs(r) > g.P || !b_on[r + g.P]) continue;
      // Psi1(x,y,q) Psi2(x + q, y, p - q)
      for (int i = 0; i < g.Ne; ++i) {
        long long m = static_cast<long long>(i) + static_cast<long long>(q) * g.nx;
        b.row(m, 0, r, buf.data());
        const cplx* ar = &a.at(q, i, 0);
        cplx* o = &out.at(p, i, 0);
        for (int j = 0; j < g.ny; ++j) o[j] += ar[j] * buf[j];
      }
    }
  }
  return out;
}

DField d_star(const DField& a) {
  const auto& g = a.grid;
  DField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.nx; ++i) {
      long long m = static_cast<long long>(i) - static_cast<long long>(p) * g.Ne;
      cplx* o = &out.at(p, i, 0);
      a.row(m, -static_cast<long long>(p) * g.sy, -p, o);
      for (int j = 0; j < g.ny; ++j) o[j] = std::conj(o[j]);
    }
  return out;
}

EField e_star(const EField& a) {
  const auto& g = a.grid;
  EField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.Ne; ++i) {
      long long m = static_cast<long long>(i) + static_cast<long long>(p) * g.nx;
      cplx* o = &out.at(p, i, 0);
      a.row(m, 0, -p, o);
      for (int j = 0; j < g.ny; ++j) o[j] = std::conj(o[j]);
    }
  return out;
}

namespace {

template <class F>
cplx trace_slice0(const F& a) {
  cplx s = 0.0;
  std::size_t base = a.idx(0, 0, 0);
  for (std::size_t k = 0; k < a.slice_size(); ++k) s += a.v[base + k];
  return s * a.grid.h() * a.grid.hy();
}

}  // namespace

cplx trace_D(const DField& a) { return trace_slice0(a); }
cplx trace_E(const EField& a) { return trace_slice0(a); }

DField make_identity_D(const GridSpec& g) {
  DField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(0, i, j) = 1.0;
  return out;
}

EField make_identity_E(const GridSpec& g) {
  EField out(g);
  for (int i = 0; i < g.Ne; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(0, i, j) = 1.0;
  return out;
}

EField make_mult_type_E(const GridSpec& g, const std::function<cplx(double, double)>& G) {
  EField out(g);
  for (int i = 0; i < g.Ne; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(0, i, j) = G(g.x_at(i), g.y_at(j));
  return out;
}

DField make_mult_type_D(const GridSpec& g, const std::function<cplx(double, double)>& G) {
  DField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(0, i, j) = G(g.x_at(i), g.y_at(j));
  return out;
}

double invariance_residual(const GridSpec& g, const std::function<cplx(long long, long long, int)>& F,
                           Action which) {
  double r = 0.0;
  const int L = which == Action::Rho ? g.nx : g.Ne;
  for (int p = -g.P; p <= g.P; ++p) {
    for (int k : {-2, -1, 1, 2}) {
      for (int i = 0; i < L; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          cplx lhs, rhs;
          if (which == Action::Rho) {
            // Phi(x + k, y, p) = e(ckp(y - p nu)) Phi(x, y, p)
            lhs = F(i + static_cast<long long>(k) * g.nx, j, p);
            rhs = g.phase_D(k, p, j) * F(i, j, p);
          } else {
            // Psi(x, y, p) = e(cpk(y - k nu)) Psi(x - 2k mu, y - 2k nu, p)
            lhs = F(i, j, p);
            rhs = g.phase_E(k, p, j) *
                  F(i - static_cast<long long>(k) * g.Ne, j - static_cast<long long>(k) * g.sy, p);
          }
          r = std::max(r, std::abs(lhs - rhs));
        }
      }
    }
  }
  return r;
}

double invariance_residual(const EField& a) {
  return invariance_residual(a.grid, [&](long long m, long long j, int p) { return a.value(m, j, p); },
                             Action::Gamma);
}

double invariance_residual(const DField& a) {
  return invariance_residual(a.grid, [&](long long m, long long j, int p) { return a.value(m, j, p); },
                             Action::Rho);
}

template <class F>
SpectrumEstimate estimate_spectrum(const F& a, int iters) {
  // Power iteration for the left-regular action on L2(tau); the start vector
  // mixes every slice so no eigenspace is missed by symmetry.
  F v(a.grid);
  unsigned s = 12345u;
  for (auto& z : v.v) {
    s = s * 1103515245u + 12345u;
    double r1 = ((s >> 8) & 0xffff) / 65536.0;
    s = s * 1103515245u + 12345u;
    double r2 = ((s >> 8) & 0xffff) / 65536.0;
    z = cplx(r1 - 0.5, r2 - 0.5);
  }
  auto normalize = [](F& w) {
    double n = norm(w);
    if (n > 0) w = scale(1.0 / n, w);
    return n;
  };
  normalize(v);
  double lmax = 0.0;
  for (int it = 0; it < iters; ++it) {
    v = mul(a, v);
    lmax = normalize(v);
  }
  F I = identity_like(a);
  F shifted = scale(cplx(lmax), I) - a;
  F w = v;
  // Restart from a fresh vector so the top eigenvector is not favoured.
  for (std::size_t k = 0; k < w.v.size(); ++k) w.v[k] = cplx(std::cos(0.37 * k), std::sin(0.11 * k));
  normalize(w);
  double top = 0.0;
  for (int it = 0; it < iters; ++it) {
    w = mul(shifted, w);
    top = normalize(w);
  }
  SpectrumEstimate est;
  est.lambda_max = lmax;
  est.lambda_min = lmax - top;
  return est;
}

template SpectrumEstimate estimate_spectrum<EField>(const EField&, int);
template SpectrumEstimate estimate_spectrum<DField>(const DField&, int);

namespace {

double bound_norm(const AlgebraField& a) {
  double s = 0.0;
  for (int p = -a.P(); p <= a.P(); ++p) s += max_abs_slice(a, p);
  return s;
}

template <class F>
F inv_sqrt_impl(const F& a, const InvSqrtOptions& opt, InvSqrtResult* info) {
  if (selfadjoint_residual(a) > 1e-8 * std::max(1.0, max_abs(a)))
    throw NumericalError("inv_sqrt: argument is not self-adjoint");
  SpectrumEstimate est = estimate_spectrum(a);
  if (info) info->spectrum = est;
  if (!(est.lambda_max > 0.0)) throw NumericalError("inv_sqrt: argument is not positive");
  if (est.lambda_min <= est.lambda_max / opt.cond_limit) {
    throw NumericalError("inv_sqrt: ill-conditioned argument (spectrum estimate [" +
                         std::to_string(est.lambda_min) + ", " + std::to_string(est.lambda_max) + "])");
  }
  const double s = 1.05 * est.lambda_max;
  F I = identity_like(a);
  F Y = scale(cplx(1.0 / s), a);
  F Z = I;
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    F ZY = mul(Z, Y);
    res = max_abs(ZY - I);
    if (res <= opt.tol) break;
    if (!std::isfinite(res) || res > 1e3) break;  // diverging
    F T = scale(cplx(0.5), scale(cplx(3.0), I) - ZY);
    Y = mul(Y, T);
    Z = mul(T, Z);
  }
  if (info) {
    info->iterations = it;
    info->residual = res;
  }
  if (res > 1e3 * opt.tol && res > 1e-9) {
    throw NumericalError("inv_sqrt: Newton-Schulz did not converge (residual " + std::to_string(res) +
                         ", spectrum estimate [" + std::to_string(est.lambda_min) + ", " +
                         std::to_string(est.lambda_max) + "])");
  }
  F out = scale(cplx(1.0 / std::sqrt(s)), Z);
  // Symmetrize against round-off drift.
  out = scale(cplx(0.5), out + star(out));
  // Power iteration can badly overestimate lambda_min, so bound the
  // condition number rigorously: ||a^-1|| <= ||a^-1/2||^2 in the norm
  // sum_p sup|x_p|, which dominates the operator norm.
  double cond = bound_norm(a) * bound_norm(out) * bound_norm(out);
  if (info) info->condition_bound = cond;
  if (cond > opt.cond_limit)
    throw NumericalError("inv_sqrt: ill-conditioned argument (condition bound " + std::to_string(cond) + ")");
  return out;
}

}  // namespace

EField inv_sqrt_E(const EField& a, const InvSqrtOptions& opt, InvSqrtResult* info) {
  return inv_sqrt_impl(a, opt, info);
}

DField inv_sqrt_D(const DField& a, const InvSqrtOptions& opt, InvSqrtResult* info) {
  return inv_sqrt_impl(a, opt, info);
}

EField flatten_projection_E(const EField& a, double tol, int max_iter, int* iters) {
  EField p = scale(cplx(0.5), a + e_star(a));
  EField I = make_identity_E(a.grid);
  for (int it = 0; it < max_iter; ++it) {
    EField p2 = e_mul(p, p);
    double r = max_abs(p2 - p);
    if (r <= tol) {
      if (iters) *iters = it;
      return p;
    }
    // 3p^2 - 2p^3 = p^2 (3 - 2p)
    EField next = e_mul(p2, scale(cplx(3.0), I) - scale(cplx(2.0), p));
    p = scale(cplx(0.5), next + e_star(next));
  }
  throw NumericalError("flatten_projection_E: no convergence (spectrum too close to 1/2?)");
}

DField periodize_D(const GridSpec& g, const std::function<cplx(double, double, int)>& h, int kmax) {
  DField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        cplx s = 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
          cplx hv = h(g.x_at(i + static_cast<long long>(k) * g.nx), g.y_at(j), p);
          if (hv == cplx(0.0)) continue;
          s += std::conj(g.phase_D(k, p, j)) * hv;
        }
        out.at(p, i, j) = s;
      }
  return out;
}

EField periodize_E(const GridSpec& g, const std::function<cplx(double, double, int)>& h, int kmax) {
  EField out(g);
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.Ne; ++i)
      for (int j = 0; j < g.ny; ++j) {
        cplx s = 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
          long long m = i - static_cast<long long>(k) * g.Ne;
          long long jj = j - static_cast<long long>(k) * g.sy;
          cplx hv = h(g.x_at(m), g.y_at(pos_mod(jj, g.ny)), p);
          if (hv == cplx(0.0)) continue;
          s += g.phase_E(k, p, j) * hv;
        }
        out.at(p, i, j) = s;
      }
  return out;
}

}  // namespace qhm
