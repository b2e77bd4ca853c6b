#pragma once

#include "qhm/diff.hpp"
#include "qhm/fields.hpp"

#include <atomic>
#include <functional>

namespace qhm {

struct ToleranceSet {
  double alg = 1e-10;
  double calc = 1e-6;
  void validate() const;
};

// Number of products whose exact p-support exceeded the grid's P and was
// clipped.  Inert when every factor has small support.
std::atomic<long>& clip_events();

DField d_mul(const DField& a, const DField& b);
EField e_mul(const EField& a, const EField& b);
DField d_star(const DField& a);
EField e_star(const EField& a);
inline DField mul(const DField& a, const DField& b) { return d_mul(a, b); }
inline EField mul(const EField& a, const EField& b) { return e_mul(a, b); }
inline DField star(const DField& a) { return d_star(a); }
inline EField star(const EField& a) { return e_star(a); }

cplx trace_D(const DField& a);
cplx trace_E(const EField& a);
inline cplx trace(const DField& a) { return trace_D(a); }
inline cplx trace(const EField& a) { return trace_E(a); }

DField make_identity_D(const GridSpec& g);
EField make_identity_E(const GridSpec& g);
// Multiplication-type element G(x,y) delta_0(p); G sampled on [0,2mu)x[0,1).
EField make_mult_type_E(const GridSpec& g, const std::function<cplx(double, double)>& G);
DField make_mult_type_D(const GridSpec& g, const std::function<cplx(double, double)>& G);

template <class F>
F identity_like(const F& f);
template <>
inline DField identity_like(const DField& f) { return make_identity_D(f.grid); }
template <>
inline EField identity_like(const EField& f) { return make_identity_E(f.grid); }

// max |a* - a| and max |a* + a|.
template <class F>
double selfadjoint_residual(const F& a) {
  return max_abs(star(a) - a);
}
template <class F>
double skew_residual(const F& a) {
  return max_abs(star(a) + a);
}

enum class Action { Rho, Gamma };

// Invariance residual of a function given on all aligned points:
// max over k in {+-1, +-2} and fundamental-domain samples of
// |F - (action_k F)|.
double invariance_residual(const GridSpec& g, const std::function<cplx(long long, long long, int)>& F,
                           Action which);
double invariance_residual(const EField& a);
double invariance_residual(const DField& a);

struct SpectrumEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
};

template <class F>
SpectrumEstimate estimate_spectrum(const F& a, int iters = 60);

struct InvSqrtOptions {
  double tol = 1e-12;
  int max_iter = 100;
  double cond_limit = 1e4;  // reject lambda_max / lambda_min above this
};

struct InvSqrtResult {
  int iterations = 0;
  double residual = 0.0;
  SpectrumEstimate spectrum;
  double condition_bound = 0.0;  // ||a|| ||a^-1/2||^2 in the l1-sup norm
};

// Coupled Newton-Schulz iteration for a^{-1/2}, a positive.
EField inv_sqrt_E(const EField& a, const InvSqrtOptions& opt = {}, InvSqrtResult* info = nullptr);
DField inv_sqrt_D(const DField& a, const InvSqrtOptions& opt = {}, InvSqrtResult* info = nullptr);

// Idempotent purification p <- 3p^2 - 2p^3 starting from a self-adjoint a.
EField flatten_projection_E(const EField& a, double tol = 1e-10, int max_iter = 200, int* iters = nullptr);

// Helpers for building covariant fields from compactly supported data.
// h(x, y, p) must vanish for |x| beyond a small support; the periodization
// sums the covariance images over |k| <= kmax.
DField periodize_D(const GridSpec& g, const std::function<cplx(double, double, int)>& h, int kmax = 8);
EField periodize_E(const GridSpec& g, const std::function<cplx(double, double, int)>& h, int kmax = 8);

// Slice-wise x/y derivatives of an element (used for d/dx H and the like).
template <class F>
F ddx(const F& f) {
  return diff_x(f);
}
template <class F>
F ddy(const F& f) {
  return diff_y(f);
}

}  // namespace qhm
