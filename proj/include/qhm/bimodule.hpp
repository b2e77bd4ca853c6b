#pragma once

#include "qhm/algebra.hpp"

namespace qhm {

// Number of module operations whose exact result leaked outside the window
// (above 1e-12 relative).  Large leaks throw instead.
std::atomic<long>& window_leaks();

// (Psi . f)(x,y) = sum_q conj Psi(x,y,q) f(x+q, y)
ModuleField act_left(const EField& psi, const ModuleField& f);
// (f . Phi)(x,y) = sum_q f(x+2q mu, y+2q nu) conj Phi(x+2q mu, y+2q nu, q)
ModuleField act_right(const ModuleField& f, const DField& phi);

DField inner_D(const ModuleField& f, const ModuleField& g);
EField inner_E(const ModuleField& f, const ModuleField& g);

struct Frame {
  ModuleField R;
  EField left_gram;
  DField right_gram;  // Q
  InvSqrtResult normalization;

  double left_gram_error() const;     // max |<R,R>_L - Id|
  double projection_error() const;    // max(|Q*Q - Q|, |Q* - Q|)
};

struct FrameOptions {
  InvSqrtOptions inv_sqrt;
  double gram_tol = 1e-8;
};

// R = a . xi with a = <xi,xi>_L^{-1/2}.
Frame frame_normalize(const ModuleField& seed, const FrameOptions& opt = {});

// x-extent [lo, hi] of the samples above `tol` (relative to the max); empty
// fields return lo > hi.
std::pair<double, double> x_support(const ModuleField& f, double tol = 1e-14);

}  // namespace qhm
