#pragma once

#include "qhm/curvature.hpp"

#include <cstdint>

namespace qhm {

// ---------------------------------------------------------------------------
// Q D as a model of Xi.

// Throws NumericalError unless <R,R>_L = Id within tol.
void require_valid_frame(const Frame& fr, double tol = 1e-8);

// F(xi) = <R, xi>_R and F^-1(d) = R . d.
DField iso_F(const Frame& fr, const ModuleField& xi);
ModuleField iso_F_inv(const Frame& fr, const DField& d);
// phi(a) = <R, a . R>_R, a *-homomorphism E -> Q D Q.
DField phi_hom(const Frame& fr, const EField& a);

// nabla'_W(f) = <R, base_W(R . f)>_R on Q D.
struct QDConnection {
  std::shared_ptr<const Frame> frame;
  Connection base;

  const GridSpec& grid() const { return base.grid; }
  DField apply(Dir w, const DField& f) const;
  // Operator curvature nabla'_a nabla'_b - nabla'_b nabla'_a - nabla'_[a,b].
  DField curvature(Dir a, Dir b, const DField& f) const;
};

QDConnection qd_connection(std::shared_ptr<const Frame> frame);
QDConnection qd_connection(std::shared_ptr<const Frame> frame, const Connection& base);

struct QDCheck {
  std::array<DField, 3> theta;  // Theta'(XY), (XZ), (YZ) as elements: the operator applied to Q
  double xy = 0.0, xz = 0.0;    // max |Theta'| relative to max |Q|
  cplx yz_coefficient;          // least-squares lambda in Theta'(Y,Z) ~ lambda Q
  double yz_scalar_deviation = 0.0;  // |Theta'(Y,Z) - lambda Q| / |Q|
  double yz_paper_deviation = 0.0;   // |Theta'(Y,Z) + (pi i / mu) Q| / |(pi/mu) Q|
  double element_error = 0.0;   // |Theta'_op(f) - Theta' * f| / |f| on test elements
  double qdq_residual = 0.0;    // |Q Theta' Q - Theta'| / |Theta'|
  // Probe norm of [nabla'_X, Theta'(Y,X)] + [nabla'_Z, Theta'(Y,Z)] on test
  // elements of Q D, and of the predicted (2 pi i / mu) nabla'_Z f.
  double eq2_residual = 0.0;
  double eq2_predicted = 0.0;
};

QDCheck qd_critical_check(const QDConnection& c, std::uint64_t seed = 7, int samples = 2);

// ---------------------------------------------------------------------------
// Frames with several generators: sum_i <R_i, R_i>_L = Id.  A single
// generator needs 2 mu <= 1; above that two or more are required.

struct MultiFrame {
  std::vector<ModuleField> R;
  EField left_gram;
  InvSqrtResult normalization;
  double left_gram_error() const;
};

MultiFrame multi_frame_normalize(const std::vector<ModuleField>& seeds, const FrameOptions& opt = {});
MultiFrame as_multi(const Frame& fr);

// A projection P = <eta, eta>_L with <eta, eta>_R = Id_D, from
// eta = xi . <xi, xi>_R^{-1/2}, then purified.  Needs 2 mu > 1; trace_E(P) = 1.
struct SynthProjection {
  EField P;
  ModuleField eta;
  double right_gram_error = 0.0;  // |<eta,eta>_R - Id|
  double idempotency = 0.0;       // |P^2 - P|
  double selfadjoint = 0.0;       // |P* - P|
  int flatten_iterations = 0;
  cplx trace;
  InvSqrtResult normalization;
};

SynthProjection synthesize_projection(const ModuleField& seed, const InvSqrtOptions& opt = {});

// Throws NumericalError unless P is a projection within tol.
void require_projection(const EField& P, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Grassmannian on P Xi: nabla_W(xi) = sum_i (P R_i) . delta_W(<R_i, P xi>_R).

Connection pxi_grassmannian(const EField& P, std::shared_ptr<const MultiFrame> frame, double tol = 1e-8);

// <S.(d_a G d_b G - d_b G d_a G), S>_L with S = P R and G = <S, S>_R
// (matrix-valued for several generators).
EField pxi_curvature(const EField& P, const MultiFrame& frame, Dir a, Dir b);

// ---------------------------------------------------------------------------
// Connections on P E (right E-module, <f,g>_R = f* g).

using HatDelta = std::function<EField(Dir, const EField&)>;

// Closed form of T -> [nabla_W, T] for nabla^0 and nabla^1.
HatDelta hat_delta_for(const Connection& base);
EField hat_delta1(Dir w, const EField& T, const GridSpec& g);

struct PEConnection {
  EField P;
  Connection base;
  HatDelta hat;

  EField apply(Dir w, const EField& f) const;  // P hat_W(f)
  EField curvature(Dir a, Dir b, const EField& f) const;
};

PEConnection pe_grassmannian(const EField& P, const Connection& base, double tol = 1e-8);
// hat_a(P) hat_b(P) - hat_b(P) hat_a(P).
EField pe_curvature(const PEConnection& c, Dir a, Dir b);

struct PEChecks {
  double leibniz = 0.0;      // |nabla(f a) - nabla(f) a - f hat(a)| / (|f| |a|)
  double compat = 0.0;       // |hat(f* g) - nabla(f)* g - f* nabla(g)| / (|f| |g|)
  double two_path = 0.0;     // max over pairs |Theta_op(g) - Theta g| / |g| on P E tests
  double hat_vs_operator = 0.0;  // closed-form hat(P) vs reconstruction of [nabla, P]
};
PEChecks pe_checks(const PEConnection& c, std::uint64_t seed = 11);

// ---------------------------------------------------------------------------
// P E (x)_E Xi.

struct TensorElement {
  std::vector<std::pair<EField, ModuleField>> pairs;
  bool reduced = false;
};

// sum_k f_k . xi_k, an element of P Xi.
ModuleField reduce(const TensorElement& t);
TensorElement as_reduced(const EField& P, const ModuleField& zeta);

// sum <xi_k, (f_k* g_l) . eta_l>_R.  The literal form uses (g_l* f_k),
// which is not balanced.
DField tensor_inner(const TensorElement& a, const TensorElement& b, bool literal = false);

struct TensorConnection {
  PEConnection E;
  Connection xi;

  TensorElement apply(Dir w, const TensorElement& t) const;
  // The same connection transported to P Xi through reduce.
  Connection reduced() const;
};

// Requires the E-side derivation to be the one induced by the Xi-side
// connection (otherwise the map is not defined on the balanced product).
TensorConnection tensor_connection(const PEConnection& e, const Connection& xi);

struct TensorChecks {
  double balance = 0.0;          // |<f a (x) xi, t> - <f (x) a xi, t>|, proper inner product
  double balance_literal = 0.0;  // same with the literal inner product
  double inner_vs_reduced = 0.0; // |<s,t> - <reduce s, reduce t>_R|
  double well_defined = 0.0;     // |reduce(nabla t) - nabla_red(reduce t)| / |t|
  double additivity = 0.0;       // |Theta_tensor - Theta_E (x) I - I (x) Theta_xi| probe norm
  double compat = 0.0;           // compatibility of the reduced connection on P Xi
};
TensorChecks tensor_checks(const TensorConnection& c, std::uint64_t seed = 13);

CriticalResiduals tensor_critical_residuals(const TensorConnection& c);

// ---------------------------------------------------------------------------
// Coupling constants.

struct CouplingEntry {
  std::string name;
  Rational induced;  // Ind_X(tau)(Id_B)
  Rational source;   // tau(Id_A)
  Rational value;    // induced / source
};

struct CouplingLedger {
  Rational mu, nu;
  double tau_D_id = 0.0;  // measured
  double tau_E_id = 0.0;  // measured
  std::vector<std::pair<std::string, Rational>> traces;
  std::vector<CouplingEntry> chain;
  const CouplingEntry& at(const std::string& name) const;
};

// Numeric identity traces are measured on g and must agree with 1 and 2 mu.
CouplingLedger coupling_chain(const GridSpec& g);
CouplingLedger coupling_chain(Rational mu, Rational nu);

}  // namespace qhm
