#include "qhm/derived.hpp"

#include <cmath>
#include <random>

namespace qhm {

namespace {

const std::array<std::pair<Dir, Dir>, 3> kPairs{{{Dir::X, Dir::Y}, {Dir::X, Dir::Z}, {Dir::Y, Dir::Z}}};

// Frobenius projection coefficient <a, b> / <b, b> over the stored samples.
cplx sample_coefficient(const AlgebraField& a, const AlgebraField& b) {
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k) {
    num += std::conj(b.v[k]) * a.v[k];
    den += std::norm(b.v[k]);
  }
  return den > 0.0 ? num / den : cplx(0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

void require_valid_frame(const Frame& fr, double tol) {
  double e = fr.left_gram_error();
  if (!(e <= tol)) throw NumericalError("frame invalid: |<R,R>_L - Id| = " + std::to_string(e));
}

DField iso_F(const Frame& fr, const ModuleField& xi) { return inner_D(fr.R, xi); }

ModuleField iso_F_inv(const Frame& fr, const DField& d) { return act_right(fr.R, d); }

DField phi_hom(const Frame& fr, const EField& a) { return inner_D(fr.R, act_left(a, fr.R)); }

DField QDConnection::apply(Dir w, const DField& f) const {
  return inner_D(frame->R, base.apply(w, act_right(frame->R, f)));
}

DField QDConnection::curvature(Dir a, Dir b, const DField& f) const {
  DField out = apply(a, apply(b, f)) - apply(b, apply(a, f));
  Bracket br = bracket(a, b, grid().c);
  if (br.nonzero()) out = out - scale(cplx(br.coef), apply(Dir::Z, f));
  return out;
}

QDConnection qd_connection(std::shared_ptr<const Frame> frame) {
  return qd_connection(frame, make_nabla0(frame->R.grid));
}

QDConnection qd_connection(std::shared_ptr<const Frame> frame, const Connection& base) {
  require_valid_frame(*frame);
  require_same_grid(frame->R.grid, base.grid, "qd_connection");
  return QDConnection{std::move(frame), base};
}

QDCheck qd_critical_check(const QDConnection& c, std::uint64_t seed, int samples) {
  const auto& g = c.grid();
  const DField& Q = c.frame->right_gram;
  const double qn = max_abs(Q);
  const double lam = kPi / g.mu_d();
  QDCheck out;
  for (int n = 0; n < 3; ++n) out.theta[n] = c.curvature(kPairs[n].first, kPairs[n].second, Q);
  out.xy = max_abs(out.theta[0]) / qn;
  out.xz = max_abs(out.theta[1]) / qn;
  const DField& yz = out.theta[2];
  out.yz_coefficient = sample_coefficient(yz, Q);
  out.yz_scalar_deviation = max_abs(yz - scale(out.yz_coefficient, Q)) / qn;
  out.yz_paper_deviation = max_abs(yz + scale(cplx(0.0, lam), Q)) / (lam * qn);
  for (const auto& t : out.theta)
    out.qdq_residual = std::max(out.qdq_residual, max_abs(d_mul(Q, d_mul(t, Q)) - t) / std::max(1.0, max_abs(t)));

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    DField f = d_mul(Q, random_D(g, rng, 1));
    const double fn = norm(f);
    for (int n = 0; n < 3; ++n) {
      DField op = c.curvature(kPairs[n].first, kPairs[n].second, f);
      out.element_error = std::max(out.element_error, norm(op - d_mul(out.theta[n], f)) / fn);
    }
    auto comm = [&](Dir w, Dir a, Dir b) {
      return c.apply(w, c.curvature(a, b, f)) - c.curvature(a, b, c.apply(w, f));
    };
    DField e2 = comm(Dir::X, Dir::Y, Dir::X) + comm(Dir::Z, Dir::Y, Dir::Z);
    out.eq2_residual = std::max(out.eq2_residual, norm(e2) / fn);
    out.eq2_predicted = std::max(out.eq2_predicted, 2.0 * lam * norm(c.apply(Dir::Z, f)) / fn);
  }
  return out;
}

// ---------------------------------------------------------------------------

double MultiFrame::left_gram_error() const {
  return max_abs(left_gram - make_identity_E(left_gram.grid));
}

MultiFrame multi_frame_normalize(const std::vector<ModuleField>& seeds, const FrameOptions& opt) {
  if (seeds.empty()) throw std::invalid_argument("multi_frame_normalize: no seeds");
  const GridSpec& g = seeds.front().grid;
  EField G(g);
  for (const auto& s : seeds) {
    require_same_grid(g, s.grid, "multi_frame_normalize");
    G = G + inner_E(s, s);
  }
  MultiFrame fr;
  EField a = inv_sqrt_E(G, opt.inv_sqrt, &fr.normalization);
  fr.left_gram = EField(g);
  for (const auto& s : seeds) {
    fr.R.push_back(act_left(a, s));
    fr.left_gram = fr.left_gram + inner_E(fr.R.back(), fr.R.back());
  }
  double e = fr.left_gram_error();
  if (!(e <= opt.gram_tol))
    throw NumericalError("multi_frame_normalize: left Gram error " + std::to_string(e) + " exceeds tolerance");
  return fr;
}

MultiFrame as_multi(const Frame& fr) {
  MultiFrame m;
  m.R = {fr.R};
  m.left_gram = fr.left_gram;
  m.normalization = fr.normalization;
  return m;
}

SynthProjection synthesize_projection(const ModuleField& seed, const InvSqrtOptions& opt) {
  const GridSpec& g = seed.grid;
  SynthProjection sp;
  DField b = inv_sqrt_D(inner_D(seed, seed), opt, &sp.normalization);
  sp.eta = act_right(seed, b);
  sp.right_gram_error = max_abs(inner_D(sp.eta, sp.eta) - make_identity_D(g));
  sp.P = flatten_projection_E(inner_E(sp.eta, sp.eta), 1e-12, 200, &sp.flatten_iterations);
  sp.idempotency = max_abs(e_mul(sp.P, sp.P) - sp.P);
  sp.selfadjoint = selfadjoint_residual(sp.P);
  sp.trace = trace_E(sp.P);
  return sp;
}

void require_projection(const EField& P, double tol) {
  double s = std::max(1.0, max_abs(P));
  double e = std::max(max_abs(e_mul(P, P) - P), selfadjoint_residual(P));
  if (!(e <= tol * s)) throw NumericalError("P is not a projection (residual " + std::to_string(e) + ")");
}

// ---------------------------------------------------------------------------

Connection pxi_grassmannian(const EField& P, std::shared_ptr<const MultiFrame> frame, double tol) {
  require_projection(P, tol);
  if (!(frame->left_gram_error() <= tol)) throw NumericalError("frame invalid");
  auto p = std::make_shared<const EField>(P);
  auto S = std::make_shared<std::vector<ModuleField>>();
  for (const auto& r : frame->R) S->push_back(act_left(P, r));
  Connection c;
  c.kind = ConnKind::Custom;
  c.name = "pxi-grassmannian";
  c.grid = P.grid;
  c.fn = [p, S, frame](Dir w, const ModuleField& f) {
    ModuleField pf = act_left(*p, f);
    ModuleField out(f.grid);
    for (std::size_t i = 0; i < S->size(); ++i) out += act_right((*S)[i], delta(w, inner_D(frame->R[i], pf)));
    return out;
  };
  return c;
}

EField pxi_curvature(const EField& P, const MultiFrame& frame, Dir a, Dir b) {
  const std::size_t n = frame.R.size();
  std::vector<ModuleField> S;
  for (const auto& r : frame.R) S.push_back(act_left(P, r));
  std::vector<DField> da(n * n), db(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      DField G = inner_D(S[i], S[j]);
      da[i * n + j] = delta(a, G);
      db[i * n + j] = delta(b, G);
    }
  EField out(P.grid);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      DField M(P.grid);
      for (std::size_t j = 0; j < n; ++j)
        M = M + d_mul(da[i * n + j], db[j * n + k]) - d_mul(db[i * n + j], da[j * n + k]);
      out = out + inner_E(act_right(S[i], M), S[k]);
    }
  return out;
}

// ---------------------------------------------------------------------------

EField hat_delta1(Dir w, const EField& T, const GridSpec& g) {
  EField out = hat_delta0(w, T);
  if (w != Dir::X) return out;
  // [i(mu y - nu x), T] adds -i nu q to the q-th slice.
  for (int q = -g.P; q <= g.P; ++q) {
    if (q == 0) continue;
    const cplx f(0.0, -g.nu_d() * q);
    for (int i = 0; i < g.Ne; ++i)
      for (int j = 0; j < g.ny; ++j) out.at(q, i, j) += f * T.at(q, i, j);
  }
  return out;
}

HatDelta hat_delta_for(const Connection& base) {
  switch (base.kind) {
    case ConnKind::Nabla0:
      return [](Dir w, const EField& T) { return hat_delta0(w, T); };
    case ConnKind::Nabla1: {
      GridSpec g = base.grid;
      return [g](Dir w, const EField& T) { return hat_delta1(w, T, g); };
    }
    default:
      throw ConfigError("no closed-form derivation on E for connection '" + base.name + "'");
  }
}

EField PEConnection::apply(Dir w, const EField& f) const { return e_mul(P, hat(w, f)); }

EField PEConnection::curvature(Dir a, Dir b, const EField& f) const {
  EField out = apply(a, apply(b, f)) - apply(b, apply(a, f));
  Bracket br = bracket(a, b, P.grid.c);
  if (br.nonzero()) out = out - scale(cplx(br.coef), apply(Dir::Z, f));
  return out;
}

PEConnection pe_grassmannian(const EField& P, const Connection& base, double tol) {
  require_projection(P, tol);
  require_same_grid(P.grid, base.grid, "pe_grassmannian");
  return PEConnection{P, base, hat_delta_for(base)};
}

EField pe_curvature(const PEConnection& c, Dir a, Dir b) {
  EField pa = c.hat(a, c.P), pb = c.hat(b, c.P);
  return e_mul(pa, pb) - e_mul(pb, pa);
}

PEChecks pe_checks(const PEConnection& c, std::uint64_t seed) {
  const auto& g = c.P.grid;
  std::mt19937_64 rng(seed);
  EField f = e_mul(c.P, random_E(g, rng, 1));
  EField h = e_mul(c.P, random_E(g, rng, 1));
  EField a = random_E(g, rng, 1);
  const double nf = max_abs(f), nh = max_abs(h), na = max_abs(a);
  PEChecks out;
  for (Dir w : kDirs) {
    EField lb = c.apply(w, e_mul(f, a)) - e_mul(c.apply(w, f), a) - e_mul(f, c.hat(w, a));
    out.leibniz = std::max(out.leibniz, max_abs(lb) / (nf * na));
    EField cp = c.hat(w, e_mul(e_star(f), h)) - e_mul(e_star(c.apply(w, f)), h) - e_mul(e_star(f), c.apply(w, h));
    out.compat = std::max(out.compat, max_abs(cp) / (nf * nh));
  }
  for (auto [a1, b1] : kPairs) {
    EField th = pe_curvature(c, a1, b1);
    const double s = std::max(1.0, max_abs(th));
    for (const EField* t : std::array<const EField*, 2>{&c.P, &f}) {
      EField d = c.curvature(a1, b1, *t) - e_mul(th, *t);
      out.two_path = std::max(out.two_path, max_abs(d) / (s * max_abs(*t)));
    }
  }
  if (c.base.invariant && !c.base.seam_sensitive) {
    ReconstructOptions ro;
    ro.p_radius = g.P;
    for (Dir w : kDirs) {
      EField closed = c.hat(w, c.P);
      Reconstruction r = reconstruct_E(g, [&](const ModuleField& x) { return hat_delta_apply(c.base, c.P, w, x); }, ro);
      out.hat_vs_operator =
          std::max(out.hat_vs_operator, max_abs(r.cov - closed) / std::max(1.0, max_abs(closed)));
    }
  } else {
    out.hat_vs_operator = -1.0;  // not available for seam-sensitive bases
  }
  return out;
}

// ---------------------------------------------------------------------------

ModuleField reduce(const TensorElement& t) {
  if (t.pairs.empty()) throw std::invalid_argument("reduce: empty tensor element");
  ModuleField out(t.pairs.front().second.grid);
  for (const auto& [f, xi] : t.pairs) out += act_left(f, xi);
  return out;
}

TensorElement as_reduced(const EField& P, const ModuleField& zeta) {
  TensorElement t;
  t.pairs.emplace_back(P, act_left(P, zeta));
  t.reduced = true;
  return t;
}

DField tensor_inner(const TensorElement& a, const TensorElement& b, bool literal) {
  DField out(a.pairs.front().first.grid);
  for (const auto& [f, xi] : a.pairs)
    for (const auto& [h, eta] : b.pairs) {
      EField m = literal ? e_mul(e_star(h), f) : e_mul(e_star(f), h);
      out = out + inner_D(xi, act_left(m, eta));
    }
  return out;
}

TensorElement TensorConnection::apply(Dir w, const TensorElement& t) const {
  TensorElement out;
  for (const auto& [f, xi] : t.pairs) {
    out.pairs.emplace_back(E.apply(w, f), xi);
    out.pairs.emplace_back(f, this->xi.apply(w, xi));
  }
  return out;
}

Connection TensorConnection::reduced() const {
  Connection c;
  c.kind = ConnKind::Custom;
  c.name = "tensor(" + xi.name + ")";
  c.grid = xi.grid;
  c.seam_sensitive = xi.seam_sensitive;
  c.invariant = xi.invariant;
  auto P = std::make_shared<const EField>(E.P);
  auto e = std::make_shared<const PEConnection>(E);
  auto x = std::make_shared<const Connection>(xi);
  std::array<EField, 3> dP;
  for (Dir w : kDirs) dP[static_cast<int>(w)] = E.apply(w, E.P);
  auto dp = std::make_shared<const std::array<EField, 3>>(dP);
  c.base = x;
  c.fn = [P, x, dp](Dir w, const ModuleField& zeta) {
    ModuleField pz = act_left(*P, zeta);
    ModuleField out = act_left((*dp)[static_cast<int>(w)], pz);
    out += act_left(*P, x->apply(w, pz));
    return out;
  };
  return c;
}

TensorConnection tensor_connection(const PEConnection& e, const Connection& xi) {
  require_same_grid(e.P.grid, xi.grid, "tensor_connection");
  if (e.base.kind != xi.kind || e.base.kind == ConnKind::Custom)
    throw ConfigError("incompatible components: the E-side derivation must be induced by '" + xi.name + "'");
  return TensorConnection{e, xi};
}

TensorChecks tensor_checks(const TensorConnection& c, std::uint64_t seed) {
  const EField& P = c.E.P;
  const auto& g = P.grid;
  std::mt19937_64 rng(seed);
  RandomFieldOptions ro;
  ro.seam_avoiding = c.xi.seam_sensitive;
  EField f1 = e_mul(P, random_E(g, rng, 1));
  EField f2 = e_mul(P, random_E(g, rng, 1));
  EField a = random_E(g, rng, 1);
  ModuleField x1 = random_module_field(g, rng, ro);
  ModuleField x2 = random_module_field(g, rng, ro);
  TensorChecks out;

  TensorElement s1{{{e_mul(f1, a), x1}}}, s2{{{f1, act_left(a, x1)}}}, t{{{f2, x2}}};
  DField i1 = tensor_inner(s1, t), i2 = tensor_inner(s2, t);
  const double sc = std::max(1e-300, max_abs(i1));
  out.balance = max_abs(i1 - i2) / sc;
  DField l1 = tensor_inner(s1, t, true), l2 = tensor_inner(s2, t, true);
  out.balance_literal = max_abs(l1 - l2) / std::max(1e-300, max_abs(l1));
  out.inner_vs_reduced = max_abs(i1 - inner_D(reduce(s1), reduce(t))) / sc;

  Connection red = c.reduced();
  TensorElement u{{{f1, x1}, {f2, x2}}};
  ModuleField ru = reduce(u);
  for (Dir w : kDirs)
    out.well_defined = std::max(out.well_defined, norm(reduce(c.apply(w, u)) - red.apply(w, ru)) / norm(ru));

  ProbeOptions po;
  po.seam_avoiding = c.xi.seam_sensitive;
  auto probes = standard_probes(g, po);
  for (auto [a1, b1] : kPairs) {
    EField th = pe_curvature(c.E, a1, b1);
    for (std::size_t k = 0; k < probes.size(); k += 4) {
      ModuleField z = act_left(P, probes[k]);
      ModuleField lhs = curvature_apply(red, a1, b1, z);
      ModuleField rhs = act_left(th, z) + act_left(P, curvature_apply(c.xi, a1, b1, z));
      out.additivity = std::max(out.additivity, norm(lhs - rhs) / (norm(z) * std::max(1.0, max_abs(th))));
    }
  }
  out.compat = compat_residual(red, act_left(P, x1), act_left(P, x2));
  return out;
}

CriticalResiduals tensor_critical_residuals(const TensorConnection& c) { return critical_residuals(c.reduced()); }

// ---------------------------------------------------------------------------

const CouplingEntry& CouplingLedger::at(const std::string& name) const {
  for (const auto& e : chain)
    if (e.name == name) return e;
  throw std::out_of_range("coupling ledger has no entry '" + name + "'");
}

CouplingLedger coupling_chain(Rational mu, Rational nu) {
  if (mu <= 0 || nu <= 0) throw ConfigError("coupling_chain: mu and nu must be positive");
  CouplingLedger L;
  L.mu = mu;
  L.nu = nu;
  const Rational one(1), two_mu = mu * 2, two_nu = nu * 2;
  // Traces on the identities and on P, exact.  tau' denotes the normalized
  // trace (value 1 on the identity).
  const Rational tD = one, tE = two_mu;
  const Rational tpE_P = two_nu / two_mu;
  L.traces = {{"tau_D(Id_D)", tD}, {"tau_E(Id_E)", tE}, {"tau'_E(Id_E)", one}, {"tau'_E(P)", tpE_P},
              {"tau'_PEP(Id_PEP)", one}};
  auto add = [&](std::string name, Rational induced, Rational source) {
    L.chain.push_back({std::move(name), induced, source, induced / source});
  };
  // Ind_Xi(tau_D)(Id_E) = tau_D(<R,R>_R) = tau_E(Id_E).
  add("C_D^E(Xi)(tau_D)", tE, tD);
  // Ind_Xi(tau'_E)(Id_D) = tau'_E(Id_E) tau_D(Id_D) / tau_E(Id_E).
  add("C_E^D(Xi)(tau'_E)", tD / tE, one);
  add("C_E^PEP(PE)(tau'_E)", tpE_P, one);
  add("C_PEP^E(PE)(tau'_PEP)", one / tpE_P, one);
  // Composition: coupling constants multiply along PE (x)_E Xi.
  const Rational comp = L.at("C_E^D(Xi)(tau'_E)").value * L.at("C_PEP^E(PE)(tau'_PEP)").value;
  add("C_PEP^D(PE(x)Xi)(tau'_PEP)", comp, one);
  add("C_D^PEP(PE(x)Xi)(tau_D)", one, comp);
  return L;
}

CouplingLedger coupling_chain(const GridSpec& g) {
  CouplingLedger L = coupling_chain(g.mu, g.nu);
  L.tau_D_id = trace_D(make_identity_D(g)).real();
  L.tau_E_id = trace_E(make_identity_E(g)).real();
  if (std::abs(L.tau_D_id - 1.0) > 1e-12 || std::abs(L.tau_E_id - 2.0 * g.mu_d()) > 1e-12)
    throw NumericalError("coupling_chain: measured identity traces disagree with 1 and 2 mu");
  return L;
}

}  // namespace qhm
