#include "qhm/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qhm {

ModuleField curvature_apply(const Connection& c, Dir a, Dir b, const ModuleField& f) {
  ModuleField out = c.apply(a, c.apply(b, f)) - c.apply(b, c.apply(a, f));
  Bracket br = bracket(a, b, c.grid.c);
  if (br.nonzero()) out -= cplx(br.coef) * c.apply(Dir::Z, f);
  return out;
}

namespace {

ModuleField raw_from_cov(const EField& e) {
  if (max_abs_offdiag(e) > 0.0) throw NumericalError("raw conversion needs a p = 0 element");
  const auto& g = e.grid;
  ModuleField out(g);
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = e.value(g.m_lo + i, j, 0);
  return out;
}

ModuleField as_raw(const Reconstruction& r) { return r.is_raw ? r.rawf : raw_from_cov(r.cov); }

// Independent two-mode probe used for error bars.
ModuleField check_probe(const GridSpec& g) {
  return sample_module(g, [](double x, double y) {
    double d = x - 0.3;
    return std::exp(-d * d / (2.0 * 0.9 * 0.9)) * plateau_cutoff(x, 1.5, 1.0) *
           (1.0 + 0.5 * std::exp(cplx(0.0, 2.0 * kPi * y)));
  });
}

// Bump probe of half-width 1/2 around x = c.
ModuleField bump_probe(const GridSpec& g, double c) {
  return sample_module(g, [c](double x, double) { return cplx(compact_bump(2.0 * (x - c))); });
}

}  // namespace

ModuleField Reconstruction::act(const ModuleField& f) const {
  if (!is_raw) return act_left(cov, f);
  return RawMult{rawf}.act(f);
}

cplx Reconstruction::trace() const {
  if (!is_raw) return trace_E(cov);
  const auto& g = rawf.grid;
  if (g.Ne % 4 != 0) throw NumericalError("raw trace needs 2*mu*nx divisible by 4");
  cplx s = 0.0;
  for (int k = 0; k <= g.Ne; ++k) {
    long long i = k - g.m_lo;
    double w = boole_weight(k, g.Ne);
    cplx row = 0.0;
    for (int j = 0; j < g.ny; ++j) row += rawf.at(static_cast<int>(i), j);
    s += w * row;
  }
  return s * g.h() * g.hy();
}

Reconstruction Reconstruction::operator*(const Reconstruction& o) const {
  Reconstruction r;
  r.error = error + o.error;
  if (!is_raw && !o.is_raw) {
    r.cov = e_mul(cov, o.cov);
    return r;
  }
  r.is_raw = true;
  ModuleField a = as_raw(*this), b = as_raw(o);
  r.rawf = a;
  for (std::size_t k = 0; k < a.v.size(); ++k) r.rawf.v[k] = a.v[k] * b.v[k];
  return r;
}

Reconstruction Reconstruction::operator+(const Reconstruction& o) const {
  Reconstruction r;
  r.error = std::max(error, o.error);
  if (!is_raw && !o.is_raw) {
    r.cov = cov + o.cov;
    return r;
  }
  r.is_raw = true;
  r.rawf = as_raw(*this) + as_raw(o);
  return r;
}

Reconstruction Reconstruction::star() const {
  Reconstruction r = *this;
  if (is_raw)
    r.rawf = conj(rawf);
  else
    r.cov = e_star(cov);
  return r;
}

Reconstruction Reconstruction::scaled(cplx s) const {
  Reconstruction r = *this;
  if (is_raw)
    r.rawf *= s;
  else
    r.cov = qhm::scale(s, cov);
  return r;
}

Reconstruction reconstruct_E(const GridSpec& g, const FieldOp& op, const ReconstructOptions& opt) {
  std::map<long long, ModuleField> cache;  // key: 2c
  auto probe_out = [&](long long key) -> const ModuleField& {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, op(bump_probe(g, 0.5 * key))).first->second;
  };
  const double lo = g.x_lo_d() + 0.75, hi = g.x_hi_d() - 0.75;
  Reconstruction rec;

  if (opt.raw) {
    if (opt.p_radius != 0) throw std::invalid_argument("raw reconstruction supports p_radius 0 only");
    rec.is_raw = true;
    rec.rawf = ModuleField(g);
    for (int i = 0; i < g.Nx; ++i) {
      double x = rec.rawf.x(i);
      long long key = std::llround(2.0 * x);
      double c = 0.5 * key;
      if (c < lo || c > hi) continue;
      const ModuleField& o = probe_out(key);
      double gv = compact_bump(2.0 * (x - c));
      for (int j = 0; j < g.ny; ++j) rec.rawf.at(i, j) = std::conj(o.at(i, j) / gv);
    }
  } else {
    if (opt.p_radius > g.P) throw std::invalid_argument("reconstruct_E: p_radius exceeds the grid P");
    rec.cov = EField(g);
    const double mu = g.mu_d();
    for (int q = -opt.p_radius; q <= opt.p_radius; ++q) {
      long long k = static_cast<long long>(std::floor((q / 2.0) / (2.0 * mu) + 0.5));
      for (int i = 0; i < g.Ne; ++i) {
        long long mp = i - k * g.Ne;  // x' = x - 2k mu
        double xp = g.x_at(mp);
        long long key = std::llround(2.0 * (xp + q));
        double c = 0.5 * key;
        if (c < lo || c > hi || xp < lo - 0.25 || xp > hi + 0.25)
          throw NumericalError("reconstruct_E: window too small for p_radius " + std::to_string(opt.p_radius));
        const ModuleField& o = probe_out(key);
        double gv = compact_bump(2.0 * (xp + q - c));
        long long ii = mp - g.m_lo;
        for (int j = 0; j < g.ny; ++j) {
          long long jp = pos_mod(j - k * g.sy, g.ny);
          cplx psi_p = std::conj(o.at(static_cast<int>(ii), static_cast<int>(jp)) / gv);
          rec.cov.at(q, i, j) = g.phase_E(k, q, j) * psi_p;
        }
      }
    }
  }

  ModuleField w = check_probe(g);
  ModuleField ow = op(w);
  double den = std::max(norm(ow), norm(w));
  rec.error = norm(ow - rec.act(w)) / den;
  return rec;
}

ConstantDistance constant_curvature_distance(const Reconstruction& theta, const GridSpec& g) {
  ConstantDistance d;
  d.coefficient = theta.trace() / (2.0 * g.mu_d());
  auto probes = standard_probes(g);
  Reconstruction id;
  id.cov = make_identity_E(g);
  Reconstruction diff = theta + id.scaled(-d.coefficient);
  d.deviation = probe_residual(probes, [&](const ModuleField& f) { return diff.act(f); });
  return d;
}

std::vector<ModuleField> probes_for(const Connection& c) {
  ProbeOptions po;
  po.seam_avoiding = c.seam_sensitive;
  return standard_probes(c.grid, po);
}

CurvatureReport curvature_report(const Connection& c, const CurvatureOptions& opt) {
  CurvatureReport rep;
  ReconstructOptions ro;
  ro.p_radius = opt.p_radius;
  ro.raw = opt.raw.value_or(!c.invariant);
  const std::array<std::pair<Dir, Dir>, 3> pairs{{{Dir::X, Dir::Y}, {Dir::X, Dir::Z}, {Dir::Y, Dir::Z}}};
  for (int n = 0; n < 3; ++n) {
    auto [a, b] = pairs[n];
    CurvaturePair cp;
    cp.a = a;
    cp.b = b;
    cp.theta = reconstruct_E(c.grid, [&](const ModuleField& f) { return curvature_apply(c, a, b, f); }, ro);
    ConstantDistance d = constant_curvature_distance(cp.theta, c.grid);
    cp.coefficient = d.coefficient;
    cp.deviation = d.deviation;
    cp.is_constant = d.deviation <= opt.constancy_tol * std::max(1.0, std::abs(d.coefficient));
    rep.reconstruction_error = std::max(rep.reconstruction_error, cp.theta.error);
    Reconstruction s = cp.theta + cp.theta.star();
    double se = s.is_raw ? max_abs(s.rawf) : max_abs(s.cov);
    rep.skew_error = std::max(rep.skew_error, se);
    rep.pairs[n] = std::move(cp);
  }
  return rep;
}

YMResult ym_value(const CurvatureReport& rep) {
  cplx s = 0.0;
  double err = 0.0;
  for (const auto& p : rep.pairs) {
    cplx t = (p.theta * p.theta).trace();
    s += t;
    err += 2.0 * std::abs(t) * p.theta.error;
  }
  YMResult r;
  r.value = -s.real();
  r.imag = -s.imag();
  r.error_bar = err;
  return r;
}

YMResult ym_value(const Connection& c, const CurvatureOptions& opt) { return ym_value(curvature_report(c, opt)); }

namespace {

ModuleField commutator(const Connection& c, Dir w, const Reconstruction& t, const ModuleField& f) {
  return c.apply(w, t.act(f)) - t.act(c.apply(w, f));
}

}  // namespace

CriticalResiduals critical_residuals(const Connection& c, const CurvatureReport& rep,
                                     const std::vector<ModuleField>& probes) {
  const Reconstruction& xy = rep.xy().theta;
  const Reconstruction& xz = rep.xz().theta;
  const Reconstruction& yz = rep.yz().theta;
  const double cc = c.grid.c;
  CriticalResiduals r;
  r.r1 = probe_residual(probes, [&](const ModuleField& f) {
    return commutator(c, Dir::Y, xy, f) + commutator(c, Dir::Z, xz, f);
  });
  // Theta(Y,X) = -Theta(X,Y) and so on.
  r.r2 = probe_residual(probes, [&](const ModuleField& f) {
    return cplx(-1.0) * commutator(c, Dir::X, xy, f) + commutator(c, Dir::Z, yz, f);
  });
  r.r3 = probe_residual(probes, [&](const ModuleField& f) {
    return cplx(-1.0) * commutator(c, Dir::X, xz, f) - commutator(c, Dir::Y, yz, f) - cplx(cc) * xy.act(f);
  });
  return r;
}

CriticalResiduals critical_residuals(const Connection& c, const CurvatureOptions& opt) {
  return critical_residuals(c, curvature_report(c, opt), probes_for(c));
}

const char* class_name(YMClass k) {
  switch (k) {
    case YMClass::YangMillsConstant:
      return "YangMillsConstant";
    case YMClass::CriticalNotMin:
      return "CriticalNotMin";
    case YMClass::MinFormNotCritical:
      return "MinFormNotCritical";
    case YMClass::Neither:
      return "Neither";
    default:
      return "NonConstant";
  }
}

Classification classify_ym(const Connection& c, double tol, const CurvatureOptions& opt) {
  Classification out;
  CurvatureOptions o = opt;
  o.constancy_tol = tol;
  out.report = curvature_report(c, o);
  out.residuals = critical_residuals(c, out.report, probes_for(c));
  const auto& rep = out.report;
  bool constant = rep.xy().is_constant && rep.xz().is_constant && rep.yz().is_constant;
  if (!constant) {
    out.kind = YMClass::NonConstant;
    return out;
  }
  const double mu = c.grid.mu_d();
  const cplx target(0.0, kPi / mu);
  auto small = [&](cplx z) { return std::abs(z) <= tol; };
  // Criticality is read from the operator residuals; the usual
  // consistency (critical iff Theta(X,Y) = 0) then holds for constant
  // curvature, and MinFormNotCritical only flags a numerical contradiction.
  const double rmax = std::max({out.residuals.r1, out.residuals.r2, out.residuals.r3});
  bool critical = rmax <= tol * std::abs(target);
  bool min_form = small(rep.xy().coefficient) && small(rep.xz().coefficient) &&
                  std::abs(rep.yz().coefficient - target) <= tol * std::abs(target);
  if (critical && min_form)
    out.kind = YMClass::YangMillsConstant;
  else if (critical)
    out.kind = YMClass::CriticalNotMin;
  else if (min_form)
    out.kind = YMClass::MinFormNotCritical;
  else
    out.kind = YMClass::Neither;
  return out;
}

}  // namespace qhm
