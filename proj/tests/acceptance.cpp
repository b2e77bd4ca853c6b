// Acceptance run: one PASS/FAIL line per criterion, sub-checks indented.
// Tolerances are fixed here; nothing reads them from the environment.
#include "qhm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>

using namespace qhm;

namespace {

constexpr double kAlg = 1e-10;
constexpr double kCalc = 1e-6;
constexpr double kQD = 1e-5;       // criterion 9
constexpr double kSec6 = 1e-5;     // criterion 11
constexpr double kFlat = 1e-4;     // criterion 10, strict family
constexpr double kFrameGram = 1e-8;
constexpr double kTraceQ = 1e-4;

struct Check {
  std::string name;
  double measured;
  double bound;
  const char* rel;
  bool pass;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> info;
  std::string error;

  void le(const std::string& n, double m, double b) { checks.push_back({n, m, b, "<=", std::isfinite(m) && m <= b}); }
  void gt(const std::string& n, double m, double b) { checks.push_back({n, m, b, ">", std::isfinite(m) && m > b}); }
  void note(const std::string& s) { info.push_back(s); }
  bool passed() const {
    if (!error.empty() || checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

GridSpec default_grid(int c, Rational mu, Rational nu, int scale = 1) {
  return make_grid(c, mu, nu, 128 * scale, 128 * scale, Rational(-4), Rational(4), 4, 8 * scale);
}

std::string params(const GridSpec& g) {
  char b[96];
  std::snprintf(b, sizeof b, "(c,mu,nu)=(%d,%lld/%lld,%lld/%lld)", g.c, g.mu.numerator(), g.mu.denominator(),
                g.nu.numerator(), g.nu.denominator());
  return b;
}

// ---------------------------------------------------------------------------
// Residual sets reused by the convergence study (criterion 12).  Each
// returns named residuals that the criterion bounds.

using Residuals = std::vector<std::pair<std::string, double>>;

Residuals item2(const GridSpec& g, std::uint64_t seed) {
  Residuals out;
  Connection c = make_nabla0(g);
  std::mt19937_64 rng(seed);
  double lb = 0, cp = 0;
  for (int n = 0; n < 3; ++n) {
    ModuleField f = random_module_field(g, rng), h = random_module_field(g, rng);
    lb = std::max(lb, leibniz_residual(c, f, random_D(g, rng)));
    cp = std::max(cp, compat_residual(c, f, h));
  }
  CurvatureReport rep = curvature_report(c);
  const cplx yz(0.0, kPi / g.mu_d());
  out.emplace_back("Leibniz", lb);
  out.emplace_back("compatibility", cp);
  out.emplace_back("Theta(X,Y)", std::max(std::abs(rep.xy().coefficient), rep.xy().deviation));
  out.emplace_back("Theta(X,Z)", std::max(std::abs(rep.xz().coefficient), rep.xz().deviation));
  out.emplace_back("Theta(Y,Z) - (pi i/mu) Id (rel)",
                   std::max(rel(rep.yz().coefficient, yz), rep.yz().deviation / std::abs(yz)));
  return out;
}

Residuals item3(const GridSpec& g) {
  double ym = ym_value(make_nabla0(g)).value, ex = 2.0 * kPi * kPi / g.mu_d();
  return {{"YM(nabla0) - 2 pi^2/mu (rel)", std::abs(ym - ex) / ex}};
}

Residuals item4(const GridSpec& g) {
  Connection c = make_nabla1(g);
  Classification cl = classify_ym(c);
  const auto& rep = cl.report;
  const double mu = g.mu_d(), nu = g.nu_d();
  const cplx yz(0.0, kPi / mu);
  double ym = ym_value(rep).value, ex = 2.0 * mu * nu * nu + 2.0 * kPi * kPi / mu;
  return {{"Theta(X,Y) - nu i", std::max(std::abs(rep.xy().coefficient - cplx(0.0, nu)), rep.xy().deviation)},
          {"Theta(X,Z)", std::max(std::abs(rep.xz().coefficient), rep.xz().deviation)},
          {"Theta(Y,Z) - (pi i/mu) (rel)", std::max(rel(rep.yz().coefficient, yz), rep.yz().deviation / std::abs(yz))},
          {"YM - (2 mu nu^2 + 2 pi^2/mu) (rel)", std::abs(ym - ex) / ex},
          {"r1", cl.residuals.r1},
          {"r2", cl.residuals.r2},
          {"r3 - c nu (rel)", std::abs(cl.residuals.r3 - g.c * nu) / (g.c * nu)}};
}

// [nabla0_X, G] = dG/dy, [nabla0_Y, G] = dG/dx, [nabla0_Z, G] = 0,
// with G acting as f -> -G f.
Residuals item5(const GridSpec& g) {
  const double mu = g.mu_d();
  const int k0 = 1;
  struct Fn {
    const char* name;
    std::function<cplx(double, double)> G, Gx, Gy;
  };
  const double w = 2.0 * kPi * k0 / (2.0 * mu);
  std::vector<Fn> fns{
      {"i cos(2 pi y)", [](double, double y) { return cplx(0.0, std::cos(2 * kPi * y)); },
       [](double, double) { return cplx(0.0); },
       [](double, double y) { return cplx(0.0, -2 * kPi * std::sin(2 * kPi * y)); }},
      {"i sin(2 pi k0 x/(2mu))", [w](double x, double) { return cplx(0.0, std::sin(w * x)); },
       [w](double x, double) { return cplx(0.0, w * std::cos(w * x)); }, [](double, double) { return cplx(0.0); }},
      {"i cos(2 pi y) sin(2 pi y)",
       [](double, double y) { return cplx(0.0, std::cos(2 * kPi * y) * std::sin(2 * kPi * y)); },
       [](double, double) { return cplx(0.0); },
       [](double, double y) { return cplx(0.0, 2 * kPi * std::cos(4 * kPi * y)); }}};
  Connection c = make_nabla0(g);
  auto probes = standard_probes(g);
  Residuals out;
  for (const auto& fn : fns) {
    ModuleField Gs = sample_module(g, fn.G);
    auto act = [&](const ModuleField& f) {
      ModuleField o(f.grid);
      for (std::size_t k = 0; k < f.v.size(); ++k) o.v[k] = -Gs.v[k] * f.v[k];
      return o;
    };
    for (Dir d : kDirs) {
      double r = probe_residual(probes, [&](const ModuleField& f) {
        ModuleField lhs = c.apply(d, act(f)) - act(c.apply(d, f));
        if (d == Dir::X) lhs -= multiply(f, fn.Gy);
        if (d == Dir::Y) lhs -= multiply(f, fn.Gx);
        return lhs;
      });
      out.emplace_back(std::string(fn.name) + " [" + dir_name(d) + "]", r);
    }
  }
  return out;
}

struct Item6 {
  Residuals res;
  std::vector<std::pair<std::string, YMClass>> classes;
};

Item6 item6(const GridSpec& g) {
  Item6 out;
  const double ym0 = 2.0 * kPi * kPi / g.mu_d();
  Connection base = make_nabla0(g);
  CurvatureReport ref = curvature_report(base);
  PerturbationBasis b = thm47_basis(g);
  std::vector<std::pair<std::string, Connection>> conns;
  conns.emplace_back("raw example", example48_connection(base));
  conns.emplace_back("strict A", make_perturbed(base, h_from_params(g, b, {0.3, -0.1, 0.2, 0.05, 0.25, 0.0, -0.15, 0.1})));
  conns.emplace_back("strict B", make_perturbed(base, h_from_params(g, b, {0.0, 0.7, 0.0, 0.0, 0.0, 0.4, 0.0, 0.0})));
  for (const auto& [name, c] : conns) {
    Classification cl = classify_ym(c);
    double dc = 0.0;
    for (int n = 0; n < 3; ++n) {
      const auto& p = cl.report.pairs[n];
      dc = std::max({dc, std::abs(p.coefficient - ref.pairs[n].coefficient) / std::max(1.0, std::abs(ref.pairs[n].coefficient)),
                     p.deviation / std::max(1.0, std::abs(ref.pairs[n].coefficient))});
    }
    double ym = ym_value(cl.report).value;
    out.res.emplace_back(name + ": curvature - nabla0's", dc);
    out.res.emplace_back(name + ": YM - 2 pi^2/mu (rel)", std::abs(ym - ym0) / ym0);
    out.classes.emplace_back(name, cl.kind);
  }
  return out;
}

struct Item7 {
  Residuals res;
  double ym = 0.0, closed = 0.0, critical = 0.0;
};

Item7 item7(int c, double alpha, int scale, bool with_critical) {
  GridSpec g = default_grid(c, Rational(1, 2), Rational(1, 4), scale);
  const double mu = g.mu_d();
  std::shared_ptr<const Perturbation> H;
  Connection conn = thm51_connection(make_nabla0(g), alpha, &H);
  CurvatureReport rep = curvature_report(conn);
  auto probes = probes_for(conn);
  Item7 out;
  // Theta(X,Y) f = -c (H_Z acting as in the perturbation) f.
  double xy = probe_residual(probes, [&](const ModuleField& f) {
                return curvature_apply(conn, Dir::X, Dir::Y, f) + cplx(g.c) * H->act(Dir::Z, f);
              }) / g.c;
  double xz = std::max(std::abs(rep.xz().coefficient), rep.xz().deviation);
  // Theta(Y,Z) element = (pi i/mu) Id + d/dx H_Z, compared sample by sample.
  double yz = 0.0;
  const auto& rf = rep.yz().theta.rawf;
  for (int i = 0; i < g.Nx; ++i) {
    double x = rf.x(i);
    if (std::abs(x) > 2.0) continue;
    cplx ex(0.0, kPi / mu - (alpha * kPi / mu) * std::sin(alpha * kPi * x / mu));
    for (int j = 0; j < g.ny; ++j) yz = std::max(yz, std::abs(rf.at(i, j) - ex));
  }
  out.ym = ym_value(rep).value;
  out.closed = thm51_closed_form(g.c, mu, alpha);
  out.res.emplace_back("Theta(X,Y) = -c H_Z", xy);
  out.res.emplace_back("Theta(X,Z) = 0", xz);
  out.res.emplace_back("Theta(Y,Z) = (pi i/mu) Id + dH_Z/dx (rel)", yz / (kPi / mu));
  out.res.emplace_back("YM - closed form (rel)", std::abs(out.ym - out.closed) / out.closed);
  if (with_critical) {
    CriticalResiduals cr = critical_residuals(conn, rep, probes);
    out.critical = std::max({cr.r1, cr.r2, cr.r3});
  }
  return out;
}

// ---------------------------------------------------------------------------

void c1(Criterion& C) {
  for (Rational nu : {Rational(1, 4), Rational(1, 8)}) {
    GridSpec g = default_grid(1, Rational(1, 2), nu);
    RunConfig cfg;
    cfg.nu = nu;
    cfg.seed = 101;
    ExperimentReport r = run_verify(cfg);
    for (const auto& a : r.assertions) {
      bool algebraic = a.name.find("tau_E(<f,g>") == std::string::npos;
      if (a.name.find("Leibniz") != std::string::npos || a.name.find("compat") != std::string::npos ||
          a.name.find("Id") != std::string::npos || a.name.find("frame") != std::string::npos)
        continue;
      C.le(params(g) + " " + a.name, a.measured, algebraic ? kAlg : kCalc);
    }
  }
}

void c2(Criterion& C) {
  for (auto [c, mu, nu] : {std::tuple{1, Rational(1, 2), Rational(1, 4)}, std::tuple{2, Rational(3, 4), Rational(1, 8)}}) {
    GridSpec g = default_grid(c, mu, nu);
    for (const auto& [n, v] : item2(g, 202)) C.le(params(g) + " " + n, v, kCalc);
  }
}

void c3(Criterion& C) {
  for (auto [c, mu, nu] : {std::tuple{1, Rational(1, 2), Rational(1, 4)}, std::tuple{2, Rational(3, 4), Rational(1, 8)}}) {
    GridSpec g = default_grid(c, mu, nu);
    for (const auto& [n, v] : item3(g)) C.le(params(g) + " " + n, v, kCalc);
  }
}

void c4(Criterion& C) {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  for (const auto& [n, v] : item4(g)) C.le(n, v, kCalc);
  C.le("class is Neither", classify_ym(make_nabla1(g)).kind == YMClass::Neither ? 0.0 : 1.0, 0.0);
}

void c5(Criterion& C) {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  for (const auto& [n, v] : item5(g)) C.le(n, v, kCalc);
}

void c6(Criterion& C) {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  Item6 r = item6(g);
  for (const auto& [n, v] : r.res) C.le(n, v, kCalc);
  for (const auto& [n, k] : r.classes) {
    C.le(n + ": class YangMillsConstant", k == YMClass::YangMillsConstant ? 0.0 : 1.0, 0.0);
  }
  C.note("the raw example runs in raw mode: cos(2 pi y) is not gamma-invariant for nu = 1/4");
}

void c7(Criterion& C) {
  for (auto [c, alpha] : std::vector<std::pair<int, double>>{{1, 0.125}, {1, 0.25}, {2, 0.125}}) {
    bool headline = c == 1 && alpha == 0.125;
    Item7 r = item7(c, alpha, 1, headline);
    char tag[64];
    std::snprintf(tag, sizeof tag, "(c,mu,alpha)=(%d,1/2,%g) ", c, alpha);
    for (const auto& [n, v] : r.res) C.le(tag + n, v, kCalc);
    char b[128];
    std::snprintf(b, sizeof b, "%sYM = %.10f, closed form %.10f", tag, r.ym, r.closed);
    C.note(b);
    if (headline) {
      C.le(std::string(tag) + "YM < 4 pi^2", r.ym, 4.0 * kPi * kPi);
      C.gt(std::string(tag) + "max critical residual", r.critical, 1e-3);
    }
  }
}

void c8(Criterion& C) {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  const double mu = g.mu_d();
  std::vector<std::pair<std::string, std::function<double(double, double)>>> phases{
      {"exp(0.3 i cos(pi x/mu))", [mu](double x, double) { return 0.3 * std::cos(kPi * x / mu); }},
      {"exp(0.2 i sin(4 pi y))", [](double, double y) { return 0.2 * std::sin(4 * kPi * y); }},
      {"exp(0.25 i sin(pi x/mu) cos(4 pi y))",
       [mu](double x, double y) { return 0.25 * std::sin(kPi * x / mu) * std::cos(4 * kPi * y); }}};
  for (bool one : {false, true}) {
    Connection base = one ? make_nabla1(g) : make_nabla0(g);
    double y0 = ym_value(base).value;
    for (const auto& [name, ph] : phases) {
      EField u = make_mult_type_E(g, [&](double x, double y) { return std::exp(cplx(0.0, ph(x, y))); });
      double y1 = ym_value(gauge_transform(u, base)).value;
      C.le(base.name + ", u = " + name, std::abs(y1 - y0), kCalc);
    }
  }
}

void c9(Criterion& C) {
  GridSpec g = make_grid(1, Rational(1, 4), Rational(1, 8), 256, 128, Rational(-11, 2), Rational(11, 2), 6);
  ModuleField seed = sample_module(g, [](double x, double) {
    return cplx(std::exp(-x * x / (2 * 0.15 * 0.15)) * plateau_cutoff(x, 1.0, 0.75));
  });
  auto fr = std::make_shared<const Frame>(frame_normalize(seed));
  const double mu = g.mu_d();
  C.le("frame: |<R,R>_E - Id|", fr->left_gram_error(), kFrameGram);
  C.le("frame: |tau_D(Q) - 2 mu|", std::abs(trace_D(fr->right_gram) - 2.0 * mu), kTraceQ);
  QDCheck q = qd_critical_check(qd_connection(fr), 7, 2);
  C.le("Theta'(X,Y)", q.xy, kQD);
  C.le("Theta'(X,Z)", q.xz, kQD);
  C.le("Theta'(Y,Z) = -(pi i/mu) Q (rel)", q.yz_paper_deviation, kQD);
  C.gt("critical-point residual on Q D (non-critical)", q.eq2_residual, 1e-3);
  GridSpec gd = default_grid(1, Rational(1, 4), Rational(1, 8));
  C.le("nabla0 on Xi: class YangMillsConstant", classify_ym(make_nabla0(gd)).kind == YMClass::YangMillsConstant ? 0.0 : 1.0,
       0.0);
  char b[256];
  std::snprintf(b, sizeof b,
                "measured: Theta'(Y,Z) = lambda Q with lambda = %.9f%+.9fi (pi/mu = %.9f), scalar deviation %.2e;"
                " critical-point residual %.2e vs predicted pattern %.2e",
                q.yz_coefficient.real(), q.yz_coefficient.imag(), kPi / mu, q.yz_scalar_deviation, q.eq2_residual,
                q.eq2_predicted);
  C.note(b);
  C.note("red sub-checks are analysed in the decisions ledger: the conj-linear actions give +(pi i/mu) Q, and "
         "Theta' is then scalar on Q D, so the critical-point residual vanishes");
}

void c10(Criterion& C) {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  const double ym0 = 2.0 * kPi * kPi / g.mu_d();
  Connection base = make_nabla0(g);
  PerturbationBasis b = thm47_basis(g);
  Objective obj = ym_objective(base, b);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  double flat = 0.0;
  std::vector<double> th(b.size());
  for (int s = 0; s < 4; ++s) {
    for (auto& t : th) t = U(rng);
    flat = std::max(flat, std::abs(obj.f(th) - ym0) / ym0);
  }
  C.le("strict family (8 coefficients): |YM - 2 pi^2/mu| / (2 pi^2/mu) at 4 points", flat, kFlat);

  Objective o51 = ym_objective(base, thm51_basis(g, 0.125));
  MinimizeOptions mo;
  mo.max_iter = 3;
  mo.step = 0.05;
  mo.grad.richardson = false;
  MinimizeResult mr = minimize(o51, {1.0, 0.0}, mo);
  bool mono = true;
  for (std::size_t i = 1; i < mr.trajectory.size(); ++i) mono = mono && mr.trajectory[i].value <= mr.trajectory[i - 1].value;
  C.le("relaxed family: final value", mr.value, 36.73);
  C.le("relaxed family: final value < 4 pi^2", mr.value, 4.0 * kPi * kPi);
  C.le("relaxed family: monotone trajectory", mono ? 0.0 : 1.0, 0.0);
  char s[160];
  std::snprintf(s, sizeof s, "descent: %.6f -> %.6f in %zu iterations (%s)", mr.trajectory.front().value, mr.value,
                mr.trajectory.size() - 1, mr.stop_reason.c_str());
  C.note(s);
}

void c11(Criterion& C) {
  GridSpec g = make_grid(1, Rational(3, 4), Rational(1, 8), 128, 64, Rational(-12), Rational(12), 6);
  auto gauss = [&](double c, double s) {
    return sample_module(g, [=](double x, double) {
      double d = x - c;
      return cplx(std::exp(-d * d / (2 * s * s)) * plateau_cutoff(d, 1.2, 0.75));
    });
  };
  SynthProjection sp = synthesize_projection(gauss(0.0, 0.3));
  C.le("synthesized P: |P^2 - P|", sp.idempotency, kAlg);
  char b[128];
  std::snprintf(b, sizeof b, "synthesized P: trace_E(P) = %.12f, max |P(p != 0)| = %.3g", sp.trace.real(),
                max_abs_offdiag(sp.P));
  C.note(b);
  auto mf = std::make_shared<const MultiFrame>(multi_frame_normalize({gauss(0.0, 0.25), gauss(0.75, 0.25)}));
  C.le("two-generator frame: |sum <R_i,R_i>_E - Id|", mf->left_gram_error(), kFrameGram);

  Connection n0 = make_nabla0(g);
  const EField I = make_identity_E(g);
  for (int which = 0; which < 2; ++which) {
    const EField& P = which ? sp.P : I;
    const char* tag = which ? "P synthesized" : "P = Id";
    Connection c = pxi_grassmannian(P, mf);
    std::mt19937_64 rng(3);
    ModuleField f1 = act_left(P, random_module_field(g, rng)), f2 = act_left(P, random_module_field(g, rng));
    C.le(std::string("pxi compatibility, ") + tag, compat_residual(c, f1, f2), kSec6);
    PEChecks pc = pe_checks(pe_grassmannian(P, n0));
    C.le(std::string("pe compatibility, ") + tag, pc.compat, kSec6);
    if (which) {
      C.le("two-path curvature on P E, P synthesized", pc.two_path, kSec6);
      TensorChecks tk = tensor_checks(tensor_connection(pe_grassmannian(P, n0), n0));
      C.le("tensor curvature additivity, P synthesized", tk.additivity, kSec6);
      C.le("tensor balance (f a (x) xi = f (x) a xi)", tk.balance, kSec6);
    }
  }

  // Tensor criticality on P = Id (zero E-side curvature), at the default grid.
  GridSpec gd = default_grid(1, Rational(1, 2), Rational(1, 4));
  const EField Id = make_identity_E(gd);
  for (bool one : {false, true}) {
    Connection xi = one ? make_nabla1(gd) : make_nabla0(gd);
    TensorConnection t = tensor_connection(pe_grassmannian(Id, xi), xi);
    CriticalResiduals r = tensor_critical_residuals(t);
    if (one) {
      C.gt("tensor with nabla1: r3 > 100 tol", r.r3, 100.0 * kSec6);
    } else {
      C.le("tensor with nabla0: max residual", std::max({r.r1, r.r2, r.r3}), kSec6);
    }
  }

  for (auto [mu, nu] : {std::pair{Rational(1, 2), Rational(1, 4)}, std::pair{Rational(3, 4), Rational(1, 8)}}) {
    CouplingLedger L = coupling_chain(default_grid(1, mu, nu));
    const std::vector<std::pair<std::string, Rational>> ex{{"C_D^E(Xi)(tau_D)", mu * 2},
                                                          {"C_E^D(Xi)(tau'_E)", Rational(1) / (mu * 2)},
                                                          {"C_E^PEP(PE)(tau'_E)", nu / mu},
                                                          {"C_PEP^E(PE)(tau'_PEP)", mu / nu},
                                                          {"C_PEP^D(PE(x)Xi)(tau'_PEP)", Rational(1) / (nu * 2)},
                                                          {"C_D^PEP(PE(x)Xi)(tau_D)", nu * 2}};
    bool all = true;
    for (const auto& [n, v] : ex) all = all && L.at(n).value == v;
    char t[96];
    std::snprintf(t, sizeof t, "coupling chain exact at (mu,nu)=(%lld/%lld,%lld/%lld)", mu.numerator(),
                  mu.denominator(), nu.numerator(), nu.denominator());
    C.le(t, all ? 0.0 : 1.0, 0.0);
  }
}

// Items 2-7 at a coarse base resolution and at twice that.  A residual
// already at the rounding floor on the coarse grid carries no
// discretization error and is exempt from the order test.
void c12(Criterion& C) {
  constexpr double kFloor = 1e-11;
  const int base = 32;
  auto grid = [&](int c, Rational mu, Rational nu, int s) {
    return make_grid(c, mu, nu, base * s, base * s, Rational(-4), Rational(4), 4, 8);
  };
  auto collect = [&](int s) {
    Residuals all;
    auto add = [&](const std::string& p, const Residuals& r) {
      for (const auto& [n, v] : r) all.emplace_back(p + n, v);
    };
    add("2 ", item2(grid(1, Rational(1, 2), Rational(1, 4), s), 202));
    add("2' ", item2(grid(2, Rational(3, 4), Rational(1, 8), s), 202));
    add("3 ", item3(grid(1, Rational(1, 2), Rational(1, 4), s)));
    add("4 ", item4(grid(1, Rational(1, 2), Rational(1, 4), s)));
    add("5 ", item5(grid(1, Rational(1, 2), Rational(1, 4), s)));
    add("6 ", item6(grid(1, Rational(1, 2), Rational(1, 4), s)).res);
    {
      GridSpec g = grid(1, Rational(1, 2), Rational(1, 4), s);
      std::shared_ptr<const Perturbation> H;
      Connection conn = thm51_connection(make_nabla0(g), 0.125, &H);
      double ym = ym_value(conn).value, ex = thm51_closed_form(1, 0.5, 0.125);
      all.emplace_back("7 YM - closed form (rel)", std::abs(ym - ex) / ex);
    }
    return all;
  };
  Residuals r1 = collect(1), r2 = collect(2);
  int tested = 0;
  for (std::size_t k = 0; k < r1.size(); ++k) {
    const auto& [name, a] = r1[k];
    double b2 = r2[k].second;
    if (a <= kFloor) {
      char s[200];
      std::snprintf(s, sizeof s, "%s: %.2e -> %.2e (at rounding floor on the coarse grid)", name.c_str(), a, b2);
      C.note(s);
      continue;
    }
    ++tested;
    double order = std::log2(a / std::max(b2, 1e-300));
    char s[200];
    std::snprintf(s, sizeof s, "%s: observed order (%.2e -> %.2e)", name.c_str(), a, b2);
    C.gt(s, order, 2.0);
  }
  C.gt("residuals with discretization error", tested, 0);
}

}  // namespace

int main(int argc, char** argv) {
  setvbuf(stdout, nullptr, _IONBF, 0);
  std::vector<std::pair<std::string, void (*)(Criterion&)>> all{
      {"convention bootstrap", c1},
      {"nabla0 Leibniz, compatibility and curvature", c2},
      {"YM(nabla0) = 2 pi^2/mu", c3},
      {"nabla1 curvature, YM and critical residuals", c4},
      {"commutators with multiplication-type G", c5},
      {"strict families and the raw example are Yang-Mills", c6},
      {"non-constant curvature below the constant-curvature minimum", c7},
      {"gauge invariance of YM", c8},
      {"contrast pair: nabla' on Q D vs nabla0 on Xi", c9},
      {"optimizer", c10},
      {"projective modules, tensor products and coupling constants", c11},
      {"convergence under grid doubling", c12}};
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Criterion C{id, all[i].first, {}, {}, {}};
    auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].second(C);
    } catch (const std::exception& e) {
      C.error = e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = C.passed();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, C.title.c_str(), dt);
    for (const auto& c : C.checks)
      std::printf("    %-4s %s: %.3e %s %.1e\n", c.pass ? "ok" : "RED", c.name.c_str(), c.measured, c.rel, c.bound);
    for (const auto& s : C.info) std::printf("    note %s\n", s.c_str());
    if (!C.error.empty()) std::printf("    error %s\n", C.error.c_str());
  }
  return failed == 0 ? 0 : 1;
}
