#include "qhm/connections.hpp"

#include <cmath>

namespace qhm {

const char* dir_name(Dir w) {
  switch (w) {
    case Dir::X:
      return "X";
    case Dir::Y:
      return "Y";
    default:
      return "Z";
  }
}

Dir parse_dir(const std::string& s) {
  if (s == "X" || s == "x") return Dir::X;
  if (s == "Y" || s == "y") return Dir::Y;
  if (s == "Z" || s == "z") return Dir::Z;
  throw ConfigError("unknown Lie direction '" + s + "'");
}

Bracket bracket(Dir a, Dir b, int c) {
  if (a == Dir::X && b == Dir::Y) return {static_cast<double>(c)};
  if (a == Dir::Y && b == Dir::X) return {-static_cast<double>(c)};
  return {};
}

const char* kind_name(ConnKind k) {
  switch (k) {
    case ConnKind::Nabla0:
      return "nabla0";
    case ConnKind::Nabla1:
      return "nabla1";
    case ConnKind::Grassmannian:
      return "grassmannian";
    case ConnKind::Perturbed:
      return "perturbed";
    case ConnKind::Gauge:
      return "gauge";
    default:
      return "custom";
  }
}

DField delta(Dir w, const DField& phi) {
  const auto& g = phi.grid;
  if (w == Dir::Y) return scale(cplx(-1.0), diff_x(phi));
  if (w == Dir::Z) {
    DField out(g);
    for (int p = -g.P; p <= g.P; ++p) {
      cplx f = cplx(0.0, 2.0 * kPi * p);
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.at(p, i, j) = f * phi.at(p, i, j);
    }
    return out;
  }
  DField out = scale(cplx(-1.0), diff_y(phi));
  const double mu = g.mu_d();
  for (int p = -g.P; p <= g.P; ++p) {
    if (p == 0) continue;
    for (int i = 0; i < g.nx; ++i) {
      cplx f = cplx(0.0, 2.0 * kPi * g.c * p * (g.x_at(i) - p * mu));
      for (int j = 0; j < g.ny; ++j) out.at(p, i, j) += f * phi.at(p, i, j);
    }
  }
  return out;
}

DField heisenberg_act(double r, double s, double t, const DField& phi) {
  const auto& g = phi.grid;
  double rm = r * g.nx, sj = s * g.ny;
  long long ri = std::llround(rm), si = std::llround(sj);
  if (std::abs(rm - ri) > 1e-9 || std::abs(sj - si) > 1e-9)
    throw std::invalid_argument("heisenberg_act: translation not aligned with the grid");
  DField out(g);
  const double mu = g.mu_d();
  for (int p = -g.P; p <= g.P; ++p)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x_at(i);
      cplx ph = std::exp(cplx(0.0, 2.0 * kPi * p * (t + g.c * s * (x - r - p * mu))));
      for (int j = 0; j < g.ny; ++j) out.at(p, i, j) = ph * phi.value(i - ri, j - si, p);
    }
  return out;
}

ModuleField RawMult::act(const ModuleField& f) const {
  ModuleField out(f.grid);
  for (std::size_t k = 0; k < f.v.size(); ++k) out.v[k] = std::conj(e.v[k]) * f.v[k];
  return out;
}

ModuleField Perturbation::act(Dir w, const ModuleField& f) const {
  int k = static_cast<int>(w);
  if (raw) {
    ModuleField out(f.grid);
    for (std::size_t n = 0; n < f.v.size(); ++n) out.v[n] = raw_values[k].v[n] * f.v[n];
    return out;
  }
  return act_left(e_star(H[k]), f);
}

double Perturbation::skew_residual() const {
  double r = 0.0;
  if (raw) {
    // skew multiplier: purely imaginary values
    for (const auto& m : raw_values)
      for (const auto& z : m.v) r = std::max(r, std::abs(z.real()));
    return r;
  }
  for (const auto& h : H) r = std::max(r, qhm::skew_residual(h));
  return r;
}

double Perturbation::invariance_residual() const {
  double r = 0.0;
  if (raw) {
    // gamma-invariance of a p = 0 multiplier: G(x,y) = G(x - 2k mu, y - 2k nu)
    for (const auto& m : raw_values) {
      const auto& g = m.grid;
      for (int k : {-2, -1, 1, 2})
        for (int i = 0; i < g.Nx; ++i) {
          long long t = i - static_cast<long long>(k) * g.Ne;
          if (t < 0 || t >= g.Nx) continue;
          // skip the cutoff region where the window samples are damped
          if (std::abs(m.x(i)) > 1.0 || std::abs(m.x(static_cast<int>(t))) > 1.0) continue;
          for (int j = 0; j < g.ny; ++j) {
            long long jj = j - static_cast<long long>(k) * g.sy;
            r = std::max(r, std::abs(m.at(i, j) - m.at(static_cast<int>(t), static_cast<int>(pos_mod(jj, g.ny)))));
          }
        }
    }
    return r;
  }
  for (const auto& h : H) r = std::max(r, qhm::invariance_residual(h));
  return r;
}

Perturbation zero_perturbation(const GridSpec& g) {
  Perturbation p;
  for (auto& h : p.H) h = EField(g);
  return p;
}

namespace {

ModuleField nabla0_like(const GridSpec& g, Dir w, const ModuleField& f, bool is_one) {
  const double mu = g.mu_d(), nu = g.nu_d();
  switch (w) {
    case Dir::Y:
      return cplx(-1.0) * diff_x(f);
    case Dir::Z:
      return multiply(f, [&](double x, double) { return cplx(0.0, kPi * x / mu); });
    default: {
      ModuleField out = cplx(-1.0) * diff_y(f);
      out += multiply(f, [&](double x, double y) {
        double im = kPi * g.c * x * x / (2.0 * mu);
        if (is_one) im += -nu * x + mu * y;
        return cplx(0.0, im);
      });
      return out;
    }
  }
}

}  // namespace

Connection make_nabla0(const GridSpec& g) {
  Connection c;
  c.kind = ConnKind::Nabla0;
  c.name = "nabla0";
  c.grid = g;
  c.fn = [g](Dir w, const ModuleField& f) { return nabla0_like(g, w, f, false); };
  return c;
}

Connection make_nabla1(const GridSpec& g) {
  Connection c;
  c.kind = ConnKind::Nabla1;
  c.name = "nabla1";
  c.grid = g;
  c.seam_sensitive = true;
  c.fn = [g](Dir w, const ModuleField& f) { return nabla0_like(g, w, f, true); };
  return c;
}

Connection make_grassmannian(std::shared_ptr<const Frame> frame) {
  Connection c;
  c.kind = ConnKind::Grassmannian;
  c.name = "grassmannian";
  c.grid = frame->R.grid;
  c.frame = frame;
  c.fn = [frame](Dir w, const ModuleField& f) {
    return act_right(frame->R, delta(w, inner_D(frame->R, f)));
  };
  return c;
}

Connection make_perturbed(const Connection& base, const Perturbation& H) {
  Connection c;
  c.kind = ConnKind::Perturbed;
  c.name = base.name + "+H";
  c.grid = base.grid;
  c.seam_sensitive = base.seam_sensitive;
  c.invariant = base.invariant && !H.raw;
  auto b = std::make_shared<const Connection>(base);
  auto h = std::make_shared<const Perturbation>(H);
  c.base = b;
  c.H = h;
  c.fn = [b, h](Dir w, const ModuleField& f) {
    ModuleField out = b->apply(w, f);
    out += h->act(w, f);
    return out;
  };
  return c;
}

Connection gauge_transform(const EField& u, const Connection& base, double tol) {
  EField I = make_identity_E(u.grid);
  double r = std::max(max_abs(e_mul(e_star(u), u) - I), max_abs(e_mul(u, e_star(u)) - I));
  if (r > tol) throw NumericalError("gauge_transform: u is not unitary (residual " + std::to_string(r) + ")");
  Connection c;
  c.kind = ConnKind::Gauge;
  c.name = "gauge(" + base.name + ")";
  c.grid = base.grid;
  c.seam_sensitive = base.seam_sensitive;
  c.invariant = base.invariant;
  auto b = std::make_shared<const Connection>(base);
  auto uu = std::make_shared<const EField>(u);
  auto us = std::make_shared<const EField>(e_star(u));
  c.base = b;
  c.u = uu;
  c.fn = [b, uu, us](Dir w, const ModuleField& f) { return act_left(*uu, b->apply(w, act_left(*us, f))); };
  return c;
}

ModuleField connection_apply(const Connection& c, Dir w, const ModuleField& f) {
  require_same_grid(c.grid, f.grid, "connection_apply");
  return c.apply(w, f);
}

double leibniz_residual(const Connection& c, const ModuleField& f, const DField& phi) {
  ModuleField fphi = act_right(f, phi);
  double scale = norm(f) * std::max(1.0, max_abs(phi));
  double r = 0.0;
  for (Dir w : kDirs) {
    ModuleField res = c.apply(w, fphi) - act_right(c.apply(w, f), phi) - act_right(f, delta(w, phi));
    r = std::max(r, norm(res) / scale);
  }
  return r;
}

double compat_residual(const Connection& c, const ModuleField& f, const ModuleField& g) {
  double scale = norm(f) * norm(g);
  double r = 0.0;
  for (Dir w : kDirs) {
    DField res = delta(w, inner_D(f, g)) - inner_D(c.apply(w, f), g) - inner_D(f, c.apply(w, g));
    r = std::max(r, max_abs(res) / scale);
  }
  return r;
}

ModuleField hat_delta_apply(const Connection& c, const EField& T, Dir w, const ModuleField& f) {
  return c.apply(w, act_left(T, f)) - act_left(T, c.apply(w, f));
}

EField hat_delta0(Dir w, const EField& T) {
  const auto& g = T.grid;
  const double mu = g.mu_d();
  if (w == Dir::Y) return scale(cplx(-1.0), diff_x(T));
  EField out = w == Dir::X ? scale(cplx(-1.0), diff_y(T)) : EField(g);
  for (int q = -g.P; q <= g.P; ++q) {
    if (q == 0) continue;
    for (int i = 0; i < g.Ne; ++i) {
      double x = g.x_at(i);
      cplx f = w == Dir::Z ? cplx(0.0, kPi * q / mu) : cplx(0.0, kPi * g.c * q * (2.0 * x + q) / (2.0 * mu));
      for (int j = 0; j < g.ny; ++j) out.at(q, i, j) += f * T.at(q, i, j);
    }
  }
  return out;
}

}  // namespace qhm
