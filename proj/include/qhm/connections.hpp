#pragma once

#include "qhm/bimodule.hpp"
#include "qhm/probes.hpp"

#include <array>
#include <memory>
#include <string>

namespace qhm {

enum class Dir { X = 0, Y = 1, Z = 2 };
inline constexpr std::array<Dir, 3> kDirs{Dir::X, Dir::Y, Dir::Z};
const char* dir_name(Dir w);
Dir parse_dir(const std::string& s);

// [W1, W2] = coef * Z or 0; [X,Y] = cZ.
struct Bracket {
  double coef = 0.0;
  bool nonzero() const { return coef != 0.0; }
};
Bracket bracket(Dir a, Dir b, int c);

// delta_X = 2 pi i c p (x - p mu) - d/dy, delta_Y = -d/dx, delta_Z = 2 pi i p.
DField delta(Dir w, const DField& phi);

// (L_{(r,s,t)} Phi)(x,y,p) = e(p(t + cs(x - r - p mu))) Phi(x - r, y - s, p).
DField heisenberg_act(double r, double s, double t, const DField& phi);

// A p = 0 element given by samples E(x,y) over the whole window, acting by
// f -> conj(E) f.  Used where the multiplier is not gamma-invariant.
struct RawMult {
  ModuleField e;
  ModuleField act(const ModuleField& f) const;
};

struct Perturbation {
  std::array<EField, 3> H;
  // When set, the perturbation acts by plain multiplication with these
  // window samples instead of through H (relaxed, non-invariant families).
  bool raw = false;
  std::array<ModuleField, 3> raw_values;

  const EField& operator[](Dir w) const { return H[static_cast<int>(w)]; }
  ModuleField act(Dir w, const ModuleField& f) const;
  double skew_residual() const;
  double invariance_residual() const;
};
Perturbation zero_perturbation(const GridSpec& g);

enum class ConnKind { Nabla0, Nabla1, Grassmannian, Perturbed, Gauge, Custom };
const char* kind_name(ConnKind k);

struct Connection {
  ConnKind kind = ConnKind::Custom;
  std::string name;
  GridSpec grid;
  std::function<ModuleField(Dir, const ModuleField&)> fn;
  // Structural metadata.
  bool seam_sensitive = false;  // uses the y-coordinate itself (nabla^1)
  bool invariant = true;        // all ingredients are covariant elements
  std::shared_ptr<const Connection> base;
  std::shared_ptr<const Perturbation> H;
  std::shared_ptr<const EField> u;
  std::shared_ptr<const Frame> frame;

  ModuleField apply(Dir w, const ModuleField& f) const { return fn(w, f); }
};

Connection make_nabla0(const GridSpec& g);
Connection make_nabla1(const GridSpec& g);
Connection make_grassmannian(std::shared_ptr<const Frame> frame);
// (base + H)_W f = base_W f + H_W* . f; for skew multiplication-type H this
// is plain multiplication by H's function.
Connection make_perturbed(const Connection& base, const Perturbation& H);
Connection gauge_transform(const EField& u, const Connection& base, double tol = 1e-10);

ModuleField connection_apply(const Connection& c, Dir w, const ModuleField& f);

// max over W of ||nabla_W(f.Phi) - (nabla_W f).Phi - f.delta_W(Phi)|| / (||f|| max(1,|Phi|)).
double leibniz_residual(const Connection& c, const ModuleField& f, const DField& phi);
// max over W of |delta_W<f,g> - <nabla_W f, g> - <f, nabla_W g>| / (||f|| ||g||).
double compat_residual(const Connection& c, const ModuleField& f, const ModuleField& g);

// nabla_W(T . f) - T . (nabla_W f)
ModuleField hat_delta_apply(const Connection& c, const EField& T, Dir w, const ModuleField& f);

// Closed forms of the derivation induced by nabla^0 on E.
EField hat_delta0(Dir w, const EField& T);

}  // namespace qhm
