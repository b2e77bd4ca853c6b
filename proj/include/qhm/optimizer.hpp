#pragma once

#include "qhm/curvature.hpp"

namespace qhm {

// One real coefficient: H_dir += i * theta * trig(2 pi (n y + fx x)).
struct BasisTerm {
  Dir dir = Dir::X;
  int n = 0;
  double fx = 0.0;  // x-frequency; strict mode requires fx = (k - 2 n nu) / (2 mu)
  bool sine = false;
  std::string label;
};

struct PerturbationBasis {
  enum class Mode { Strict, Relaxed } mode = Mode::Strict;
  std::vector<BasisTerm> terms;
  std::size_t size() const { return terms.size(); }
};

// Strict term from the invariant character e(ny + ((k - 2n nu)/(2mu)) x).
BasisTerm strict_term(const GridSpec& g, Dir dir, int k, int n, bool sine);

// H_X = i g1(y) from cos/sin(2 pi n y), n in {n0, 2 n0} with 2 n0 nu in Z;
// H_Y = i g2(x) from cos/sin(pi k x / mu), k in {1, 2}.  Eight coefficients.
PerturbationBasis thm47_basis(const GridSpec& g);
// H_Z = i (theta_1 cos + theta_2 sin)(alpha pi x / mu).
PerturbationBasis thm51_basis(const GridSpec& g, double alpha);

Perturbation h_from_params(const GridSpec& g, const PerturbationBasis& basis, const std::vector<double>& theta);

struct Objective {
  std::function<double(const std::vector<double>&)> f;
  std::size_t dim = 0;
};

Objective ym_objective(const Connection& base, const PerturbationBasis& basis);

struct GradOptions {
  double step = 1e-4;
  bool richardson = true;
  int threads = 1;
};
std::vector<double> grad_fd(const Objective& obj, const std::vector<double>& theta, const GradOptions& opt = {});

struct MinimizeOptions {
  int max_iter = 50;
  double tol = 1e-6;        // gradient-norm stopping threshold
  double step = 1.0;        // initial trial step
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 30;
  GradOptions grad;
};

struct TrajectoryRow {
  int iter;
  double value;
  double grad_norm;
};

struct MinimizeResult {
  std::vector<double> theta;
  double value = 0.0;
  std::vector<TrajectoryRow> trajectory;
  bool converged = false;
  std::string stop_reason;
};

MinimizeResult minimize(const Objective& obj, const std::vector<double>& theta0, const MinimizeOptions& opt = {});

// Closed form of YM for nabla0 + i cos(alpha pi x / mu) in the Z slot.
double thm51_closed_form(int c, double mu, double alpha);
// Closed form with the literal action convention (perturbation acting by
// act_left(H, .)); kept for comparison in reports.
double thm51_closed_form_literal(int c, double mu, double alpha);

}  // namespace qhm
