#include "qhm/optimizer.hpp"

#include <cmath>
#include <future>
#include <numeric>

namespace qhm {

BasisTerm strict_term(const GridSpec& g, Dir dir, int k, int n, bool sine) {
  Rational fx = (Rational(k) - Rational(2 * n) * g.nu) / (g.mu * 2);
  BasisTerm t;
  t.dir = dir;
  t.n = n;
  t.fx = to_double(fx);
  t.sine = sine;
  t.label = std::string(dir_name(dir)) + (sine ? ":sin" : ":cos") + "(k=" + std::to_string(k) +
            ",n=" + std::to_string(n) + ")";
  return t;
}

PerturbationBasis thm47_basis(const GridSpec& g) {
  PerturbationBasis b;
  b.mode = PerturbationBasis::Mode::Strict;
  // smallest n0 > 0 with 2 n0 nu integral
  Rational two_nu = g.nu * 2;
  int n0 = static_cast<int>(two_nu.denominator());
  for (int n : {n0, 2 * n0}) {
    int k = static_cast<int>((two_nu * n).numerator());  // k = 2 n nu makes fx = 0
    for (bool s : {false, true}) b.terms.push_back(strict_term(g, Dir::X, k, n, s));
  }
  for (int k : {1, 2})
    for (bool s : {false, true}) b.terms.push_back(strict_term(g, Dir::Y, k, 0, s));
  return b;
}

PerturbationBasis thm51_basis(const GridSpec& g, double alpha) {
  PerturbationBasis b;
  b.mode = PerturbationBasis::Mode::Relaxed;
  for (bool s : {false, true}) {
    BasisTerm t;
    t.dir = Dir::Z;
    t.n = 0;
    t.fx = alpha / (2.0 * g.mu_d());
    t.sine = s;
    t.label = s ? "Z:sin(alpha pi x/mu)" : "Z:cos(alpha pi x/mu)";
    b.terms.push_back(t);
  }
  return b;
}

Perturbation h_from_params(const GridSpec& g, const PerturbationBasis& basis, const std::vector<double>& theta) {
  if (theta.size() != basis.size())
    throw std::invalid_argument("h_from_params: expected " + std::to_string(basis.size()) + " coefficients, got " +
                                std::to_string(theta.size()));
  auto fn = [&](Dir d) {
    return [&, d](double x, double y) {
      double s = 0.0;
      for (std::size_t t = 0; t < basis.size(); ++t) {
        const auto& b = basis.terms[t];
        if (b.dir != d || theta[t] == 0.0) continue;
        double arg = 2.0 * kPi * (b.n * y + b.fx * x);
        s += theta[t] * (b.sine ? std::sin(arg) : std::cos(arg));
      }
      return cplx(0.0, s);
    };
  };
  Perturbation p = zero_perturbation(g);
  if (basis.mode == PerturbationBasis::Mode::Relaxed) {
    p.raw = true;
    for (Dir d : kDirs) p.raw_values[static_cast<int>(d)] = sample_module(g, fn(d));
  } else {
    for (Dir d : kDirs) p.H[static_cast<int>(d)] = make_mult_type_E(g, fn(d));
  }
  return p;
}

Objective ym_objective(const Connection& base, const PerturbationBasis& basis) {
  Objective o;
  o.dim = basis.size();
  o.f = [base, basis](const std::vector<double>& theta) {
    // theta = 0 goes through the same perturbed code path.
    Connection c = make_perturbed(base, h_from_params(base.grid, basis, theta));
    CurvatureOptions co;
    co.raw = basis.mode == PerturbationBasis::Mode::Relaxed;
    return ym_value(c, co).value;
  };
  return o;
}

std::vector<double> grad_fd(const Objective& obj, const std::vector<double>& theta, const GradOptions& opt) {
  if (!(opt.step > 0.0)) throw std::invalid_argument("grad_fd: step must be positive");
  const std::size_t n = theta.size();
  auto central = [&](std::size_t i, double h) {
    auto tp = theta, tm = theta;
    tp[i] += h;
    tm[i] -= h;
    return (obj.f(tp) - obj.f(tm)) / (2.0 * h);
  };
  auto coord = [&](std::size_t i) {
    double d1 = central(i, opt.step);
    if (!opt.richardson) return d1;
    double d2 = central(i, opt.step / 2.0);
    return (4.0 * d2 - d1) / 3.0;
  };
  std::vector<double> g(n);
  if (opt.threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) g[i] = coord(i);
    return g;
  }
  // Coordinates are independent; run them in batches of `threads`.
  for (std::size_t b = 0; b < n; b += static_cast<std::size_t>(opt.threads)) {
    std::vector<std::future<double>> fs;
    std::size_t e = std::min(n, b + static_cast<std::size_t>(opt.threads));
    for (std::size_t i = b; i < e; ++i) fs.push_back(std::async(std::launch::async, coord, i));
    for (std::size_t i = b; i < e; ++i) g[i] = fs[i - b].get();
  }
  return g;
}

namespace {

double l2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

MinimizeResult minimize(const Objective& obj, const std::vector<double>& theta0, const MinimizeOptions& opt) {
  MinimizeResult r;
  r.theta = theta0;
  r.value = obj.f(theta0);
  if (!std::isfinite(r.value)) throw NumericalError("minimize: initial value is not finite");
  if (theta0.empty()) {
    r.trajectory.push_back({0, r.value, 0.0});
    r.converged = true;
    r.stop_reason = "empty basis";
    return r;
  }
  double step = opt.step;
  for (int it = 0;; ++it) {
    std::vector<double> g = grad_fd(obj, r.theta, opt.grad);
    double gn = l2(g);
    r.trajectory.push_back({it, r.value, gn});
    if (gn <= opt.tol) {
      r.converged = true;
      r.stop_reason = "gradient tolerance";
      return r;
    }
    if (it >= opt.max_iter) {
      r.stop_reason = "max_iter";
      return r;
    }
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      std::vector<double> trial = r.theta;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= t * g[i];
      double v = obj.f(trial);
      if (std::isfinite(v) && v <= r.value - opt.armijo_c1 * t * gn * gn) {
        r.theta = trial;
        r.value = v;
        accepted = true;
        break;
      }
      t *= opt.shrink;
    }
    if (!accepted) {
      // No decrease is available along -g at any tried scale: treat as
      // stationary to the resolution of the finite-difference gradient.
      r.stop_reason = "line search exhausted";
      return r;
    }
    // Let the next trial step grow back after a successful one.
    step = std::min(opt.step * 4.0, t * 2.0);
  }
}

double thm51_closed_form(int c, double mu, double alpha) {
  const double a = alpha * kPi;
  const double c2 = static_cast<double>(c) * c;
  return c2 * mu + c2 * mu * std::sin(4.0 * a) / (4.0 * a) + 2.0 * kPi * kPi / mu +
         (2.0 * kPi / mu) * (std::cos(2.0 * a) - 1.0) + alpha * alpha * kPi * kPi / mu -
         (a / (4.0 * mu)) * std::sin(4.0 * a);
}

double thm51_closed_form_literal(int c, double mu, double alpha) {
  const double a = alpha * kPi;
  return thm51_closed_form(c, mu, alpha) - 2.0 * (2.0 * kPi / mu) * (std::cos(2.0 * a) - 1.0);
}

}  // namespace qhm
