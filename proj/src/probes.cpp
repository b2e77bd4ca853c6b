#include "qhm/probes.hpp"

#include <cmath>

namespace qhm {

namespace {

double psi_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = psi_exp(t), b = psi_exp(1.0 - t);
  return a / (a + b);
}

double plateau_cutoff(double x, double radius, double ramp) {
  return 1.0 - smooth_step((std::abs(x) - radius) / ramp);
}

double compact_bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double seam_envelope(double y) {
  double d = y - 0.5;
  return std::exp(-d * d / (2.0 * 0.07 * 0.07));
}

std::vector<ModuleField> standard_probes(const GridSpec& g, const ProbeOptions& opt) {
  std::vector<ModuleField> out;
  for (double x0 : {-0.5, 0.0, 0.5})
    for (double w : {0.8, 1.2})
      for (int n : {0, 1}) {
        out.push_back(sample_module(g, [&](double x, double y) {
          double d = x - x0;
          cplx v = std::exp(-d * d / (2.0 * w * w)) * plateau_cutoff(x, opt.cutoff_radius, opt.cutoff_ramp) *
                   std::exp(cplx(0.0, 2.0 * kPi * n * y));
          if (opt.seam_avoiding) v *= seam_envelope(y);
          return v;
        }));
      }
  return out;
}

ModuleField random_module_field(const GridSpec& g, std::mt19937_64& rng, const RandomFieldOptions& opt) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  const int terms = 3;
  struct Term {
    double x0, s;
    int n;
    cplx a;
  };
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Term tm;
    tm.x0 = opt.center_radius * (2.0 * U(rng) - 1.0);
    tm.s = opt.sigma_lo + (opt.sigma_hi - opt.sigma_lo) * U(rng);
    tm.n = static_cast<int>(std::floor(U(rng) * (2 * opt.max_mode + 1))) - opt.max_mode;
    tm.a = cplx(N(rng), N(rng));
    ts.push_back(tm);
  }
  return sample_module(g, [&](double x, double y) {
    cplx v = 0.0;
    for (const auto& t : ts) {
      double d = x - t.x0;
      v += t.a * std::exp(-d * d / (2.0 * t.s * t.s)) * std::exp(cplx(0.0, 2.0 * kPi * t.n * y));
    }
    v *= plateau_cutoff(x, opt.cutoff, opt.ramp);
    if (opt.seam_avoiding) v *= seam_envelope(y);
    return v;
  });
}

namespace {

struct BumpTerm {
  double x0, w;
  int p, n;
  cplx a;
};

std::vector<BumpTerm> random_bumps(std::mt19937_64& rng, int pr, double cell) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<BumpTerm> out;
  for (int p = -pr; p <= pr; ++p)
    for (int t = 0; t < 2; ++t) {
      BumpTerm b;
      b.p = p;
      b.x0 = cell * U(rng);
      b.w = 0.15 + 0.1 * U(rng);
      b.n = static_cast<int>(std::floor(U(rng) * 5)) - 2;
      b.a = cplx(N(rng), N(rng));
      out.push_back(b);
    }
  return out;
}

cplx eval_bumps(const std::vector<BumpTerm>& bs, double x, double y, int p) {
  cplx v = 0.0;
  for (const auto& b : bs) {
    if (b.p != p) continue;
    double t = (x - b.x0) / b.w;
    if (std::abs(t) > 12.0) continue;
    v += b.a * std::exp(-0.5 * t * t) * std::exp(cplx(0.0, 2.0 * kPi * b.n * y));
  }
  return v;
}

}  // namespace

DField random_D(const GridSpec& g, std::mt19937_64& rng, int pr) {
  auto bs = random_bumps(rng, std::min(pr, g.P), 1.0);
  return periodize_D(g, [&](double x, double y, int p) { return eval_bumps(bs, x, y, p); });
}

EField random_E(const GridSpec& g, std::mt19937_64& rng, int pr) {
  auto bs = random_bumps(rng, std::min(pr, g.P), 2.0 * g.mu_d());
  return periodize_E(g, [&](double x, double y, int p) { return eval_bumps(bs, x, y, p); });
}

double probe_residual(const std::vector<ModuleField>& probes,
                      const std::function<ModuleField(const ModuleField&)>& op) {
  double r = 0.0;
  for (const auto& p : probes) {
    double n = norm(p);
    if (n == 0.0) continue;
    r = std::max(r, norm(op(p)) / n);
  }
  return r;
}

}  // namespace qhm
