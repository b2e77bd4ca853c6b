#pragma once

#include "qhm/algebra.hpp"

#include <random>

namespace qhm {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
// 1 on |x| <= radius, 0 beyond radius + ramp.
double plateau_cutoff(double x, double radius, double ramp);
// Compact bump exp(1 - 1/(1 - t^2)) on |t| < 1, peak 1 at 0.
double compact_bump(double t);

struct ProbeOptions {
  bool seam_avoiding = false;  // y-envelope vanishing near y = 0
  double cutoff_radius = 2.25;
  double cutoff_ramp = 1.0;
};

// The fixed 12-element family: Gaussians at centers {-0.5, 0, 0.5}, widths
// {0.8, 1.2}, y-modes {0, 1}, times a plateau cutoff.
std::vector<ModuleField> standard_probes(const GridSpec& g, const ProbeOptions& opt = {});

// y-envelope used by seam-avoiding fields: narrow Gaussian centred at 1/2.
double seam_envelope(double y);

struct RandomFieldOptions {
  double sigma_lo = 0.25;
  double sigma_hi = 0.45;
  double center_radius = 0.5;
  double cutoff = 1.0;  // plateau radius
  double ramp = 0.75;
  int max_mode = 2;
  bool seam_avoiding = false;
};

// Small Gaussian x trig fields, compactly supported well inside the window.
ModuleField random_module_field(const GridSpec& g, std::mt19937_64& rng, const RandomFieldOptions& opt = {});

// Random covariant elements with p-support in [-pr, pr], built by
// periodizing narrow Gaussians.
DField random_D(const GridSpec& g, std::mt19937_64& rng, int pr = 1);
EField random_E(const GridSpec& g, std::mt19937_64& rng, int pr = 1);

// Probe-norm residual: max over probes of ||op(g)|| / ||g||.
double probe_residual(const std::vector<ModuleField>& probes,
                      const std::function<ModuleField(const ModuleField&)>& op);

}  // namespace qhm
