#pragma once

#include "qhm/connections.hpp"

#include <optional>

namespace qhm {

using FieldOp = std::function<ModuleField(const ModuleField&)>;

ModuleField curvature_apply(const Connection& c, Dir a, Dir b, const ModuleField& f);

// An operator reconstructed as a left multiplication.  Covariant results
// live in `cov`; raw results (p = 0 multipliers that need not be
// gamma-invariant) are sampled over the window; traces use the closed
// cell [0, 2mu].
struct Reconstruction {
  bool is_raw = false;
  EField cov;
  ModuleField rawf;       // element values E(x,y) over the window
  double error = 0.0;     // relative residual on an independent probe

  ModuleField act(const ModuleField& f) const;
  cplx trace() const;
  Reconstruction operator*(const Reconstruction& o) const;
  Reconstruction star() const;
  Reconstruction operator+(const Reconstruction& o) const;
  Reconstruction scaled(cplx s) const;
};

struct ReconstructOptions {
  int p_radius = 0;
  bool raw = false;
};

Reconstruction reconstruct_E(const GridSpec& g, const FieldOp& op, const ReconstructOptions& opt = {});

struct CurvaturePair {
  Dir a, b;
  Reconstruction theta;
  cplx coefficient;  // tau_E(Theta) / 2mu
  double deviation;  // probe-norm of Theta - coefficient Id
  bool is_constant;
};

struct CurvatureReport {
  std::array<CurvaturePair, 3> pairs;  // XY, XZ, YZ
  double reconstruction_error = 0.0;
  double skew_error = 0.0;
  const CurvaturePair& xy() const { return pairs[0]; }
  const CurvaturePair& xz() const { return pairs[1]; }
  const CurvaturePair& yz() const { return pairs[2]; }
};

struct CurvatureOptions {
  int p_radius = 0;
  double constancy_tol = 1e-5;
  std::optional<bool> raw;  // default: raw iff the connection is not invariant
};

CurvatureReport curvature_report(const Connection& c, const CurvatureOptions& opt = {});

struct ConstantDistance {
  cplx coefficient;
  double deviation;
};
ConstantDistance constant_curvature_distance(const Reconstruction& theta, const GridSpec& g);

struct YMResult {
  double value = 0.0;
  double imag = 0.0;
  double error_bar = 0.0;
};
YMResult ym_value(const CurvatureReport& rep);
YMResult ym_value(const Connection& c, const CurvatureOptions& opt = {});

struct CriticalResiduals {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
};
// Probe norms of the three critical-point operators, using the
// reconstructed curvature elements acting on the left.
CriticalResiduals critical_residuals(const Connection& c, const CurvatureReport& rep,
                                     const std::vector<ModuleField>& probes);
CriticalResiduals critical_residuals(const Connection& c, const CurvatureOptions& opt = {});

enum class YMClass { YangMillsConstant, CriticalNotMin, MinFormNotCritical, Neither, NonConstant };
const char* class_name(YMClass k);

struct Classification {
  YMClass kind;
  CurvatureReport report;
  CriticalResiduals residuals;
};
Classification classify_ym(const Connection& c, double tol = 1e-5, const CurvatureOptions& opt = {});

// Probe family suited to a connection; seam-avoiding when required.
std::vector<ModuleField> probes_for(const Connection& c);

}  // namespace qhm
