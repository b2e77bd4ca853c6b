#pragma once

#include "qhm/config.hpp"
#include "qhm/derived.hpp"
#include "qhm/optimizer.hpp"

namespace qhm {

enum class Provenance { Paper, Derived, Trivial };
const char* provenance_name(Provenance p);

struct ReportValue {
  std::string name;
  cplx value;
  bool is_complex = false;
  double error_bar = 0.0;
};

// measured `relation` bound, e.g. a residual <= tol or a gap > tol.
struct Assertion {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // "<=" or ">"
  Provenance provenance = Provenance::Derived;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  GridSpec grid;
  ToleranceSet tol;
  std::vector<ReportValue> values;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, std::string>> labels;
  double wall_time = 0.0;

  std::vector<TrajectoryRow> trajectory;
  std::vector<std::string> slice_header;
  std::vector<std::vector<double>> slice;

  void value(const std::string& n, double v, double err = 0.0);
  void value(const std::string& n, cplx v, double err = 0.0);
  void label(const std::string& k, const std::string& v);
  bool check_le(const std::string& n, double measured, double bound, Provenance p);
  bool check_gt(const std::string& n, double measured, double bound, Provenance p);
  bool passed() const;
  void append(const ExperimentReport& o, const std::string& prefix);
};

// A connection named in a config together with what is known about it.
struct NamedConnection {
  Connection conn;
  std::string label;
  std::optional<double> ym_expected;
  std::optional<YMClass> class_expected;
  // Known critical residual r3 (nabla^1); r1, r2 and r3 vanish otherwise
  // when the connection is expected to be critical.
  std::optional<double> r3_expected;
  CurvatureOptions options;
  std::shared_ptr<const Perturbation> perturbation;
  std::vector<std::string> notes;
};

// kinds: nabla0 | nabla1 | thm51 | thm47 | example48 | grassmannian
NamedConnection build_connection(const ConnectionSpec& spec, const GridSpec& g);

// The perturbation H_Z = i cos(alpha pi x / mu) on top of `base`.
Connection thm51_connection(const Connection& base, double alpha, std::shared_ptr<const Perturbation>* H = nullptr);
// Raw example: H_X = i cos(2 pi y), H_Y = i cos(pi x / mu), applied raw.
Connection example48_connection(const Connection& base);

ExperimentReport run_verify(const RunConfig& cfg, int scale = 1);
ExperimentReport run_curvature(const RunConfig& cfg, int scale = 1);
ExperimentReport run_ym(const RunConfig& cfg, int scale = 1);
ExperimentReport run_critical(const RunConfig& cfg, int scale = 1);
ExperimentReport run_classify(const RunConfig& cfg, int scale = 1);
// family: thm47 | thm51
ExperimentReport run_optimize(const RunConfig& cfg, const std::string& family, int scale = 1);
ExperimentReport run_paper_table(const RunConfig& cfg, int scale = 1);
ExperimentReport run_coupling(const RunConfig& cfg, int scale = 1);

}  // namespace qhm
