// Batch runner: qhm <subcommand> [options]; writes a JSON report.
#include "qhm/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using json = nlohmann::json;
using namespace qhm;

namespace {

json rat_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

json report_json(const ExperimentReport& r) {
  json j;
  j["schema"] = 1;
  j["experiment"] = r.name;
  const GridSpec& g = r.grid;
  j["grid"] = {{"c", g.c},
               {"mu", rat_json(g.mu)},
               {"nu", rat_json(g.nu)},
               {"nx_per_unit", g.nx},
               {"ny", g.ny},
               {"window", json::array({rat_json(g.x_lo), rat_json(g.x_hi)})},
               {"p_radius", g.P}};
  j["tolerances"] = {{"alg", r.tol.alg}, {"calc", r.tol.calc}};
  json vals = json::array();
  for (const auto& v : r.values) {
    json e = {{"name", v.name}, {"error_bar", v.error_bar}};
    if (v.is_complex)
      e["value"] = json::array({v.value.real(), v.value.imag()});
    else
      e["value"] = v.value.real();
    vals.push_back(e);
  }
  j["values"] = vals;
  json as = json::array();
  for (const auto& a : r.assertions)
    as.push_back({{"name", a.name},
                  {"measured", a.measured},
                  {"bound", a.bound},
                  {"relation", a.relation},
                  {"provenance", provenance_name(a.provenance)},
                  {"pass", a.pass}});
  j["assertions"] = as;
  json labels = json::array();
  for (const auto& [k, v] : r.labels) labels.push_back(json::array({k, v}));
  j["labels"] = labels;
  j["passed"] = r.passed();
  j["wall_time_s"] = r.wall_time;
  return j;
}

std::filesystem::path sibling(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  return p.parent_path() / (p.stem().string() + suffix);
}

void write_csv(const std::filesystem::path& p, const ExperimentReport& r, bool trajectory) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os.precision(17);
  if (trajectory) {
    os << "iter,value,grad_norm\n";
    for (const auto& t : r.trajectory) os << t.iter << "," << t.value << "," << t.grad_norm << "\n";
    return;
  }
  for (std::size_t i = 0; i < r.slice_header.size(); ++i) os << (i ? "," : "") << r.slice_header[i];
  os << "\n";
  for (const auto& row : r.slice) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Heisenberg manifold connection experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_path;
  std::optional<double> tol_alg, tol_calc;
  std::optional<std::uint64_t> seed;
  int scale = 1;
  app.add_option("--config", config_path, "key/value config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "JSON report path (default: stdout)");
  app.add_option("--tol-alg", tol_alg, "algebraic tolerance");
  app.add_option("--tol-calc", tol_calc, "calculus tolerance");
  app.add_option("--grid-scale", scale, "multiply nx_per_unit and ny")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");

  std::string conn, family;
  auto* verify = app.add_subcommand("verify", "algebra, bimodule and connection invariants");
  auto* curvature = app.add_subcommand("curvature", "reconstructed curvature of a connection");
  auto* ym = app.add_subcommand("ym", "Yang-Mills value of a connection");
  auto* critical = app.add_subcommand("critical", "critical-point residuals");
  auto* classify = app.add_subcommand("classify", "classification of a connection");
  auto* optimize = app.add_subcommand("optimize", "descent in a perturbation family");
  auto* table = app.add_subcommand("paper-table", "all golden numbers");
  auto* coupling = app.add_subcommand("coupling", "coupling-constant chain");
  for (auto* s : {curvature, ym, critical, classify})
    s->add_option("connection", conn, "nabla0 | nabla1 | thm51 | thm47 | example48 | grassmannian");
  optimize->add_option("family", family, "thm47 | thm51")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentReport rep;
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (tol_alg) cfg.tol.alg = *tol_alg;
    if (tol_calc) cfg.tol.calc = *tol_calc;
    cfg.tol.validate();
    if (seed) cfg.seed = *seed;
    if (!conn.empty()) cfg.connection.kind = conn;
    cfg.grid(scale);  // surface alignment errors before any work

    if (*verify) rep = run_verify(cfg, scale);
    else if (*curvature) rep = run_curvature(cfg, scale);
    else if (*ym) rep = run_ym(cfg, scale);
    else if (*critical) rep = run_critical(cfg, scale);
    else if (*classify) rep = run_classify(cfg, scale);
    else if (*optimize) rep = run_optimize(cfg, family, scale);
    else if (*table) rep = run_paper_table(cfg, scale);
    else if (*coupling) rep = run_coupling(cfg, scale);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string text = report_json(rep).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    os << text;
    if (*optimize) write_csv(sibling(out_path, "_trajectory.csv"), rep, true);
    if (*curvature) write_csv(sibling(out_path, "_slice.csv"), rep, false);
  }
  for (const auto& a : rep.assertions)
    if (!a.pass)
      std::cerr << "FAIL " << a.name << ": " << a.measured << " " << a.relation << " " << a.bound << " violated\n";
  return rep.passed() ? 0 : 1;
}
