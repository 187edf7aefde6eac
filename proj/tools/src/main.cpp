#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "mosharp/convergence.hpp"
#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"
#include "output.hpp"

#ifndef MOSHARP_VERSION
#define MOSHARP_VERSION "unknown"
#endif

namespace mosharp::cli {
namespace {

using nlohmann::json;

enum ExitCode : int { kPass = 0, kVerdictFail = 2, kPreconditionFail = 3, kConfigError = 4, kInternalError = 1 };

constexpr double kCommutationTolerance = 1e-10;
constexpr double kPoincareStability = 0.1;

struct Options {
  std::string config;
  std::string out = ".";
  int workers = 0;
  int dim = 1;
  std::optional<double> resolution;
};

// Collects the files of one run and the timings that go into its manifest.
class Run {
 public:
  Run(std::string command, const Options& opts) : command_(std::move(command)), opts_(opts) {}

  template <class Fn>
  auto timed(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    wall_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  void add_output(const std::string& name, std::string contents) { outputs_.emplace_back(name, std::move(contents)); }
  json& details() { return details_; }

  int finish(const RunConfig& config, bool verdict, int exit_code, const std::string& manifest_name) {
    std::filesystem::create_directories(opts_.out);
    json files = json::array();
    for (const auto& [name, contents] : outputs_) {
      write_atomic((std::filesystem::path(opts_.out) / name).string(), contents);
      files.push_back({{"file", name}, {"sha256", sha256_hex(contents)}, {"bytes", contents.size()}});
    }
    json manifest = {
        {"tool", "mosharp"},
        {"version", MOSHARP_VERSION},
        {"command", command_},
        {"config_hash", config.hash},
        {"config", config.document},
        {"workers", worker_count()},
        {"verdict", verdict},
        {"exit_code", exit_code},
        {"wall_times_s", wall_},
        {"outputs", files},
        {"details", details_},
    };
    const std::string name = manifest_name.empty() ? "manifest.json" : manifest_name;
    write_atomic((std::filesystem::path(opts_.out) / name).string(), manifest.dump(2) + "\n");
    std::cout << command_ << ": " << (verdict ? "PASS" : "FAIL") << " (config " << config.hash.substr(0, 12)
              << ", outputs in " << opts_.out << ")\n";
    return exit_code;
  }

 private:
  std::string command_;
  const Options& opts_;
  json wall_ = json::object();
  json details_ = json::object();
  std::vector<std::pair<std::string, std::string>> outputs_;
};

json point_json(const Point& x, int n) {
  json a = json::array();
  for (int i = 0; i < n; ++i) a.push_back(x[i]);
  return a;
}

json delta2_json(const Delta2Report& d, int n) {
  return {{"kappa_hat", d.kappa_hat}, {"passed", d.passed}, {"worst_x", point_json(d.worst_x, n)},
          {"worst_s", d.worst_s}, {"cap", d.cap}};
}

json ap_json(const ApReport& r) {
  return {{"constant", r.constant}, {"balls", r.balls}, {"skipped_cells", r.skipped_cells},
          {"lattice_spacing", r.lattice_spacing}};
}

json assumptions_json(const AssumptionReport& r, int n) {
  json axioms = json::array();
  for (const auto& c : r.axioms.checks)
    axioms.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst", c.worst},
                      {"worst_x", point_json(c.worst_x, n)},
                      {"worst_t", {c.worst_t[0], c.worst_t[1], c.worst_t[2]}}});
  json a1 = json::array();
  for (const auto& e : r.a1.entries)
    a1.push_back({{"c", e.c},
                  {"values", e.values},
                  {"skipped_cells", e.skipped_cells},
                  {"finite", e.finite},
                  {"converged", e.converged}});
  json out = {{"passed", r.passed()},
              {"failures", r.failures},
              {"theorem_failures", r.theorem_failures},
              {"axioms", axioms},
              {"delta2", delta2_json(r.delta2, n)},
              {"a1", a1}};
  if (r.conjugate_delta2) out["conjugate_delta2"] = delta2_json(*r.conjugate_delta2, n);
  if (r.log_holder)
    out["log_holder"] = {{"c_local", r.log_holder->c_local},
                         {"c_decay", r.log_holder->c_decay},
                         {"p_infinity", r.log_holder->p_infinity},
                         {"passed", r.log_holder->passed}};
  if (r.ap_coarse) out["ap_coarse"] = ap_json(*r.ap_coarse);
  if (r.ap_fine) out["ap_fine"] = ap_json(*r.ap_fine);
  return out;
}

const MusielakOrliczFunction& require_phi(const RunConfig& c) {
  if (!c.phi) throw ConfigError("phi: missing required section");
  return *c.phi;
}

const TestFunction& require_function(const RunConfig& c) {
  if (!c.function) throw ConfigError("function: missing required section");
  return *c.function;
}

int cmd_check(const Options& opts) {
  const RunConfig config = load_config(opts.config);
  const auto& phi = require_phi(config);
  Run run("check", opts);
  const AssumptionReport report =
      run.timed("check_assumptions", [&] { return check_assumptions(phi, config.dimension, config.sweep.half_width); });
  json doc = assumptions_json(report, config.dimension);
  doc["config_hash"] = config.hash;
  doc["phi"] = phi.describe();
  run.add_output(config.report_name.empty() ? "check_report.json" : config.report_name, doc.dump(2) + "\n");
  run.details() = {{"kappa_hat", report.delta2.kappa_hat}, {"failures", report.failures}};

  std::cout << "phi: " << phi.describe() << "\nkappa_hat: " << format_double(report.delta2.kappa_hat) << "\n";
  for (const auto& f : report.failures) std::cout << "failed: " << f << "\n";
  return run.finish(config, report.passed(), report.passed() ? kPass : kPreconditionFail, config.manifest_name);
}

int cmd_sweep(const Options& opts, bool norm) {
  const RunConfig config = load_config(opts.config);
  const auto& phi = require_phi(config);
  const auto& f = require_function(config);
  Run run(norm ? "norm-sweep" : "sweep", opts);
  SweepReport report = run.timed(norm ? "norm_sweep" : "theorem_sweep", [&] {
    return norm ? norm_sweep(phi, f, config.sweep) : theorem_sweep(phi, f, config.sweep);
  });
  report.config_hash = config.hash;
  const std::string csv = sweep_csv(report, norm ? "sharp_norm" : "sharp_modular", config.sweep.verdict_rows);
  run.add_output(config.csv_name.empty() ? (norm ? "norm_sweep.csv" : "sweep.csv") : config.csv_name, csv);
  run.details() = {{"final_rel_error", report.rows.back().rel_error},
                   {"target", report.rows.back().target},
                   {"bound", report.bound}};
  std::cout << csv;
  return run.finish(config, report.verdict, report.verdict ? kPass : kVerdictFail, config.manifest_name);
}

int cmd_c0(const Options& opts) {
  const C0Value v = opts.resolution ? c0(opts.dim, *opts.resolution) : c0(opts.dim);
  std::cout << "dimension: " << v.dimension << "\n"
            << "analytic: " << format_double(v.analytic) << "\n"
            << "cross_check: " << format_double(v.cross_check) << "\n"
            << "discrepancy: " << format_double(v.discrepancy) << "\n"
            << "resolution: " << format_double(v.resolution) << "\n";
  return kPass;
}

std::vector<Point> default_probe_points(const TestFunction& f) {
  const int n = f.dimension();
  std::vector<Point> out;
  for (double s : {-0.5, 0.0, 0.3}) {
    Point x{};
    for (int a = 0; a < n; ++a) x[a] = s * f.support_radius() / std::sqrt(static_cast<double>(n));
    out.push_back(x);
  }
  return out;
}

std::string probe_csv_name(const RunConfig& c) {
  return c.csv_name.empty() ? "probe_" + c.probe.kind + ".csv" : c.csv_name;
}

int cmd_probe(const Options& opts) {
  const RunConfig config = load_config(opts.config);
  const ProbeSpec& p = config.probe;
  if (p.kind.empty()) throw ConfigError("probe: missing required section");
  const auto& f = require_function(config);
  const int n = config.dimension;
  const double h = p.h;
  const Grid grid = Grid::with_spacing(n, config.sweep.half_width, h);
  Run run("probe " + p.kind, opts);
  bool verdict = true;

  if (p.kind == "remainder") {
    const SampledField field = build_field(grid, f);
    const auto points = p.points.empty() ? default_probe_points(f) : p.points;
    const auto radii = p.radii.empty() ? std::vector<double>{4 * h, 16 * h, 0.1} : p.radii;
    std::vector<std::string> header;
    for (int a = 0; a < n; ++a) header.push_back("x" + std::to_string(a));
    for (const char* c : {"r", "lhs", "remainder_mean", "defect", "rhs", "slack", "verdict", "config_hash"})
      header.emplace_back(c);
    CsvTable t(header);
    double worst = kInfinity;
    run.timed("remainder_probe", [&] {
      for (const auto& x : points)
        for (double r : radii) {
          const RemainderProbe q = remainder_probe(f, field, grid.nearest(x), r);
          const bool ok = q.slack >= -p.slack_tolerance;
          verdict = verdict && ok;
          worst = std::min(worst, q.slack);
          for (int a = 0; a < n; ++a) t.add(q.x[a]);
          t.add(q.r).add(q.lhs).add(q.remainder_mean).add(q.defect).add(q.rhs).add(q.slack);
          t.add(std::string(ok ? "true" : "false")).add(config.hash);
          t.end_row();
        }
      return 0;
    });
    run.details() = {{"worst_slack", worst}, {"tolerance", p.slack_tolerance}};
    run.add_output(probe_csv_name(config), t.str());
  } else if (p.kind == "poincare") {
    const auto radii = p.radii.empty() ? std::vector<double>{4 * h, 0.07, 0.1} : p.radii;
    const auto coarse = run.timed("poincare_probe", [&] { return poincare_probe(f, grid, radii); });
    const auto fine = run.timed("poincare_probe_refined", [&] {
      return poincare_probe(f, Grid::with_spacing(n, config.sweep.half_width, h / 2), radii);
    });
    CsvTable t({"r", "max_ratio", "max_ratio_refined", "points", "verdict", "config_hash"});
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double a = coarse[i].max_ratio, b = fine[i].max_ratio;
      const bool ok = coarse[i].points > 0 && a <= p.poincare_bound && b <= p.poincare_bound &&
                      std::fabs(b - a) <= kPoincareStability * a;
      verdict = verdict && ok;
      t.add(radii[i]).add(a).add(b).add(std::to_string(coarse[i].points));
      t.add(std::string(ok ? "true" : "false")).add(config.hash);
      t.end_row();
    }
    run.details() = {{"bound", p.poincare_bound}, {"stability", kPoincareStability}};
    run.add_output(probe_csv_name(config), t.str());
  } else if (p.kind == "commutation") {
    const SampledField field = build_field(grid, f);
    const auto radii = p.radii.empty() ? std::vector<double>{2 * h, 0.1, 0.3} : p.radii;
    const auto deltas = p.deltas.empty() ? std::vector<double>{4 * h, 0.2} : p.deltas;
    CsvTable t({"delta", "r", "worst_slack", "points", "verdict", "config_hash"});
    run.timed("commutation_probe", [&] {
      for (double delta : deltas)
        for (double r : radii) {
          const CommutationProbe q = commutation_probe(field, r, Mollifier(grid, delta));
          const bool ok = q.worst_slack >= -kCommutationTolerance;
          verdict = verdict && ok;
          t.add(delta).add(r).add(q.points ? q.worst_slack : 0.0).add(std::to_string(q.points));
          t.add(std::string(ok ? "true" : "false")).add(config.hash);
          t.end_row();
        }
      return 0;
    });
    run.details() = {{"tolerance", kCommutationTolerance}};
    run.add_output(probe_csv_name(config), t.str());
  } else {
    const auto& phi = require_phi(config);
    const auto deltas = p.deltas.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025, 0.0125} : p.deltas;
    const PsiFamily family =
        config.sweep.family == PsiFamily::Kind::Power ? PsiFamily::power(p.epsilon) : PsiFamily::box(p.epsilon);
    const auto table = run.timed("mollified_energy_probe", [&] {
      RQuadratureOptions ro;
      ro.ball_cells_cap = config.sweep.ball_cells_cap;
      return mollified_energy_probe(phi, f, grid, deltas, family, ro);
    });
    CsvTable t({"delta", "energy", "growth_base", "ratio", "verdict", "config_hash"});
    for (const auto& row : table.rows) {
      const double ratio = row.energy / table.growth_base;
      const bool ok = !p.frozen_constant || ratio <= *p.frozen_constant;
      verdict = verdict && ok;
      t.add(row.delta).add(row.energy).add(table.growth_base).add(ratio);
      t.add(std::string(ok ? "true" : "false")).add(config.hash);
      t.end_row();
    }
    run.details() = {{"required_constant", table.required_constant()},
                     {"sharp_modular", table.sharp_modular},
                     {"gamma_hat", table.gamma_hat},
                     {"box_half_width", table.box_half_width}};
    if (p.frozen_constant) run.details()["frozen_constant"] = *p.frozen_constant;
    run.add_output(probe_csv_name(config), t.str());
  }
  return run.finish(config, verdict, verdict ? kPass : kVerdictFail, config.manifest_name);
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
      return kConfigError;
    case ErrorKind::Domain:
    case ErrorKind::Precondition:
    case ErrorKind::Numerical:
      return kPreconditionFail;
  }
  return kInternalError;
}

}  // namespace
}  // namespace mosharp::cli

int main(int argc, char** argv) {
  using namespace mosharp::cli;
  Options opts;
  CLI::App app{"Musielak-Orlicz sharp-average experiment runner"};
  app.set_version_flag("--version", std::string(MOSHARP_VERSION));
  app.require_subcommand(1);
  app.add_option("--workers", opts.workers, "Worker threads (overrides MOSHARP_WORKERS)")->check(CLI::PositiveNumber);

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
    sub->add_option("--workers", opts.workers, "Worker threads (overrides MOSHARP_WORKERS)")->check(CLI::PositiveNumber);
  };
  auto* check = app.add_subcommand("check", "Check the assumptions on Phi and write a JSON report");
  auto* sweep = app.add_subcommand("sweep", "Sharp modular against the gradient modular along the (eps, h) schedule");
  auto* norm = app.add_subcommand("norm-sweep", "Sharp norm against the gradient norm along the (eps, h) schedule");
  auto* probe = app.add_subcommand("probe", "Run the probe described by the config (remainder, poincare, ...)");
  for (auto* sub : {check, sweep, norm, probe}) add_config(sub);
  auto* c0cmd = app.add_subcommand("c0", "Print c0 and its lattice cross-check");
  c0cmd->add_option("--dim", opts.dim, "Dimension")->required();
  c0cmd->add_option("--resolution", opts.resolution, "Lattice spacing of the cross-check");
  c0cmd->add_option("--workers", opts.workers, "Worker threads (overrides MOSHARP_WORKERS)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (opts.workers > 0) mosharp::set_worker_count(opts.workers);
    if (*check) return cmd_check(opts);
    if (*sweep) return cmd_sweep(opts, false);
    if (*norm) return cmd_sweep(opts, true);
    if (*probe) return cmd_probe(opts);
    return cmd_c0(opts);
  } catch (const mosharp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
