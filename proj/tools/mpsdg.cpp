// Command-line front end: one subcommand per experiment, plus the quadrature
// verification suite and a mesh generator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpsdg/error.hpp"
#include "mpsdg/harness.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/verify.hpp"

using namespace mpsdg;

namespace {

const std::map<std::string, MeshPattern> kPatterns{{"uniform", MeshPattern::uniform},
                                                   {"obtuse", MeshPattern::obtuse}};
const std::map<std::string, ScaleMode> kScaleModes{{"edge-normal", ScaleMode::edge_normal_scale},
                                                   {"gauss-point", ScaleMode::gauss_point_scale},
                                                   {"edge-length", ScaleMode::edge_length}};
const std::map<std::string, AlphaPolicy> kAlpha{{"per-edge", AlphaPolicy::per_edge},
                                                {"global", AlphaPolicy::global}};
const std::map<std::string, LimiterChoice> kLimiter{
    {"on", LimiterChoice::on}, {"off", LimiterChoice::off}, {"both", LimiterChoice::both}};
const std::map<std::string, LimitSchedule> kSchedule{{"per-stage", LimitSchedule::per_stage},
                                                     {"per-step", LimitSchedule::per_step}};
const std::map<std::string, CflMode> kCfl{{"linear", CflMode::linear_thm},
                                          {"nonlinear", CflMode::nonlinear_thm},
                                          {"combined", CflMode::convection_combined},
                                          {"practical", CflMode::practical}};
const std::map<std::string, Exec> kExec{{"serial", Exec::serial}, {"parallel", Exec::parallel}};
const std::map<std::string, bool> kOnOff{{"on", true}, {"off", false}};

/// Raw option values of an experiment subcommand; optional settings stay
/// empty until given so that problem defaults apply.
struct ExperimentOptions {
  ExperimentConfig cfg;
  double parameter = 0.0;
  std::string mesh_file;
  std::string h_mode;
  bool no_interface_correction = false;
  std::string slope_limiter;
  double slope_gamma = 1.5;
  double slope_m = 5.0;
  double t_end = 0.0;
  std::vector<double> record;
  double dt = 0.0;
  double cfl_constant = 0.0;
  std::string out;
};

CLI::App* add_experiment(CLI::App& app, ProblemKind kind, const std::string& help, ExperimentOptions& o) {
  CLI::App* sub = app.add_subcommand(to_string(kind), help);
  o.cfg.problem = kind;
  o.cfg.levels = kind == ProblemKind::accuracy ? 4 : kind == ProblemKind::ns_accuracy ? 3 : 1;
  o.cfg.base_n = kind == ProblemKind::porous ? 24 : 12;
  const std::string param_help = kind == ProblemKind::porous ? "unused"
                                 : kind == ProblemKind::ns_accuracy || kind == ProblemKind::ns_vortex
                                     ? "Reynolds number"
                                     : "diffusion coefficient epsilon";
  sub->add_option("--param", o.parameter, param_help);
  sub->add_option("--pattern", o.cfg.pattern, "mesh family")
      ->transform(CLI::CheckedTransformer(kPatterns, CLI::ignore_case))
      ->capture_default_str();
  sub->add_option("--mesh", o.mesh_file, "mesh file (single level) instead of the generator")
      ->check(CLI::ExistingFile);
  sub->add_option("-n,--n", o.cfg.base_n, "cells per side on the coarsest level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--levels", o.cfg.levels, "refinement levels")->check(CLI::Range(1, 8))->capture_default_str();
  sub->add_option("--beta0", o.cfg.flux.beta0, "flux jump coefficient")->capture_default_str();
  sub->add_option("--beta1", o.cfg.flux.beta1, "flux second-derivative coefficient")->capture_default_str();
  sub->add_option("--h-mode", o.h_mode, "length scale: edge-normal, gauss-point or edge-length")
      ->check(CLI::IsMember({"edge-normal", "gauss-point", "edge-length"}));
  sub->add_flag("--no-interface-correction", o.no_interface_correction, "drop the interface correction term");
  sub->add_option("--alpha", o.cfg.alpha_policy, "Lax-Friedrichs speed")
      ->transform(CLI::CheckedTransformer(kAlpha, CLI::ignore_case));
  sub->add_option("--limiter", o.cfg.limiter, "bound limiter: on, off or both")
      ->transform(CLI::CheckedTransformer(kLimiter, CLI::ignore_case));
  sub->add_option("--slope-limiter", o.slope_limiter, "slope limiter on/off (default: per problem)")
      ->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--slope-gamma", o.slope_gamma, "slope limiter gamma")->capture_default_str();
  sub->add_option("--slope-m", o.slope_m, "slope limiter TVB constant")->capture_default_str();
  sub->add_option("--schedule", o.cfg.schedule, "limit after every stage or every step")
      ->transform(CLI::CheckedTransformer(kSchedule, CLI::ignore_case));
  sub->add_option("--t-end", o.t_end, "final time (default: per problem)");
  sub->add_option("--record", o.record, "snapshot times (default: per problem)")->delimiter(',');
  sub->add_option("--cfl", o.cfg.cfl.mode, "step-size rule: linear, nonlinear, combined or practical")
      ->transform(CLI::CheckedTransformer(kCfl, CLI::ignore_case));
  sub->add_option("--safety", o.cfg.cfl.safety, "safety factor of the theorem rules")->capture_default_str();
  sub->add_option("--dt", o.dt, "fixed step size (overrides --cfl)")->check(CLI::PositiveNumber);
  sub->add_option("--cfl-constant", o.cfl_constant, "constant of the practical rule")->check(CLI::PositiveNumber);
  sub->add_option("-o,--out", o.out, "output directory");
  sub->add_flag("--export-fields", o.cfg.export_fields, "write VTK and CSV fields at the snapshot times");
  sub->add_option("--seed", o.cfg.seed, "seed recorded with the run")->capture_default_str();
  sub->add_option("--exec", o.cfg.exec, "residual path")->transform(CLI::CheckedTransformer(kExec, CLI::ignore_case));
  return sub;
}

ExperimentConfig finish(const CLI::App& sub, ExperimentOptions& o) {
  ExperimentConfig cfg = o.cfg;
  if (sub.count("--param")) cfg.parameter = o.parameter;
  if (!o.mesh_file.empty()) {
    cfg.mesh_file = o.mesh_file;
    cfg.levels = 1;
  }
  if (!o.h_mode.empty()) cfg.h_mode = kScaleModes.at(o.h_mode);
  cfg.interface_correction = !o.no_interface_correction;
  if (!o.slope_limiter.empty()) cfg.slope_limiter = kOnOff.at(o.slope_limiter);
  if (sub.count("--slope-gamma") || sub.count("--slope-m")) cfg.slope = SlopeLimiterParams{o.slope_gamma, o.slope_m};
  if (sub.count("--t-end")) cfg.t_end = o.t_end;
  cfg.record_times = sub.count("--record") ? o.record : default_record_times(cfg.problem);
  if (sub.count("--dt")) cfg.cfl.user_dt = o.dt;
  if (sub.count("--cfl-constant")) cfg.cfl.practical_constant = o.cfl_constant;
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

int run(const CLI::App& app, const CLI::App& sub, ExperimentOptions& o) {
  const ExperimentConfig cfg = finish(sub, o);
  if (cfg.output_dir) {
    std::filesystem::create_directories(*cfg.output_dir);
    std::ofstream(*cfg.output_dir / "config.ini") << app.config_to_str(true, false);
  }
  const ExperimentResult res = run_experiment(cfg);
  std::cout << format_table_text(res.rows);
  if (!res.snapshots.empty()) std::cout << "\n" << format_snapshots_csv(res.snapshots);
  for (const auto& row : res.rows) {
    if (!row.failure.empty()) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-preserving DG solver for convection-diffusion on triangular meshes"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with option values (section per subcommand)");

  std::map<ProblemKind, ExperimentOptions> opts;
  std::map<ProblemKind, CLI::App*> subs;
  const std::vector<std::pair<ProblemKind, std::string>> kinds{
      {ProblemKind::accuracy, "heat equation convergence study on the periodic unit square"},
      {ProblemKind::porous, "porous medium equation with two initial discs"},
      {ProblemKind::sdp, "strongly degenerate convection-diffusion problem"},
      {ProblemKind::ns_accuracy, "vorticity-stream function Navier-Stokes convergence study"},
      {ProblemKind::ns_vortex, "vorticity-stream function Navier-Stokes vortex patch"}};
  for (const auto& [kind, help] : kinds) subs[kind] = add_experiment(app, kind, help, opts[kind]);

  CLI::App* quad = app.add_subcommand("quadcheck", "quadrature and bound-preservation verification suite");
  std::size_t triangles = 1000, meshes = 100, theorem_meshes = 50, fields = 200, pairs = 500;
  std::uint64_t seed = 1;
  bool skip_theorems = false;
  quad->add_option("--triangles", triangles, "random triangles for the mapped vertex rule")->capture_default_str();
  quad->add_option("--meshes", meshes, "random meshes for the selected-point weights")->capture_default_str();
  quad->add_option("--theorem-meshes", theorem_meshes, "random meshes per theorem check")->capture_default_str();
  quad->add_option("--fields", fields, "random fields per mesh")->capture_default_str();
  quad->add_option("--pairs", pairs, "random cell pairs for the edge identity")->capture_default_str();
  quad->add_option("--seed", seed, "random seed")->capture_default_str();
  quad->add_flag("--skip-theorems", skip_theorems, "only the quadrature checks");

  CLI::App* meshgen = app.add_subcommand("meshgen", "write a structured mesh");
  int mesh_n = 12;
  MeshPattern mesh_pattern = MeshPattern::uniform;
  std::vector<double> rect{0.0, 1.0, 0.0, 1.0};
  bool periodic = false;
  std::string mesh_out;
  meshgen->add_option("-n,--n", mesh_n, "cells per side")->check(CLI::PositiveNumber)->capture_default_str();
  meshgen->add_option("--pattern", mesh_pattern, "mesh family")
      ->transform(CLI::CheckedTransformer(kPatterns, CLI::ignore_case));
  meshgen->add_option("--domain", rect, "x0 x1 y0 y1")->expected(4)->capture_default_str();
  meshgen->add_flag("--periodic", periodic, "pair opposite sides");
  meshgen->add_option("-o,--out", mesh_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [kind, sub] : subs) {
      if (sub->parsed()) return run(app, *sub, opts[kind]);
    }
    if (quad->parsed()) {
      bool ok = true;
      auto report = [&ok](const char* name, bool pass, const std::string& detail) {
        std::printf("%-24s %s  %s\n", name, pass ? "PASS" : "FAIL", detail.c_str());
        ok = ok && pass;
      };
      const auto mapped = verify::check_mapped_vertex_rule(triangles, seed);
      report("mapped vertex rule", mapped.pass, verify::summary(mapped));
      const auto selected = verify::check_selected_weights(meshes, seed + 1);
      report("selected-point weights", selected.pass, verify::summary(selected));
      const auto identity = verify::check_edge_identity(pairs, seed + 2);
      report("edge identity", identity.pass, verify::summary(identity));
      if (!skip_theorems) {
        const auto lin = verify::check_linear_theorem(theorem_meshes, fields, seed + 3);
        report("linear theorem", lin.pass, verify::summary(lin));
        const auto nonlin = verify::check_nonlinear_theorem(theorem_meshes, fields, seed + 4);
        report("nonlinear theorem", nonlin.pass, verify::summary(nonlin));
      }
      return ok ? 0 : 1;
    }
    if (meshgen->parsed()) {
      const Rect domain{rect[0], rect[1], rect[2], rect[3]};
      if (!(domain.width() > 0.0 && domain.height() > 0.0)) throw ConfigError("empty domain");
      const TriMesh mesh = generate_structured(mesh_n, mesh_n, domain, mesh_pattern, periodic);
      write_mesh(mesh, mesh_out);
      std::printf("%zu vertices, %zu cells, h = %.6g, angles [%.4f, %.4f] pi\n", mesh.num_vertices(),
                  mesh.num_cells(), mesh.h(), mesh.theta_min() / 3.141592653589793,
                  mesh.theta_max() / 3.141592653589793);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
