#include "mpsdg/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "mpsdg/error.hpp"
#include "mpsdg/poisson.hpp"
#include "mpsdg/quadrature.hpp"

namespace mpsdg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(MeshPattern p) { return p == MeshPattern::uniform ? "uniform" : "obtuse"; }

std::string to_string(ScaleMode m) {
  switch (m) {
    case ScaleMode::edge_normal_scale:
      return "edge_normal_scale";
    case ScaleMode::gauss_point_scale:
      return "gauss_point_scale";
    case ScaleMode::edge_length:
      return "edge_length";
  }
  return "?";
}

std::string to_string(CflMode m) {
  switch (m) {
    case CflMode::linear_thm:
      return "linear_thm";
    case CflMode::nonlinear_thm:
      return "nonlinear_thm";
    case CflMode::convection_combined:
      return "convection_combined";
    case CflMode::practical:
      return "practical";
  }
  return "?";
}

std::string to_string(LimiterChoice c) {
  switch (c) {
    case LimiterChoice::off:
      return "off";
    case LimiterChoice::on:
      return "on";
    case LimiterChoice::both:
      return "both";
  }
  return "?";
}

bool is_periodic(ProblemKind k) {
  return k == ProblemKind::accuracy || k == ProblemKind::ns_accuracy || k == ProblemKind::ns_vortex;
}

bool is_vorticity(ProblemKind k) { return k == ProblemKind::ns_accuracy || k == ProblemKind::ns_vortex; }

ScaleMode resolve_h_mode(const ExperimentConfig& cfg) {
  if (cfg.h_mode) return *cfg.h_mode;
  return cfg.problem == ProblemKind::accuracy ? ScaleMode::edge_normal_scale : ScaleMode::gauss_point_scale;
}

SchemeConfig scheme_of(const ExperimentConfig& cfg) {
  SchemeConfig sc;
  sc.flux = cfg.flux;
  sc.flux.h_mode = resolve_h_mode(cfg);
  sc.interface_correction = cfg.interface_correction;
  sc.alpha_policy = cfg.alpha_policy;
  return sc;
}

std::string describe(const ExperimentConfig& cfg) {
  const ProblemSpec probe = make_problem(cfg.problem, cfg.parameter.value_or(default_parameter(cfg.problem)));
  const bool slope = cfg.slope_limiter.value_or(probe.slope_defaults.has_value());
  const SlopeLimiterParams sp = cfg.slope.value_or(probe.slope_defaults.value_or(SlopeLimiterParams{}));
  std::ostringstream os;
  os << "problem = " << to_string(cfg.problem) << "\n";
  os << "parameter = " << fmt_g(cfg.parameter.value_or(default_parameter(cfg.problem))) << "\n";
  os << "mesh = " << (cfg.mesh_file ? cfg.mesh_file->string() : to_string(cfg.pattern)) << "\n";
  os << "base_n = " << cfg.base_n << "\n";
  os << "levels = " << cfg.levels << "\n";
  os << "beta0 = " << fmt_g(cfg.flux.beta0) << "\n";
  os << "beta1 = " << fmt_g(cfg.flux.beta1) << "\n";
  os << "h_mode = " << to_string(resolve_h_mode(cfg)) << "\n";
  os << "interface_correction = " << (cfg.interface_correction ? "on" : "off") << "\n";
  os << "alpha_policy = " << (cfg.alpha_policy == AlphaPolicy::per_edge ? "per_edge" : "global") << "\n";
  os << "limiter = " << to_string(cfg.limiter) << "\n";
  os << "slope_limiter = " << (slope ? "on" : "off") << "\n";
  os << "slope_gamma = " << fmt_g(sp.gamma) << "\n";
  os << "slope_M = " << fmt_g(sp.M_tvb) << "\n";
  os << "limit_schedule = " << (cfg.schedule == LimitSchedule::per_stage ? "per_stage" : "per_step") << "\n";
  os << "t_end = " << fmt_g(cfg.t_end.value_or(default_final_time(cfg.problem))) << "\n";
  os << "record_times =";
  for (double t : cfg.record_times) os << " " << fmt_g(t);
  os << "\n";
  os << "cfl_mode = " << to_string(cfg.cfl.mode) << "\n";
  os << "cfl_safety = " << fmt_g(cfg.cfl.safety) << "\n";
  os << "practical_constant = "
     << fmt_g(cfg.cfl.practical_constant.value_or(practical_constant(resolve_h_mode(cfg)))) << "\n";
  os << "user_dt = " << (cfg.cfl.user_dt ? fmt_g(*cfg.cfl.user_dt) : std::string("none")) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "exec = " << (cfg.exec == Exec::serial ? "serial" : "parallel") << "\n";
  os << "time_integrator = ssp_rk3\n";
  os << "projection_rule = triangle degree 5\n";
  os << "l2_error_rule = triangle degree 5\n";
  os << "linf_error_sampling = degree-5 points, vertices and edge midpoints of every cell\n";
  os << "min_max = exact extrema of each cell polynomial\n";
  os << "mass_drift = |sum area*avg(t_end) - sum area*avg(0)| / sum area*|avg(0)| (periodic runs)\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

/// One level with one limiter setting.
void run_level(const ExperimentConfig& cfg, int level, bool limiter_on, const TriMesh& mesh,
               ExperimentResult& result) {
  const double parameter = cfg.parameter.value_or(default_parameter(cfg.problem));
  const double t_end = cfg.t_end.value_or(default_final_time(cfg.problem));
  ProblemSpec prob = make_problem(cfg.problem, parameter);
  const SchemeConfig sc = scheme_of(cfg);

  ErrorTableRow row;
  row.level = level;
  row.n = cfg.mesh_file ? 0 : cfg.base_n << level;
  row.cells = mesh.num_cells();
  row.h = mesh.h();
  row.h_relative = mesh.h() / prob.domain.width();
  row.limiter = limiter_on;
  row.l2_error = row.linf_error = kNaN;
  row.mass_drift = kNaN;

  const SpatialOperator op(mesh, prob, sc);
  DGField u = project_field(prob.initial, mesh, triangle_rule(5));

  const bool slope = cfg.slope_limiter.value_or(prob.slope_defaults.has_value());
  const SlopeLimiterParams sp = cfg.slope.value_or(prob.slope_defaults.value_or(SlopeLimiterParams{}));
  StageHook hook;
  if (slope || limiter_on) {
    hook = [&](DGField& f, double t) {
      if (slope) slope_limit(f, mesh, sp);
      if (limiter_on) mps_limit(f, prob.bounds, t);
    };
  }

  const bool periodic = is_periodic(cfg.problem);
  double mass0 = 0.0, mass_scale = 0.0;

  std::unique_ptr<StreamFunctionSolver> solver;
  RhsFn rhs;
  if (is_vorticity(cfg.problem)) {
    solver = std::make_unique<StreamFunctionSolver>(mesh);
    rhs = vorticity_rhs(op, *solver, cfg.exec);
  } else {
    rhs = [&op, exec = cfg.exec](const DGField& f, double t, Residual& r) { op.residual(f, t, r, exec); };
  }

  const bool need_w0 = cfg.cfl.mode == CflMode::nonlinear_thm || cfg.cfl.mode == CflMode::convection_combined ||
                       (cfg.cfl.mode == CflMode::practical && cfg.problem != ProblemKind::accuracy &&
                        mesh.theta_max() < 0.5 * std::numbers::pi - 1e-12);
  const CflGeometry geo = CflGeometry::of(mesh, need_w0);

  std::optional<DtReport> cached;
  bool warned = false;
  IntegrateOptions opts;
  opts.t_end = t_end;
  opts.schedule = cfg.schedule;
  opts.limiter = hook;
  opts.record_times = cfg.record_times;
  // Counted here too so that failed runs report how far they got.
  std::size_t attempted = 0;
  opts.dt = [&](const DGField&, double t) {
    ++attempted;
    if (!cached || prob.has_convection()) cached = compute_dt(geo, cfg.cfl, sc.flux, prob, t, mesh);
    if (cached->exceeds_theorem && cfg.cfl.user_dt && !warned) {
      std::clog << "warning: dt = " << cached->dt << " exceeds the theorem bound " << cached->theorem_dt << "\n";
      warned = true;
    }
    row.theorem_dt = cached->theorem_dt;
    return cached->dt;
  };
  opts.record = [&](const DGField& f, double t) {
    const Extrema e = global_extrema(f);
    result.snapshots.push_back({level, limiter_on, t, e.min, e.max, prob.bounds.lower(t), prob.bounds.upper(t)});
    if (cfg.export_fields && cfg.output_dir) {
      const std::string stem = to_string(cfg.problem) + "_L" + std::to_string(level) +
                               (limiter_on ? "_lim" : "_nolim") + "_t" + time_tag(t);
      export_field(f, mesh, *cfg.output_dir / (stem + ".vtk"), FieldFormat::vtk_legacy);
      export_field(f, mesh, *cfg.output_dir / (stem + ".csv"), FieldFormat::csv);
    }
  };

  try {
    if (hook) hook(u, 0.0);
    if (solver) solver->update_velocity(u, *prob.velocity);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double m = mesh.cell(k).area * u.cells[k].average();
      mass0 += m;
      mass_scale += std::abs(m);
    }
    const IntegrateReport rep = integrate(u, rhs, opts);
    row.steps = rep.steps;
    row.dt_min = rep.dt_min;
    row.dt_max = rep.dt_max;
  } catch (const Error& e) {
    row.failure = e.what();
    row.steps = attempted > 0 ? attempted - 1 : 0;
  }

  row.final_time = u.time;
  if (row.failure.empty()) {
    const Extrema e = global_extrema(u);
    row.u_min = e.min;
    row.u_max = e.max;
    row.min_violation = e.min - prob.bounds.lower(u.time);
    row.max_violation = e.max - prob.bounds.upper(u.time);
    if (prob.exact) {
      const ErrorNorms n = solution_errors(u, mesh, prob.exact, u.time);
      row.l2_error = n.l2;
      row.linf_error = n.linf;
    }
    if (periodic && mass_scale > 0.0) row.mass_drift = std::abs(total_mass(u, mesh) - mass0) / mass_scale;
  } else {
    row.u_min = row.u_max = row.min_violation = row.max_violation = kNaN;
  }
  result.rows.push_back(row);
}

}  // namespace

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "accuracy") return ProblemKind::accuracy;
  if (name == "porous") return ProblemKind::porous;
  if (name == "sdp") return ProblemKind::sdp;
  if (name == "ns-accuracy") return ProblemKind::ns_accuracy;
  if (name == "ns-vortex") return ProblemKind::ns_vortex;
  throw ConfigError("unknown problem '" + name + "'");
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::accuracy:
      return "accuracy";
    case ProblemKind::porous:
      return "porous";
    case ProblemKind::sdp:
      return "sdp";
    case ProblemKind::ns_accuracy:
      return "ns-accuracy";
    case ProblemKind::ns_vortex:
      return "ns-vortex";
  }
  return "?";
}

ProblemSpec make_problem(ProblemKind kind, double parameter) {
  switch (kind) {
    case ProblemKind::accuracy:
      return linear_diffusion(parameter);
    case ProblemKind::porous:
      return porous_medium();
    case ProblemKind::sdp:
      return strongly_degenerate(parameter);
    case ProblemKind::ns_accuracy:
      return ns_vorticity(parameter, VorticityVariant::accuracy);
    case ProblemKind::ns_vortex:
      return ns_vorticity(parameter, VorticityVariant::vortex_patch);
  }
  throw ConfigError("unknown problem kind");
}

double default_parameter(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::accuracy:
      return 1.0;
    case ProblemKind::sdp:
      return 0.1;
    case ProblemKind::ns_accuracy:
    case ProblemKind::ns_vortex:
      return 100.0;
    case ProblemKind::porous:
      return 0.0;
  }
  return 0.0;
}

double default_final_time(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::accuracy:
      return 1e-4;
    case ProblemKind::porous:
      return 2.0;
    case ProblemKind::sdp:
      return 0.5;
    case ProblemKind::ns_accuracy:
    case ProblemKind::ns_vortex:
      return 0.1;
  }
  return 0.0;
}

std::vector<double> default_record_times(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::accuracy:
      return {};
    case ProblemKind::porous:
      return {0.001, 0.005, 0.1, 0.5, 2.0};
    case ProblemKind::sdp:
      return {0.1, 0.5};
    case ProblemKind::ns_accuracy:
    case ProblemKind::ns_vortex:
      return {0.05, 0.1};
  }
  return {};
}

Rect problem_domain(ProblemKind kind) { return make_problem(kind, default_parameter(kind) + 1.0).domain; }

TriMesh level_mesh(const ExperimentConfig& cfg, int level) {
  if (cfg.mesh_file) {
    if (level != 0) throw ConfigError("a mesh file provides a single level");
    return load_mesh(*cfg.mesh_file);
  }
  if (cfg.base_n < 2) throw ConfigError("base_n must be at least 2");
  const int n = cfg.base_n << level;
  return generate_structured(n, n, problem_domain(cfg.problem), cfg.pattern, is_periodic(cfg.problem));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.levels < 1) throw ConfigError("levels must be at least 1");
  if (cfg.mesh_file && cfg.levels != 1) throw ConfigError("a mesh file run has exactly one level");
  if (!(cfg.t_end.value_or(default_final_time(cfg.problem)) > 0.0)) throw ConfigError("final time must be positive");
  if (cfg.output_dir) std::filesystem::create_directories(*cfg.output_dir);

  ExperimentResult result;
  result.metadata = describe(cfg);
  std::vector<bool> settings;
  if (cfg.limiter != LimiterChoice::on) settings.push_back(false);
  if (cfg.limiter != LimiterChoice::off) settings.push_back(true);

  for (int level = 0; level < cfg.levels; ++level) {
    const TriMesh mesh = level_mesh(cfg, level);
    for (bool lim : settings) {
      const auto start = std::chrono::steady_clock::now();
      run_level(cfg, level, lim, mesh, result);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const ErrorTableRow& r = result.rows.back();
      std::clog << to_string(cfg.problem) << " level " << level << " (" << mesh.num_cells() << " cells, limiter "
                << (lim ? "on" : "off") << "): " << r.steps << " steps in " << secs << " s"
                << (r.failure.empty() ? "" : " FAILED: " + r.failure) << "\n";
    }
  }

  for (bool lim : settings) {
    std::vector<std::size_t> idx;
    std::vector<double> hs, l2, linf;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      if (result.rows[i].limiter != lim) continue;
      idx.push_back(i);
      hs.push_back(result.rows[i].h);
      l2.push_back(result.rows[i].l2_error);
      linf.push_back(result.rows[i].linf_error);
    }
    const auto o2 = observed_order(l2, hs);
    const auto oi = observed_order(linf, hs);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      result.rows[idx[j]].l2_order = o2[j];
      result.rows[idx[j]].linf_order = oi[j];
    }
  }

  if (cfg.output_dir) {
    write_text(*cfg.output_dir / "table.csv", format_table_csv(result.rows));
    write_text(*cfg.output_dir / "table.txt", format_table_text(result.rows));
    write_text(*cfg.output_dir / "snapshots.csv", format_snapshots_csv(result.snapshots));
    write_text(*cfg.output_dir / "metadata.txt", result.metadata);
  }
  return result;
}

std::vector<double> observed_order(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw Error("observed_order: size mismatch");
  std::vector<double> out(errors.size(), kNaN);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double e0 = errors[i - 1], e1 = errors[i];
    if (!(e0 > 0.0) || !(e1 > 0.0) || !(hs[i - 1] > 0.0) || !(hs[i] > 0.0) || hs[i - 1] == hs[i]) continue;
    out[i] = std::log(e0 / e1) / std::log(hs[i - 1] / hs[i]);
  }
  return out;
}

ErrorNorms solution_errors(const DGField& field, const TriMesh& mesh,
                           const std::function<double(Point2, double)>& exact, double t) {
  static const QuadRule rule = triangle_rule(5);
  static const std::array<std::array<double, 3>, 6> lattice{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}};
  ErrorNorms n;
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    const QuadraticPoly& p = field.cells[k];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& b = rule.points[q];
      const double d = p.at_bary(b[0], b[1]) - exact(c.from_barycentric(b[0], b[1], b[2]), t);
      sum += rule.weights[q] * c.area * d * d;
      n.linf = std::max(n.linf, std::abs(d));
    }
    for (const auto& b : lattice) {
      const double d = p.at_bary(b[0], b[1]) - exact(c.from_barycentric(b[0], b[1], b[2]), t);
      n.linf = std::max(n.linf, std::abs(d));
    }
  }
  n.l2 = std::sqrt(sum);
  return n;
}

Extrema global_extrema(const DGField& field) {
  Extrema g{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const QuadraticPoly& p : field.cells) {
    const Extrema e = extrema_on_cell(p);
    g.min = std::min(g.min, e.min);
    g.max = std::max(g.max, e.max);
  }
  return g;
}

std::string format_table_csv(const std::vector<ErrorTableRow>& rows) {
  std::ostringstream os;
  os << "level,n,cells,h,h_relative,limiter,L2_error,L2_order,Linf_error,Linf_order,"
        "min_minus_bound,max_minus_bound,u_min,u_max,mass_drift,steps,dt_min,dt_max,theorem_dt,final_time,status\n";
  for (const auto& r : rows) {
    os << r.level << "," << r.n << "," << r.cells << "," << fmt(r.h) << "," << fmt(r.h_relative) << ","
       << (r.limiter ? "on" : "off") << "," << fmt(r.l2_error) << "," << fmt(r.l2_order) << ","
       << fmt(r.linf_error) << "," << fmt(r.linf_order) << "," << fmt(r.min_violation) << ","
       << fmt(r.max_violation) << "," << fmt(r.u_min) << "," << fmt(r.u_max) << "," << fmt(r.mass_drift) << ","
       << r.steps << "," << fmt(r.dt_min) << "," << fmt(r.dt_max) << "," << fmt(r.theorem_dt) << ","
       << fmt(r.final_time) << ",";
    if (r.failure.empty()) {
      os << "ok";
    } else {
      std::string msg = r.failure;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      os << "failed: " << msg;
    }
    os << "\n";
  }
  return os.str();
}

std::string format_snapshots_csv(const std::vector<Snapshot>& snaps) {
  std::ostringstream os;
  os << "level,limiter,t,u_min,u_max,bound_min,bound_max,min_minus_bound,max_minus_bound\n";
  for (const auto& s : snaps) {
    os << s.level << "," << (s.limiter ? "on" : "off") << "," << fmt(s.t) << "," << fmt(s.u_min) << ","
       << fmt(s.u_max) << "," << fmt(s.bound_min) << "," << fmt(s.bound_max) << "," << fmt(s.u_min - s.bound_min)
       << "," << fmt(s.u_max - s.bound_max) << "\n";
  }
  return os.str();
}

std::string format_table_text(const std::vector<ErrorTableRow>& rows) {
  std::ostringstream os;
  char buf[256];
  for (bool lim : {false, true}) {
    bool header = false;
    for (const auto& r : rows) {
      if (r.limiter != lim) continue;
      if (!header) {
        os << (lim ? "with limiter\n" : "without limiter\n");
        std::snprintf(buf, sizeof buf, "%-10s %-11s %-6s %-11s %-6s %-12s %-12s\n", "h", "L2 error", "Order",
                      "Linf error", "Order", "umin-m", "umax-M");
        os << buf;
        header = true;
      }
      auto o = [](double v) {
        char b[16];
        if (std::isnan(v)) return std::string();
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
      };
      std::snprintf(buf, sizeof buf, "%-10.4g %-11s %-6s %-11s %-6s %-12s %-12s%s\n", r.h_relative,
                    fmt(r.l2_error).c_str(), o(r.l2_order).c_str(), fmt(r.linf_error).c_str(), o(r.linf_order).c_str(),
                    fmt(r.min_violation).c_str(), fmt(r.max_violation).c_str(), r.failure.empty() ? "" : "  (failed)");
      os << buf;
    }
  }
  return os.str();
}

std::string format_field_csv(const DGField& field, const TriMesh& mesh) {
  static const std::array<std::array<double, 3>, 6> lattice{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}};
  std::string out = "x,y,value\n";
  char buf[96];
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    for (const auto& b : lattice) {
      const Point2 x = c.from_barycentric(b[0], b[1], b[2]);
      std::snprintf(buf, sizeof buf, "%.15e,%.15e,%.15e\n", x.x, x.y, field.cells[k].at_bary(b[0], b[1]));
      out += buf;
    }
  }
  return out;
}

void export_field(const DGField& field, const TriMesh& mesh, const std::filesystem::path& path,
                  FieldFormat format) {
  if (field.size() != mesh.num_cells()) throw Error("export_field: field does not match mesh");
  if (format == FieldFormat::csv) {
    write_text(path, format_field_csv(field, mesh));
    return;
  }
  const std::size_t nv = mesh.num_vertices(), nc = mesh.num_cells();
  std::vector<double> sum(nv, 0.0);
  std::vector<int> count(nv, 0);
  for (std::size_t k = 0; k < nc; ++k) {
    const Cell& c = mesh.cell(k);
    const QuadraticPoly& p = field.cells[k];
    const std::array<double, 3> v{p.at_bary(1, 0), p.at_bary(0, 1), p.at_bary(0, 0)};
    for (int i = 0; i < 3; ++i) {
      sum[c.vertex_ids[i]] += v[i];
      ++count[c.vertex_ids[i]];
    }
  }
  std::ostringstream os;
  char buf[128];
  os << "# vtk DataFile Version 3.0\n";
  std::snprintf(buf, sizeof buf, "mpsdg field t=%.9e\n", field.time);
  os << buf << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (const Point2& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.12e %.12e 0\n", p.x, p.y);
    os << buf;
  }
  os << "CELLS " << nc << " " << 4 * nc << "\n";
  for (const Cell& c : mesh.cells()) os << "3 " << c.vertex_ids[0] << " " << c.vertex_ids[1] << " " << c.vertex_ids[2] << "\n";
  os << "CELL_TYPES " << nc << "\n";
  for (std::size_t k = 0; k < nc; ++k) os << "5\n";
  os << "POINT_DATA " << nv << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < nv; ++i) {
    std::snprintf(buf, sizeof buf, "%.12e\n", count[i] ? sum[i] / count[i] : 0.0);
    os << buf;
  }
  os << "CELL_DATA " << nc << "\nSCALARS average double 1\nLOOKUP_TABLE default\n";
  for (const QuadraticPoly& p : field.cells) {
    std::snprintf(buf, sizeof buf, "%.12e\n", p.average());
    os << buf;
  }
  write_text(path, os.str());
}

std::vector<std::array<double, 3>> read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "x,y,value") throw Error("unexpected header in " + path.string());
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]) != 3) {
      throw Error("bad field line in " + path.string() + ": " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mpsdg
