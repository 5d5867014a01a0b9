#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpsdg/assembly.hpp"
#include "mpsdg/flux.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/timestep.hpp"

namespace mpsdg {

/// Problems the runner knows by name.
enum class ProblemKind { accuracy, porous, sdp, ns_accuracy, ns_vortex };

ProblemKind parse_problem_kind(const std::string& name);
std::string to_string(ProblemKind kind);

/// Problem instance for a kind; `parameter` is epsilon (accuracy, sdp) or the
/// Reynolds number (ns_*), ignored for porous.
ProblemSpec make_problem(ProblemKind kind, double parameter);
/// Default parameter and final time of each kind.
double default_parameter(ProblemKind kind);
double default_final_time(ProblemKind kind);
/// Snapshot times used when a run sets none (the customary plotting times of each
/// problem, plus an early porous time before the unlimited run breaks down).
std::vector<double> default_record_times(ProblemKind kind);

enum class LimiterChoice { off, on, both };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::accuracy;
  /// Epsilon or Reynolds number; default_parameter() when absent.
  std::optional<double> parameter;

  MeshPattern pattern = MeshPattern::uniform;
  /// Mesh file for a single-level run instead of the generator.
  std::optional<std::filesystem::path> mesh_file;
  /// Cells per side on the coarsest level; doubled on every level.
  int base_n = 12;
  int levels = 4;

  FluxParams flux;
  /// Length-scale policy; when absent, edge_normal_scale for linear
  /// diffusion and gauss_point_scale otherwise.
  std::optional<ScaleMode> h_mode;
  bool interface_correction = true;
  AlphaPolicy alpha_policy = AlphaPolicy::per_edge;

  LimiterChoice limiter = LimiterChoice::on;
  /// Slope limiter; defaults to the problem's own setting.
  std::optional<bool> slope_limiter;
  std::optional<SlopeLimiterParams> slope;
  LimitSchedule schedule = LimitSchedule::per_stage;

  /// default_final_time() when absent.
  std::optional<double> t_end;
  /// Times at which min/max snapshots (and fields, if requested) are taken.
  std::vector<double> record_times;

  CflParams cfl = [] {
    CflParams p;
    p.mode = CflMode::practical;
    return p;
  }();

  std::optional<std::filesystem::path> output_dir;
  bool export_fields = false;
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;
};

/// One refinement level of one run.
struct ErrorTableRow {
  int level = 0;
  int n = 0;
  std::size_t cells = 0;
  double h = 0.0;
  /// h divided by the domain width (the tables' normalization).
  double h_relative = 0.0;
  bool limiter = false;
  /// NaN when no exact solution is known.
  double l2_error = 0.0;
  double linf_error = 0.0;
  /// NaN on the first level or for a zero error.
  double l2_order = 0.0;
  double linf_order = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  /// u_min - m(t_end) and u_max - M(t_end).
  double min_violation = 0.0;
  double max_violation = 0.0;
  /// |mass(t_end) - mass(0)| / max(|mass(0)|, area); NaN for non-periodic runs.
  double mass_drift = 0.0;
  std::size_t steps = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
  double theorem_dt = 0.0;
  double final_time = 0.0;
  /// Empty on success; otherwise the error that stopped the run.
  std::string failure;
};

/// Global extrema at a recorded time.
struct Snapshot {
  int level = 0;
  bool limiter = false;
  double t = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double bound_min = 0.0;
  double bound_max = 0.0;
};

struct ExperimentResult {
  std::vector<ErrorTableRow> rows;
  std::vector<Snapshot> snapshots;
  /// Key-value description of the run (configuration and conventions).
  std::string metadata;
};

/// Runs every level (and limiter setting) of the experiment. Errors inside a
/// level are caught and reported in the row's `failure`. Writes the tables,
/// metadata and fields when an output directory is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); NaN for i = 0 or when an
/// error is zero or missing.
std::vector<double> observed_order(const std::vector<double>& errors, const std::vector<double>& hs);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};
/// L2 error by the degree-5 rule; max error over the degree-5 points, the
/// vertices and the edge midpoints of every cell.
ErrorNorms solution_errors(const DGField& field, const TriMesh& mesh,
                           const std::function<double(Point2, double)>& exact, double t);

/// Exact minimum and maximum of the field over the domain.
Extrema global_extrema(const DGField& field);

/// Error table as CSV (fixed %.6e formatting, empty cells for undefined orders).
std::string format_table_csv(const std::vector<ErrorTableRow>& rows);
std::string format_snapshots_csv(const std::vector<Snapshot>& snaps);
/// Human-readable table in the layout of the accuracy tables.
std::string format_table_text(const std::vector<ErrorTableRow>& rows);

enum class FieldFormat { vtk_legacy, csv };

/// vtk_legacy: the mesh with vertex values averaged over the cells sharing
/// each vertex, plus cell averages. csv: "x,y,value" at the six P2 lattice
/// points (vertices, edge midpoints) of every cell.
void export_field(const DGField& field, const TriMesh& mesh, const std::filesystem::path& path,
                  FieldFormat format);
std::string format_field_csv(const DGField& field, const TriMesh& mesh);
/// Rows (x, y, value) of a CSV written by export_field.
std::vector<std::array<double, 3>> read_field_csv(const std::filesystem::path& path);

/// Domain of each problem kind.
Rect problem_domain(ProblemKind kind);
/// Mesh for level `level` (base_n * 2^level cells per side) of a run.
TriMesh level_mesh(const ExperimentConfig& cfg, int level);

}  // namespace mpsdg
