#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mpsdg/assembly.hpp"
#include "mpsdg/error.hpp"
#include "mpsdg/harness.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/timestep.hpp"

using namespace mpsdg;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_accuracy_run(const std::filesystem::path& out) {
  ExperimentConfig cfg;
  cfg.problem = ProblemKind::accuracy;
  cfg.base_n = 8;
  cfg.levels = 2;
  cfg.limiter = LimiterChoice::both;
  cfg.t_end = 2e-4;
  cfg.output_dir = out;
  cfg.exec = Exec::serial;
  return cfg;
}

}  // namespace

TEST_CASE("observed order") {
  const auto o = observed_order({1.94e-4, 2.60e-5}, {0.0586, 0.0293});
  REQUIRE(o.size() == 2);
  CHECK(std::isnan(o[0]));
  CHECK(o[1] == doctest::Approx(2.90).epsilon(1e-3));
  CHECK(observed_order({0.3, 0.3}, {0.2, 0.1})[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(observed_order({0.4, 0.2, 0.1}, {0.4, 0.2, 0.1})[2] == doctest::Approx(1.0));
  CHECK(std::isnan(observed_order({0.4, 0.0}, {0.2, 0.1})[1]));
  CHECK_THROWS_AS(observed_order({1.0}, {1.0, 0.5}), Error);
}

TEST_CASE("problem names") {
  for (ProblemKind k :
       {ProblemKind::accuracy, ProblemKind::porous, ProblemKind::sdp, ProblemKind::ns_accuracy, ProblemKind::ns_vortex}) {
    CHECK(parse_problem_kind(to_string(k)) == k);
    CHECK(default_final_time(k) > 0.0);
  }
  CHECK_THROWS_AS(parse_problem_kind("burgers"), ConfigError);
  CHECK(default_final_time(ProblemKind::accuracy) == 1e-4);
  CHECK(default_final_time(ProblemKind::porous) == 2.0);
}

TEST_CASE("error norms and extrema of a field") {
  const TriMesh m = generate_structured(4, 4, Rect{0, 1, 0, 1}, MeshPattern::obtuse);
  auto quad = [](Point2 x) { return 1.0 + x.x * x.y - 0.5 * x.y * x.y; };
  const DGField u = project_field(quad, m, triangle_rule(5));
  const ErrorNorms e = solution_errors(u, m, [&](Point2 x, double) { return quad(x); }, 0.0);
  CHECK(e.l2 < 1e-13);
  CHECK(e.linf < 1e-13);
  const ErrorNorms shifted = solution_errors(u, m, [&](Point2 x, double) { return quad(x) + 0.01; }, 0.0);
  CHECK(shifted.l2 == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(shifted.linf == doctest::Approx(0.01).epsilon(1e-10));
  const Extrema ext = global_extrema(u);
  CHECK(ext.min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ext.max == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("field export") {
  const TriMesh m = generate_structured(3, 3, Rect{0, 1, 0, 1}, MeshPattern::uniform);
  const auto dir = std::filesystem::temp_directory_path() / "mpsdg_test_export";
  std::filesystem::create_directories(dir);

  DGField c(m.num_cells());
  for (auto& p : c.cells) p = QuadraticPoly::constant(0.625);
  export_field(c, m, dir / "const.csv", FieldFormat::csv);
  const auto rows = read_field_csv(dir / "const.csv");
  CHECK(rows.size() == 6 * m.num_cells());
  for (const auto& r : rows) CHECK(r[2] == 0.625);

  const DGField u = project_field([](Point2 x) { return std::sin(3 * x.x) * std::cos(2 * x.y); }, m, triangle_rule(5));
  export_field(u, m, dir / "u.csv", FieldFormat::csv);
  const auto back = read_field_csv(dir / "u.csv");
  std::size_t i = 0;
  for (std::size_t k = 0; k < m.num_cells(); ++k) {
    for (const auto& b : std::array<std::array<double, 3>, 6>{
             {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}}) {
      const Point2 x = m.cell(k).from_barycentric(b[0], b[1], b[2]);
      CHECK(back[i][0] == doctest::Approx(x.x).epsilon(1e-12));
      CHECK(back[i][1] == doctest::Approx(x.y).epsilon(1e-12));
      CHECK(back[i][2] == doctest::Approx(u.cells[k].at_bary(b[0], b[1])).epsilon(1e-12).scale(1.0));
      ++i;
    }
  }
  CHECK(slurp(dir / "u.csv") == format_field_csv(u, m));

  export_field(u, m, dir / "u.vtk", FieldFormat::vtk_legacy);
  const std::string vtk = slurp(dir / "u.vtk");
  CHECK(vtk.rfind("# vtk DataFile", 0) == 0);
  CHECK(vtk.find("CELLS " + std::to_string(m.num_cells())) != std::string::npos);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(export_field(DGField(2), m, dir / "x.csv", FieldFormat::csv), Error);
}

TEST_CASE("constant data stays constant") {
  for (ProblemKind kind : {ProblemKind::accuracy, ProblemKind::sdp}) {
    const ProblemSpec p = make_problem(kind, default_parameter(kind));
    const TriMesh m = generate_structured(6, 6, p.domain, MeshPattern::obtuse, p.boundary == BoundaryCondition::periodic);
    // Zero is the only constant compatible with zero boundary data.
    const double value = p.boundary == BoundaryCondition::periodic ? 0.3 : 0.0;
    DGField u(m.num_cells());
    for (auto& c : u.cells) c = QuadraticPoly::constant(value);
    SchemeConfig sc;
    sc.flux.h_mode = ScaleMode::edge_normal_scale;
    const SpatialOperator op(m, p, sc);
    IntegrateOptions opts;
    opts.t_end = 0.01;
    opts.dt = [](const DGField&, double) { return 1e-3; };
    opts.limiter = [&](DGField& f, double t) { mps_limit(f, p.bounds, t); };
    integrate(u, [&](const DGField& f, double t, Residual& r) { op.residual(f, t, r); }, opts);
    double worst = 0.0;
    for (const auto& c : u.cells) {
      worst = std::max(worst, std::abs(c.c[0] - value));
      for (int i = 1; i < 6; ++i) worst = std::max(worst, std::abs(c.c[i]));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("experiment runs are deterministic and respect the bounds") {
  const auto base = std::filesystem::temp_directory_path() / "mpsdg_test_runs";
  const ExperimentResult a = run_experiment(small_accuracy_run(base / "a"));
  const ExperimentResult b = run_experiment(small_accuracy_run(base / "b"));
  REQUIRE(a.rows.size() == 4);
  CHECK(slurp(base / "a" / "table.csv") == slurp(base / "b" / "table.csv"));
  CHECK(std::filesystem::exists(base / "a" / "metadata.txt"));
  for (const auto& r : a.rows) {
    CHECK(r.failure.empty());
    CHECK(r.final_time == doctest::Approx(2e-4));
    CHECK(r.l2_error > 0.0);
    if (r.limiter) {
      CHECK(r.min_violation >= -1e-12);
      CHECK(r.max_violation <= 1e-12);
    }
    if (r.level == 0) CHECK(std::isnan(r.l2_order));
    if (r.level == 1) CHECK(r.l2_order > 2.4);
    CHECK(std::abs(r.mass_drift) < 1e-12);
  }
  std::filesystem::remove_all(base);

  ExperimentConfig bad;
  bad.levels = 0;
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}
