#include "mpsdg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "mpsdg/assembly.hpp"
#include "mpsdg/error.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/quadrature.hpp"
#include "mpsdg/timestep.hpp"

namespace mpsdg::verify {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

QuadraticPoly random_poly(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  QuadraticPoly p;
  for (auto& c : p.c) c = g(rng);
  return p;
}

/// Problem with A(u) = a(u) I on a Dirichlet-zero patch with bounds [0, 1].
ProblemSpec bounded_diffusion(std::function<Mat2(double)> diffusion) {
  ProblemSpec p;
  p.name = "patch";
  p.boundary = BoundaryCondition::dirichlet_zero;
  p.diffusion = std::move(diffusion);
  p.initial = [](Point2) { return 0.0; };
  p.bounds = Bounds::constant(0.0, 1.0);
  return p;
}

bool angles_ok(const std::vector<Point2>& v, const std::vector<std::array<std::size_t, 3>>& cells, double min_angle,
               double max_angle) {
  for (const auto& c : cells) {
    for (int i = 0; i < 3; ++i) {
      const Point2 p = v[c[i]];
      const Vec2 a = v[c[(i + 1) % 3]] - p;
      const Vec2 b = v[c[(i + 2) % 3]] - p;
      const double ang = std::atan2(std::abs(cross(a, b)), dot(a, b));
      if (ang < min_angle || ang > max_angle) return false;
    }
  }
  return true;
}

TheoremCheck run_theorem(std::size_t meshes, std::size_t fields, std::uint64_t seed, double tol,
                         const ProblemSpec& problem, const SchemeConfig& scheme,
                         const std::function<double(const TriMesh&)>& step) {
  Rng rng(seed);
  TheoremCheck out;
  out.min_lambda = std::numeric_limits<double>::infinity();
  Residual r;
  for (std::size_t m = 0; m < meshes; ++m) {
    const TriMesh mesh = random_hex_mesh(rng, 3, 0.18, 20.0 * kPi / 180.0, 0.5 * kPi - 1e-3);
    const SpatialOperator op(mesh, problem, scheme);
    const double dt = step(mesh);
    double min_area = std::numeric_limits<double>::infinity();
    for (const Cell& c : mesh.cells()) min_area = std::min(min_area, c.area);
    out.min_lambda = std::min(out.min_lambda, dt / min_area);
    ++out.meshes;
    for (std::size_t f = 0; f < fields; ++f) {
      const DGField u = random_bounded_field(rng, mesh.num_cells(), 0.0, 1.0);
      op.residual(u, 0.0, r);
      ++out.fields;
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double next = u.cells[k].average() + dt * average_of(r[k]);
        const double excess = std::max(-next, next - 1.0);
        ++out.averages;
        out.worst_excess = std::max(out.worst_excess, excess);
        if (excess > tol) ++out.violations;
      }
    }
  }
  out.pass = out.violations == 0 && out.meshes > 0;
  return out;
}

}  // namespace

TriMesh random_hex_mesh(Rng& rng, int rings, double jitter, double min_angle, double max_angle) {
  const Vec2 e1{1.0, 0.0};
  const Vec2 e2{0.5, 0.5 * std::sqrt(3.0)};
  auto inside = [rings](int a, int b) { return std::abs(a) <= rings && std::abs(b) <= rings && std::abs(a + b) <= rings; };

  std::map<std::pair<int, int>, std::size_t> index;
  std::vector<Point2> base;
  std::vector<bool> interior;
  for (int a = -rings; a <= rings; ++a) {
    for (int b = -rings; b <= rings; ++b) {
      if (!inside(a, b)) continue;
      index[{a, b}] = base.size();
      base.push_back(a * e1 + b * e2);
      interior.push_back(std::abs(a) < rings && std::abs(b) < rings && std::abs(a + b) < rings);
    }
  }
  std::vector<std::array<std::size_t, 3>> cells;
  // Up triangles p, p+e1, p+e2 and down triangles p+e1, p+e1+e2, p+e2; the
  // base p of a down triangle may lie outside the patch.
  for (int a = -rings - 1; a <= rings; ++a) {
    for (int b = -rings - 1; b <= rings; ++b) {
      if (inside(a, b) && inside(a + 1, b) && inside(a, b + 1)) {
        cells.push_back({index.at({a, b}), index.at({a + 1, b}), index.at({a, b + 1})});
      }
      if (inside(a + 1, b) && inside(a + 1, b + 1) && inside(a, b + 1)) {
        cells.push_back({index.at({a + 1, b}), index.at({a + 1, b + 1}), index.at({a, b + 1})});
      }
    }
  }

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Point2> v = base;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!interior[i]) continue;
      v[i] = v[i] + Vec2{uniform(rng, -jitter, jitter), uniform(rng, -jitter, jitter)};
    }
    if (angles_ok(v, cells, min_angle, max_angle)) return TriMesh::from_arrays(std::move(v), cells);
  }
  throw ConfigError("random_hex_mesh: no admissible perturbation found");
}

QuadraticPoly random_bounded_poly(Rng& rng, double lo, double hi) {
  const double pick = uniform(rng, 0.0, 1.0);
  const double avg = pick < 0.15 ? lo : pick < 0.3 ? hi : uniform(rng, lo, hi);
  const double size = std::pow(10.0, uniform(rng, -2.0, 1.0)) * (hi - lo);
  QuadraticPoly p = random_poly(rng);
  for (auto& c : p.c) c *= size;
  p.c[0] += avg - p.average();
  const double theta = mps_theta(avg, extrema_on_cell(p), lo, hi);
  for (int i = 1; i < QuadraticPoly::kSize; ++i) p.c[i] *= theta;
  p.c[0] = 0.0;
  p.c[0] = avg - p.average();
  return p;
}

DGField random_bounded_field(Rng& rng, std::size_t cells, double lo, double hi) {
  DGField u(cells);
  for (auto& p : u.cells) p = random_bounded_poly(rng, lo, hi);
  return u;
}

MappedRuleCheck check_mapped_vertex_rule(std::size_t triangles, std::uint64_t seed) {
  Rng rng(seed);
  const QuadRule rule = mapped_vertex_rule();
  MappedRuleCheck out;
  out.min_weight = *std::min_element(rule.weights.begin(), rule.weights.end());
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  out.weight_sum_error = std::abs(sum - 1.0);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(rule.points[q][i] - 1.0) < 1e-14) {
        out.vertex_weight_error = std::max(out.vertex_weight_error, std::abs(rule.weights[q] - kVertexWeight));
      }
    }
  }

  for (std::size_t t = 0; t < triangles; ++t) {
    std::array<Point2, 3> v;
    double area = 0.0;
    do {
      for (auto& p : v) p = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
      area = 0.5 * std::abs(cross(v[1] - v[0], v[2] - v[0]));
    } while (area < 0.05);
    // Averages over a triangle of products of linear functions f, g:
    // (sum f_i g_i + sum f_i sum g_i) / 12.
    auto exact = [&](auto f, auto g) {
      double fg = 0.0, sf = 0.0, sg = 0.0;
      for (const Point2& p : v) {
        fg += f(p) * g(p);
        sf += f(p);
        sg += g(p);
      }
      return (fg + sf * sg) / 12.0;
    };
    const auto one = [](Point2) { return 1.0; };
    const auto x = [](Point2 p) { return p.x; };
    const auto y = [](Point2 p) { return p.y; };
    const std::array<double, 6> reference{exact(one, one), exact(x, one), exact(y, one),
                                          exact(x, x),     exact(x, y),   exact(y, y)};
    std::array<double, 6> approx{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.points[q];
      const Point2 p = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
      const std::array<double, 6> mono{1.0, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y};
      for (int j = 0; j < 6; ++j) approx[j] += rule.weights[q] * mono[j];
    }
    for (int j = 0; j < 6; ++j) {
      const double err = std::abs(approx[j] - reference[j]) / std::max(1.0, std::abs(reference[j]));
      out.max_error = std::max(out.max_error, err);
    }
    ++out.triangles;
  }
  out.pass = out.max_error <= 1e-13 && out.vertex_weight_error <= 1e-15 && out.min_weight > 0.0 &&
             out.weight_sum_error <= 1e-14;
  return out;
}

SelectedWeightCheck check_selected_weights(std::size_t meshes, std::uint64_t seed) {
  Rng rng(seed);
  SelectedWeightCheck out;
  out.min_weight = std::numeric_limits<double>::infinity();
  constexpr double kSlack = 1e-14;
  for (std::size_t m = 0; m < meshes; ++m) {
    const TriMesh mesh = random_hex_mesh(rng, 3, 0.18, 20.0 * kPi / 180.0, 0.5 * kPi - 1e-3);
    const double ratio = std::tan(mesh.theta_min()) / std::tan(mesh.theta_max());
    const double vertex_bound = kW1 / 6.0 * ratio;
    const double half_bound = ratio / 18.0;
    const double far_bound = kW1 / 6.0;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
      const SelectedPointRule rule = selected_point_weights(mesh, k);
      const Cell& cell = mesh.cell(k);
      ++out.cells;
      for (int i = 0; i < 12; ++i) {
        const double w = rule.weights[i];
        out.min_weight = std::min(out.min_weight, w);
        if (!(w > 0.0)) ++out.nonpositive;
        const double bound = i < 6 ? vertex_bound : (i - kHalfNormal0) % 2 == 0 ? half_bound : far_bound;
        if (w < bound * (1.0 - kSlack)) ++out.bound_failures;
      }
      const QuadraticPoly p = random_poly(rng);
      double approx = 0.0;
      for (int i = 0; i < 12; ++i) approx += rule.weights[i] * evaluate(p, cell, rule.points[i]);
      for (std::size_t r = 0; r < rule.residual_points.size(); ++r) {
        approx += rule.residual_weights[r] * evaluate(p, cell, rule.residual_points[r]);
      }
      out.max_rule_error = std::max(out.max_rule_error, std::abs(approx - p.average()));
    }
    ++out.meshes;
  }
  out.pass = out.nonpositive == 0 && out.bound_failures == 0 && out.max_rule_error <= 1e-12 && out.meshes > 0;
  return out;
}

TheoremCheck check_linear_theorem(std::size_t meshes, std::size_t fields, std::uint64_t seed, double safety,
                                  double tol) {
  const ProblemSpec problem = bounded_diffusion([](double) { return Mat2::identity(); });
  SchemeConfig scheme;
  scheme.flux = {5.0, 0.125, ScaleMode::edge_normal_scale};
  scheme.edge_rule = gauss_3();
  return run_theorem(meshes, fields, seed, tol, problem, scheme, [&](const TriMesh& mesh) {
    const CflGeometry geo = CflGeometry::of(mesh, false);
    return safety * cfl_A_linear(scheme.flux.beta0, scheme.flux.beta1, geo.theta_min, geo.theta_max) * geo.min_area;
  });
}

TheoremCheck check_nonlinear_theorem(std::size_t meshes, std::size_t fields, std::uint64_t seed, double safety,
                                     double tol) {
  const ProblemSpec problem = bounded_diffusion([](double u) { return Mat2::identity(1.0 + u); });
  SchemeConfig scheme;
  scheme.flux = {5.0, 0.125, ScaleMode::gauss_point_scale};
  scheme.edge_rule = gauss_2();
  return run_theorem(meshes, fields, seed, tol, problem, scheme, [&](const TriMesh& mesh) {
    const CflGeometry geo = CflGeometry::of(mesh, true);
    const double a_max = max_diffusion_norm(problem, 0.0, 1.0);
    return safety * cfl_A_nonlinear(scheme.flux.beta0, scheme.flux.beta1, geo.theta_min, geo.w0) * geo.min_area /
           a_max;
  });
}

EdgeIdentityCheck check_edge_identity(std::size_t pairs, std::uint64_t seed, double tol) {
  Rng rng(seed);
  EdgeIdentityCheck out;
  const ProblemSpec problem = bounded_diffusion([](double) { return Mat2::identity(); });
  SchemeConfig scheme;
  scheme.flux = {uniform(rng, 1.0, 8.0), uniform(rng, 0.05, 0.3), ScaleMode::edge_normal_scale};
  scheme.edge_rule = gauss_3();
  scheme.interface_correction = false;
  const double min_angle = 25.0 * kPi / 180.0;

  while (out.pairs < pairs) {
    // Shared edge AB, apexes C and D on either side.
    const Point2 a{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const double len = uniform(rng, 0.3, 2.0), phi = uniform(rng, 0.0, 2.0 * kPi);
    const Vec2 t{std::cos(phi), std::sin(phi)};
    const Vec2 nrm{-t.y, t.x};
    const Point2 b = a + len * t;
    const Point2 c = a + uniform(rng, -0.2, 1.2) * len * t + uniform(rng, 0.3, 1.5) * len * nrm;
    const Point2 d = a + uniform(rng, -0.2, 1.2) * len * t - uniform(rng, 0.3, 1.5) * len * nrm;
    std::vector<Point2> v{a, b, c, d};
    const std::vector<std::array<std::size_t, 3>> cells{{0, 1, 2}, {1, 0, 3}};
    if (!angles_ok(v, cells, min_angle, kPi - 2.0 * min_angle)) continue;
    const TriMesh mesh = TriMesh::from_arrays(std::move(v), cells);
    const SpatialOperator op(mesh, problem, scheme);

    std::size_t face = op.faces().size();
    for (std::size_t f = 0; f < op.faces().size(); ++f) {
      if (mesh.edge(op.faces()[f]).right_cell) face = f;
    }
    const Edge& edge = mesh.edge(op.faces()[face]);
    DGField u(2);
    u.cells[0] = random_poly(rng);
    u.cells[1] = random_poly(rng);

    double quad = 0.0;
    for (std::size_t q = 0; q < scheme.edge_rule.size(); ++q) {
      quad += scheme.edge_rule.weights[q] * edge.length * op.point_flux(u, 0.0, face, q).flux;
    }

    // Ten point values: endpoints, midpoint and two normal-line points per side.
    const double h = edge_length_scale(mesh, op.faces()[face], edge.unit_normal, edge.midpoint);
    const double l = edge.length;
    const Vec2 n = edge.unit_normal;
    const Point2 mid = edge.midpoint;
    const Point2 ea = mesh.vertices()[edge.vertex_ids[0]];
    const Point2 eb = mesh.vertices()[edge.vertex_ids[1]];
    const Cell& kl = mesh.cell(edge.left_cell);
    const Cell& kr = mesh.cell(*edge.right_cell);
    const QuadraticPoly& pl = u.cells[edge.left_cell];
    const QuadraticPoly& pr = u.cells[*edge.right_cell];
    auto values = [&](const QuadraticPoly& p, const Cell& cell, double side) {
      return std::array<double, 5>{evaluate(p, cell, ea), evaluate(p, cell, eb), evaluate(p, cell, mid),
                                   evaluate(p, cell, mid + (side * 0.5 * h) * n),
                                   evaluate(p, cell, mid + (side * h) * n)};
    };
    const auto ui = values(pl, kl, -1.0);
    const auto uo = values(pr, kr, 1.0);
    const double beta0 = scheme.flux.beta0, beta1 = scheme.flux.beta1;
    const double jump = beta0 * l / (6.0 * h) * ((uo[0] + uo[1] + 4.0 * uo[2]) - (ui[0] + ui[1] + 4.0 * ui[2]));
    const double avg_n =
        l / (2.0 * h) * ((-3.0 * uo[2] - uo[4] + 4.0 * uo[3]) + (3.0 * ui[2] + ui[4] - 4.0 * ui[3]));
    const double jump_nn =
        4.0 * beta1 * l / h * ((uo[2] + uo[4] - 2.0 * uo[3]) - (ui[2] + ui[4] - 2.0 * ui[3]));
    const double closed = jump + avg_n + jump_nn;

    const double err = std::abs(closed - quad) / std::max(1.0, std::abs(closed));
    out.max_error = std::max(out.max_error, err);
    ++out.pairs;
  }
  out.pass = out.max_error <= tol;
  return out;
}

std::string summary(const MappedRuleCheck& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "triangles=%zu max_rel_error=%.3e vertex_weight_error=%.3e min_weight=%.6e weight_sum_error=%.3e",
                c.triangles, c.max_error, c.vertex_weight_error, c.min_weight, c.weight_sum_error);
  return buf;
}

std::string summary(const SelectedWeightCheck& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "meshes=%zu cells=%zu nonpositive=%zu below_bound=%zu min_weight=%.6e max_rule_error=%.3e",
                c.meshes, c.cells, c.nonpositive, c.bound_failures, c.min_weight, c.max_rule_error);
  return buf;
}

std::string summary(const TheoremCheck& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "meshes=%zu fields=%zu averages=%zu violations=%zu worst_excess=%.3e min_dt/|K|=%.4e",
                c.meshes, c.fields, c.averages, c.violations, c.worst_excess, c.min_lambda);
  return buf;
}

std::string summary(const EdgeIdentityCheck& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "pairs=%zu max_rel_error=%.3e", c.pairs, c.max_error);
  return buf;
}

}  // namespace mpsdg::verify
