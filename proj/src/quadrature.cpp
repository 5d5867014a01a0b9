#include "mpsdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpsdg/error.hpp"

namespace mpsdg {

namespace {

void add_orbit3(QuadRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  r.weights.insert(r.weights.end(), 3, w);
}

double triangle_area(Point2 a, Point2 b, Point2 c) { return 0.5 * std::abs(cross(b - a, c - a)); }

/// Angles of the neighbor across local edge i of `cell` at the two endpoints
/// of the shared edge.
std::array<double, 2> neighbor_edge_angles(const TriMesh& mesh, std::size_t cell, int i) {
  const Cell& k = mesh.cell(cell);
  const Edge& e = mesh.edge(k.edge_ids[i]);
  std::size_t other = 0;
  int local = -1;
  if (e.boundary == BoundaryKind::periodic) {
    const Edge& p = mesh.edge(*e.partner);
    other = p.left_cell;
    local = p.left_local;
  } else if (e.left_cell == cell && e.left_local == i) {
    other = *e.right_cell;
    local = e.right_local;
  } else {
    other = e.left_cell;
    local = e.left_local;
  }
  const Cell& n = mesh.cell(other);
  return {n.angle((local + 1) % 3), n.angle((local + 2) % 3)};
}

}  // namespace

QuadRule triangle_rule(int degree) {
  QuadRule r;
  switch (degree) {
    case 2:
      r.degree = 2;
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      r.degree = 4;
      add_orbit3(r, 0.44594849091596488632, 0.22338158967801146570);
      add_orbit3(r, 0.091576213509770743460, 0.10995174365532186764);
      break;
    case 5: {
      r.degree = 5;
      const double s15 = std::sqrt(15.0);
      r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(9.0 / 40.0);
      add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
      add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
      break;
    }
    default:
      throw Error("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  return r;
}

EdgeRule gauss_2() {
  const double x = 0.5 / std::sqrt(3.0);
  return {{-x, x}, {0.5, 0.5}, 3};
}

EdgeRule gauss_3() {
  const double x = 0.5 * std::sqrt(0.6);
  return {{-x, 0.0, x}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}, 5};
}

EdgeRule gauss_lobatto_3() { return {{-0.5, 0.0, 0.5}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 3}; }

EdgeRule gauss_radau_3() {
  const double s6 = std::sqrt(6.0);
  return {{-0.5, (1.0 - s6) / 10.0, (1.0 + s6) / 10.0},
          {1.0 / 9.0, (16.0 + s6) / 36.0, (16.0 - s6) / 36.0},
          4};
}

QuadRule mapped_vertex_rule() {
  const EdgeRule lob = gauss_lobatto_3();
  const EdgeRule rad = gauss_radau_3();
  QuadRule r;
  r.degree = 2;
  for (int map = 0; map < 3; ++map) {
    for (std::size_t a = 0; a < lob.size(); ++a) {
      for (std::size_t b = 0; b < rad.size(); ++b) {
        const double u = lob.nodes[a], v = rad.nodes[b];
        // g_i sends (u, v) to (1/2+v) v_i + (1/2+u)(1/2-v) v_{i+1} + (1/2-u)(1/2-v) v_{i+2}.
        std::array<double, 3> bary{};
        bary[map] = 0.5 + v;
        bary[(map + 1) % 3] = (0.5 + u) * (0.5 - v);
        bary[(map + 2) % 3] = (0.5 - u) * (0.5 - v);
        const double w = (2.0 / 3.0) * (0.5 - v) * lob.weights[a] * rad.weights[b];
        auto same = [&](const std::array<double, 3>& p) {
          return std::abs(p[0] - bary[0]) < 1e-14 && std::abs(p[1] - bary[1]) < 1e-14 &&
                 std::abs(p[2] - bary[2]) < 1e-14;
        };
        auto it = std::find_if(r.points.begin(), r.points.end(), same);
        if (it == r.points.end()) {
          r.points.push_back(bary);
          r.weights.push_back(w);
        } else {
          r.weights[static_cast<std::size_t>(it - r.points.begin())] += w;
        }
      }
    }
  }
  return r;
}

double SelectedPointRule::min_selected_weight() const {
  return *std::min_element(weights.begin(), weights.end());
}

SelectedPointRule selected_point_weights(const TriMesh& mesh, std::size_t cell) {
  const Cell& k = mesh.cell(cell);
  SelectedPointRule rule;
  std::array<double, 3> hs{};
  for (int i = 0; i < 3; ++i) {
    const Edge& e = mesh.edge(k.edge_ids[i]);
    hs[i] = edge_length_scale(mesh, k.edge_ids[i], e.unit_normal, e.midpoint);
    const Vec2 n = k.outward_normal(i);
    const Point2 m = k.edge_midpoint(i);
    rule.points[kVertex0 + i] = k.vertices[i];
    rule.points[kMidpoint0 + i] = m;
    rule.points[kHalfNormal0 + 2 * i] = m - (0.5 * hs[i]) * n;
    rule.points[kFullNormal0 + 2 * i] = m - hs[i] * n;

    if (e.boundary == BoundaryKind::dirichlet_zero) {
      rule.edge_case[i] = 2;
    } else {
      const auto nb = neighbor_edge_angles(mesh, cell, i);
      const double own = std::min(k.angle((i + 1) % 3), k.angle((i + 2) % 3));
      rule.edge_case[i] = own > std::min(nb[0], nb[1]) + 1e-12 ? 1 : 2;
    }
  }

  const double tol = 1e-12 * k.diameter;
  auto matches = [tol](Point2 a, Point2 b) { return distance(a, b) <= tol; };
  const QuadRule vertex_rule = mapped_vertex_rule();

  for (int i = 0; i < 3; ++i) {
    const Point2 a = k.vertices[(i + 1) % 3];
    const Point2 b = k.vertices[(i + 2) % 3];
    const Point2 c = k.vertices[i];
    const Point2 m = rule.points[kMidpoint0 + i];
    const Point2 p = rule.points[kFullNormal0 + 2 * i];
    const int own_half = kHalfNormal0 + 2 * i;
    const int own_full = kFullNormal0 + 2 * i;

    auto deposit = [&](Point2 x, double w) {
      if (matches(x, rule.points[own_half])) {
        rule.weights[own_half] += w;
        return;
      }
      if (matches(x, rule.points[own_full])) {
        rule.weights[own_full] += w;
        return;
      }
      for (int r = 0; r < 6; ++r) {
        if (matches(x, rule.points[r])) {
          rule.weights[r] += w;
          return;
        }
      }
      for (std::size_t r = 0; r < rule.residual_points.size(); ++r) {
        if (matches(x, rule.residual_points[r])) {
          rule.residual_weights[r] += w;
          return;
        }
      }
      rule.residual_points.push_back(x);
      rule.residual_weights.push_back(w);
    };

    // Triangles with the edge midpoint and the far normal point as vertices.
    const std::array<std::array<Point2, 3>, 4> pieces{{{a, m, p}, {m, b, p}, {a, p, c}, {p, b, c}}};
    for (const auto& t : pieces) {
      const double area = triangle_area(t[0], t[1], t[2]);
      if (area <= 1e-14 * k.area) continue;
      // Each piece carries the fraction area/|K| of one sixth of the average
      // through each of the two rules.
      const double f = area / (6.0 * k.area);
      for (std::size_t q = 0; q < vertex_rule.size(); ++q) {
        const auto& l = vertex_rule.points[q];
        const Point2 x{l[0] * t[0].x + l[1] * t[1].x + l[2] * t[2].x,
                       l[0] * t[0].y + l[1] * t[1].y + l[2] * t[2].y};
        deposit(x, f * vertex_rule.weights[q]);
      }
      for (int j = 0; j < 3; ++j) {
        const Point2 x = 0.5 * (t[(j + 1) % 3] + t[(j + 2) % 3]);
        deposit(x, f / 3.0);
      }
    }
  }
  return rule;
}

double min_selected_weight(const TriMesh& mesh) {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    w = std::min(w, selected_point_weights(mesh, c).min_selected_weight());
  }
  return w;
}

}  // namespace mpsdg
