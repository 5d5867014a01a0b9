#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "mpsdg/error.hpp"
#include "mpsdg/mesh.hpp"
#include "oracles.hpp"

using namespace mpsdg;

namespace {

constexpr double kPi = std::numbers::pi;

double signed_area(const Cell& c) {
  return 0.5 * cross(c.vertices[1] - c.vertices[0], c.vertices[2] - c.vertices[0]);
}

void check_same_adjacency(const TriMesh& a, const TriMesh& b) {
  REQUIRE(a.num_cells() == b.num_cells());
  REQUIRE(a.num_edges() == b.num_edges());
  REQUIRE(a.num_vertices() == b.num_vertices());
  for (std::size_t k = 0; k < a.num_cells(); ++k) {
    CHECK(a.cell(k).vertex_ids == b.cell(k).vertex_ids);
    CHECK(a.cell(k).edge_ids == b.cell(k).edge_ids);
    CHECK(a.cell(k).neighbor_ids == b.cell(k).neighbor_ids);
  }
  for (std::size_t e = 0; e < a.num_edges(); ++e) {
    CHECK(a.edge(e).vertex_ids == b.edge(e).vertex_ids);
    CHECK(a.edge(e).boundary == b.edge(e).boundary);
    CHECK(a.edge(e).partner == b.edge(e).partner);
  }
}

}  // namespace

TEST_CASE("structured generator: counts, angles and area") {
  const TriMesh m = generate_structured(2, 2, Rect{0, 1, 0, 1}, MeshPattern::uniform);
  CHECK(m.num_cells() == 8);
  CHECK(m.num_edges() == 16);
  CHECK(m.theta_min() == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(m.euler_characteristic() == 1);

  for (int n : {3, 7, 12}) {
    const TriMesh u = generate_structured(n, n, Rect{0, 1, 0, 1}, MeshPattern::uniform);
    CHECK(std::abs(u.total_area() - 1.0) < 1e-14);
    CHECK(u.h() == doctest::Approx(std::sqrt(2.0) / n).epsilon(1e-14));
  }

  const TriMesh o = generate_structured(8, 8, Rect{0, 1, 0, 1}, MeshPattern::obtuse);
  CHECK(o.theta_max() >= 0.55 * kPi);
  CHECK(o.theta_max() <= 0.65 * kPi);
  CHECK(std::abs(o.total_area() - 1.0) < 1e-14);
}

TEST_CASE("cells are stored clockwise with consistent neighbors") {
  const TriMesh m = generate_structured(5, 4, Rect{-1, 2, 0, 1}, MeshPattern::obtuse);
  for (std::size_t k = 0; k < m.num_cells(); ++k) {
    const Cell& c = m.cell(k);
    CHECK(signed_area(c) < 0.0);
    CHECK(c.area == doctest::Approx(-signed_area(c)).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) {
      // Outward normal points away from the opposite vertex.
      CHECK(dot(c.outward_normal(i), c.vertices[i] - c.edge_midpoint(i)) < 0.0);
      if (c.neighbor_ids[i]) {
        const Cell& nb = m.cell(*c.neighbor_ids[i]);
        bool back = false;
        for (int j = 0; j < 3; ++j) back = back || (nb.neighbor_ids[j] && *nb.neighbor_ids[j] == k);
        CHECK(back);
      }
    }
  }
  for (const Edge& e : m.edges()) {
    const Cell& l = m.cell(e.left_cell);
    CHECK(dot(e.unit_normal, l.outward_normal(e.left_local)) == doctest::Approx(1.0));
  }
}

TEST_CASE("periodic generator pairs every boundary edge") {
  const TriMesh m = generate_structured(6, 6, Rect{0, 2, 0, 2}, MeshPattern::uniform, true);
  CHECK(m.fully_periodic());
  for (const Edge& e : m.edges()) {
    if (e.boundary != BoundaryKind::periodic) continue;
    REQUIRE(e.partner);
    const Edge& p = m.edge(*e.partner);
    CHECK(std::abs(norm(e.midpoint + e.shift - p.midpoint)) < 1e-14);
  }
}

TEST_CASE("mesh file round trip") {
  const TriMesh m = generate_structured(4, 4, Rect{0, 1, 0, 1}, MeshPattern::uniform);
  const auto path = std::filesystem::temp_directory_path() / "mpsdg_test_roundtrip.mesh";
  write_mesh(m, path);
  const TriMesh back = load_mesh(path);
  std::filesystem::remove(path);
  check_same_adjacency(m, back);

  const TriMesh p = generate_structured(4, 4, Rect{0, 1, 0, 1}, MeshPattern::obtuse, true);
  const TriMesh pb = parse_mesh(format_mesh(p));
  check_same_adjacency(p, pb);
  CHECK(pb.fully_periodic());
}

TEST_CASE("mesh input errors and orientation") {
  const std::string dup =
      "4 vertices\n0 0\n1 0\n1 1\n0 1\n"
      "3 cells\n1 2 3\n1 3 4\n3 2 1\n";
  CHECK_THROWS_AS(parse_mesh(dup), MeshError);
  CHECK_THROWS_AS(parse_mesh("2 vertices\n0 0\n1 0\n1 cells\n1 2 3\n"), MeshError);
  CHECK_THROWS_AS(parse_mesh("3 vertices\n0 0\n1 0\n0 1\n1 cells\n0 1 2\n"), MeshError);

  // Counter-clockwise input cells.
  const std::string ccw =
      "4 vertices\n0 0\n2 0\n2 1\n0 1\n"
      "2 cells\n1 2 3\n1 3 4\n";
  const TriMesh m = parse_mesh(ccw);
  REQUIRE(m.num_cells() == 2);
  for (const Cell& c : m.cells()) {
    CHECK(signed_area(c) < 0.0);
    CHECK(c.area == doctest::Approx(1.0).epsilon(1e-15));  // |cross| / 2 of each half
  }
}

TEST_CASE("edge length scale") {
  const double s3 = std::sqrt(3.0);
  SUBCASE("equilateral pair") {
    const TriMesh m =
        TriMesh::from_arrays({{0, 0}, {1, 0}, {0.5, s3 / 2}, {0.5, -s3 / 2}}, {{0, 1, 2}, {1, 0, 3}});
    std::size_t shared = 0;
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      if (m.edge(e).right_cell) shared = e;
    }
    const Edge& e = m.edge(shared);
    const double mid = edge_length_scale(m, shared, e.unit_normal, e.midpoint);
    CHECK(mid == doctest::Approx(0.5 * std::tan(kPi / 3)).epsilon(1e-14));
    CHECK(mid == doctest::Approx(0.8660254037844386).epsilon(1e-14));

    // Off-center origin: exact ray-segment intersections of both cells.
    const Point2 a = m.vertices()[e.vertex_ids[0]];
    const Point2 b = m.vertices()[e.vertex_ids[1]];
    const Point2 g = a + (0.5 + 0.5 * std::sqrt(0.6)) * (b - a);
    const double off = edge_length_scale(m, shared, e.unit_normal, g);
    CHECK(off < mid);
    double expected = std::numeric_limits<double>::infinity();
    for (const Cell& c : m.cells()) {
      const Vec2 dir = c.area > 0 && dot(c.centroid() - g, e.unit_normal) > 0 ? e.unit_normal : -e.unit_normal;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 3; ++i) {
        const double t = oracle::ray_segment(g, dir, c.vertices[(i + 1) % 3], c.vertices[(i + 2) % 3]);
        best = std::min(best, t);
      }
      expected = std::min(expected, best);
    }
    CHECK(off == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("right isosceles pair across the hypotenuse") {
    const TriMesh m = TriMesh::from_arrays({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 1, 2}, {1, 3, 2}});
    std::size_t shared = 0;
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      if (m.edge(e).right_cell) shared = e;
    }
    const Edge& e = m.edge(shared);
    CHECK(edge_length_scale(m, shared, e.unit_normal, e.midpoint) ==
          doctest::Approx(std::sqrt(2.0) / 2 * std::tan(kPi / 4)).epsilon(1e-14));
  }
}
