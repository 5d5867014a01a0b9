#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpsdg/geometry.hpp"

namespace mpsdg {

enum class BoundaryKind { none, dirichlet_zero, periodic };

/// Triangle with clockwise vertex order. Local edge i is opposite local vertex i,
/// i.e. it joins vertices (i+1)%3 and (i+2)%3.
struct Cell {
  std::array<std::size_t, 3> vertex_ids{};
  std::array<std::size_t, 3> edge_ids{};
  std::array<std::optional<std::size_t>, 3> neighbor_ids{};
  /// Translation taking a point of this cell's frame into the neighbor's frame
  /// across each local edge (nonzero only across periodic edges).
  std::array<Vec2, 3> neighbor_shift{};

  std::array<Point2, 3> vertices{};
  double area = 0.0;
  double diameter = 0.0;
  /// Gradients of the first two barycentric coordinates (xi, eta).
  Vec2 grad_xi;
  Vec2 grad_eta;

  std::array<double, 3> barycentric(Point2 p) const;
  Point2 from_barycentric(double l0, double l1, double l2) const;
  Point2 centroid() const;
  /// Outward unit normal of local edge i.
  Vec2 outward_normal(int i) const;
  double edge_length(int i) const;
  Point2 edge_midpoint(int i) const;
  /// Interior angle at local vertex i (radians).
  double angle(int i) const;
  double inradius() const;
};

struct Edge {
  std::array<std::size_t, 2> vertex_ids{};
  std::size_t left_cell = 0;
  std::optional<std::size_t> right_cell;
  int left_local = 0;
  int right_local = -1;
  BoundaryKind boundary = BoundaryKind::none;
  /// Paired edge for periodic boundaries.
  std::optional<std::size_t> partner;
  /// Right cell's frame = left frame + shift (periodic edges only).
  Vec2 shift;
  double length = 0.0;
  /// Points from left_cell into right_cell.
  Vec2 unit_normal;
  Point2 midpoint;

  bool is_interior() const { return boundary == BoundaryKind::none; }
};

/// Periodic pairing of two boundary edges given by vertex indices, with
/// a <-> c and b <-> d under translation.
struct PeriodicPair {
  std::size_t a = 0, b = 0, c = 0, d = 0;
};

/// Conforming triangulation. Immutable after construction.
class TriMesh {
 public:
  /// Builds adjacency from scratch. Cells may come in either orientation;
  /// they are stored clockwise. Boundary edges not covered by `periodic`
  /// get `dirichlet_zero`.
  static TriMesh from_arrays(std::vector<Point2> vertices,
                             std::vector<std::array<std::size_t, 3>> cells,
                             const std::vector<PeriodicPair>& periodic = {});

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_vertices() const { return vertices_.size(); }

  double theta_min() const { return theta_min_; }
  double theta_max() const { return theta_max_; }
  /// Largest cell diameter.
  double h() const { return h_; }
  double total_area() const;
  bool fully_periodic() const;
  const std::vector<PeriodicPair>& periodic_pairs() const { return periodic_; }

  /// Edges carrying a flux: every interior and Dirichlet edge, plus one edge of
  /// each periodic pair (the lower id).
  std::vector<std::size_t> flux_edges() const;

  /// V - E + C counting each periodic pair as two boundary edges.
  long euler_characteristic() const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<PeriodicPair> periodic_;
  double theta_min_ = 0.0;
  double theta_max_ = 0.0;
  double h_ = 0.0;
};

enum class MeshPattern { uniform, obtuse };

/// nx by ny quads on `domain`, each split into two triangles. The obtuse pattern
/// shifts interior vertices in alternating directions so the largest angle is
/// about 3*pi/5. With `periodic` the opposite sides are paired by coordinate.
TriMesh generate_structured(int nx, int ny, const Rect& domain, MeshPattern pattern,
                            bool periodic = false);

/// Pairs boundary edges on opposite sides of `domain` whose endpoints match
/// under translation within `tol`.
std::vector<PeriodicPair> match_periodic_edges(const std::vector<Point2>& vertices,
                                               const std::vector<std::array<std::size_t, 3>>& cells,
                                               const Rect& domain, double tol = 1e-10);

TriMesh load_mesh(const std::filesystem::path& path);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
TriMesh parse_mesh(const std::string& text);
std::string format_mesh(const TriMesh& mesh);

/// Distance from `origin` along `dir` to where the ray leaves `cell`
/// (convex exit through the first edge crossed).
double exit_distance(const Cell& cell, Point2 origin, Vec2 dir);

/// Length scale of an edge seen from `origin` on it: the smaller of the
/// distances, along -dir into the left cell and along +dir into the right
/// cell, to the first other edge of that cell. Boundary edges without a
/// neighbor use the left cell only. `dir` must point from left to right.
double edge_length_scale(const TriMesh& mesh, std::size_t edge, Vec2 dir, Point2 origin);

}  // namespace mpsdg
