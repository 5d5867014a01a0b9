#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mpsdg/geometry.hpp"
#include "mpsdg/mesh.hpp"

namespace mpsdg {

/// Triangle rule in barycentric coordinates. Weights are normalized to the
/// cell average (they sum to one).
struct QuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// One-dimensional rule on [-1/2, 1/2]; weights sum to one, so applying it
/// gives the mean over the interval.
struct EdgeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Positive-weight symmetric rules exact to degree 2, 4 or 5.
QuadRule triangle_rule(int degree);

EdgeRule gauss_2();
EdgeRule gauss_3();
EdgeRule gauss_lobatto_3();
EdgeRule gauss_radau_3();

/// The P2-exact rule obtained by pushing the Gauss-Lobatto x Gauss-Radau tensor
/// rule on the square through the three collapsing maps g1, g2, g3 (each
/// sending the top side of the square to one vertex), averaged over the three
/// maps. Coincident images are merged by adding weights. Vertices carry
/// weight 2/81 each; edge midpoints are among the points.
QuadRule mapped_vertex_rule();

/// Weight of each vertex in mapped_vertex_rule().
inline constexpr double kVertexWeight = 2.0 / 81.0;

/// Cell-average rule whose nodes include the twelve points used by the
/// edge stencils of a cell: its three vertices, three edge midpoints and, on
/// each edge, the points at distance h/2 and h from the midpoint along the
/// inward normal (h the edge length scale).
struct SelectedPointRule {
  /// Order: vertices 0..2, edge midpoints 0..2 (by local edge), then for
  /// each local edge the half-distance and full-distance normal points.
  std::array<Point2, 12> points{};
  std::array<double, 12> weights{};
  /// Remaining nodes of the composite rule.
  std::vector<Point2> residual_points;
  std::vector<double> residual_weights;
  /// 1 if the far normal point lies strictly inside the cell, 2 if on its boundary.
  std::array<int, 3> edge_case{};

  double min_selected_weight() const;
};

enum SelectedRole : int {
  kVertex0 = 0,
  kMidpoint0 = 3,
  kHalfNormal0 = 6,  // + 2 * local edge
  kFullNormal0 = 7,  // + 2 * local edge
};

SelectedPointRule selected_point_weights(const TriMesh& mesh, std::size_t cell);

/// Smallest selected-point weight over all cells.
double min_selected_weight(const TriMesh& mesh);

}  // namespace mpsdg
