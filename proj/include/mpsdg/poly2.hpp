#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mpsdg/geometry.hpp"
#include "mpsdg/mesh.hpp"

namespace mpsdg {

struct QuadRule;

/// Quadratic on a triangle in the local basis {1, xi, eta, xi^2, xi*eta, eta^2},
/// (xi, eta) being the first two barycentric coordinates of the owning cell.
struct QuadraticPoly {
  static constexpr int kSize = 6;
  std::array<double, kSize> c{};

  static QuadraticPoly constant(double v) { return {{v, 0, 0, 0, 0, 0}}; }

  double at_bary(double xi, double eta) const {
    return c[0] + c[1] * xi + c[2] * eta + c[3] * xi * xi + c[4] * xi * eta + c[5] * eta * eta;
  }
  /// Mean over the cell; independent of the cell shape in this basis.
  double average() const {
    return c[0] + (c[1] + c[2]) / 3.0 + (c[3] + c[5]) / 6.0 + c[4] / 12.0;
  }

  QuadraticPoly& operator+=(const QuadraticPoly& o) {
    for (int i = 0; i < kSize; ++i) c[i] += o.c[i];
    return *this;
  }
  QuadraticPoly& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend QuadraticPoly operator+(QuadraticPoly a, const QuadraticPoly& b) { return a += b; }
  friend QuadraticPoly operator*(double s, QuadraticPoly a) { return a *= s; }
  bool operator==(const QuadraticPoly&) const = default;
};

/// Piecewise quadratic DG solution, one polynomial per mesh cell.
struct DGField {
  std::vector<QuadraticPoly> cells;
  double time = 0.0;

  DGField() = default;
  explicit DGField(std::size_t n, double t = 0.0) : cells(n), time(t) {}
  std::size_t size() const { return cells.size(); }
};

/// Value of the basis functions at a barycentric point.
std::array<double, 6> basis_values(double xi, double eta);
/// Physical gradients of the basis functions at a barycentric point.
std::array<Vec2, 6> basis_gradients(const Cell& cell, double xi, double eta);

double evaluate(const QuadraticPoly& p, const Cell& cell, Point2 point);
Vec2 gradient(const QuadraticPoly& p, const Cell& cell, Point2 point);

struct DirectionalDerivatives {
  double first = 0.0;   ///< grad u . dir
  double second = 0.0;  ///< dir^T Hess(u) dir, constant over the cell
};

/// Throws NumericError on a zero direction.
DirectionalDerivatives directional_derivatives(const QuadraticPoly& p, const Cell& cell,
                                               Point2 point, Vec2 dir);

/// Mass matrix of the local basis divided by the cell area. The same for
/// every triangle.
const std::array<std::array<double, 6>, 6>& reference_mass();
/// Solves (reference_mass) x = b.
std::array<double, 6> solve_reference_mass(const std::array<double, 6>& b);

/// L2 projection of f onto P2(cell). The rule must be exact to degree 4.
QuadraticPoly l2_project(const std::function<double(Point2)>& f, const Cell& cell,
                         const QuadRule& volume_rule);

DGField project_field(const std::function<double(Point2)>& f, const TriMesh& mesh,
                      const QuadRule& volume_rule, double time = 0.0);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

/// Exact minimum and maximum over the closed triangle. Only the coefficients
/// matter: the domain in (xi, eta) is the reference simplex for every cell.
Extrema extrema_on_cell(const QuadraticPoly& p);

/// Sum over cells of area times cell average.
double total_mass(const DGField& field, const TriMesh& mesh);

}  // namespace mpsdg
