#include "mpsdg/poly2.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mpsdg/error.hpp"
#include "mpsdg/quadrature.hpp"

namespace mpsdg {

namespace {

constexpr std::array<std::array<int, 2>, 6> kExponents{{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Mean of xi^a eta^b over a triangle.
double bary_moment(int a, int b) { return 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2); }

struct MassData {
  std::array<std::array<double, 6>, 6> matrix{};
  Eigen::Matrix<double, 6, 6> inverse;

  MassData() {
    Eigen::Matrix<double, 6, 6> m;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        matrix[i][j] = bary_moment(kExponents[i][0] + kExponents[j][0], kExponents[i][1] + kExponents[j][1]);
        m(i, j) = matrix[i][j];
      }
    }
    inverse = m.ldlt().solve(Eigen::Matrix<double, 6, 6>::Identity());
  }
};

const MassData& mass_data() {
  static const MassData data;
  return data;
}

}  // namespace

std::array<double, 6> basis_values(double xi, double eta) {
  return {1.0, xi, eta, xi * xi, xi * eta, eta * eta};
}

std::array<Vec2, 6> basis_gradients(const Cell& cell, double xi, double eta) {
  const Vec2 gx = cell.grad_xi;
  const Vec2 ge = cell.grad_eta;
  return {Vec2{0.0, 0.0}, gx, ge, 2.0 * xi * gx, eta * gx + xi * ge, 2.0 * eta * ge};
}

double evaluate(const QuadraticPoly& p, const Cell& cell, Point2 point) {
  const auto b = cell.barycentric(point);
  return p.at_bary(b[0], b[1]);
}

Vec2 gradient(const QuadraticPoly& p, const Cell& cell, Point2 point) {
  const auto b = cell.barycentric(point);
  const double xi = b[0], eta = b[1];
  const double dxi = p.c[1] + 2.0 * p.c[3] * xi + p.c[4] * eta;
  const double deta = p.c[2] + p.c[4] * xi + 2.0 * p.c[5] * eta;
  return dxi * cell.grad_xi + deta * cell.grad_eta;
}

DirectionalDerivatives directional_derivatives(const QuadraticPoly& p, const Cell& cell,
                                               Point2 point, Vec2 dir) {
  if (dir.x == 0.0 && dir.y == 0.0) throw NumericError("directional derivative along zero vector");
  const double a = dot(cell.grad_xi, dir);
  const double b = dot(cell.grad_eta, dir);
  DirectionalDerivatives d;
  d.first = dot(gradient(p, cell, point), dir);
  d.second = 2.0 * (p.c[3] * a * a + p.c[4] * a * b + p.c[5] * b * b);
  return d;
}

const std::array<std::array<double, 6>, 6>& reference_mass() { return mass_data().matrix; }

std::array<double, 6> solve_reference_mass(const std::array<double, 6>& b) {
  const auto& inv = mass_data().inverse;
  std::array<double, 6> x{};
  for (int i = 0; i < 6; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += inv(i, j) * b[j];
    x[i] = s;
  }
  return x;
}

QuadraticPoly l2_project(const std::function<double(Point2)>& f, const Cell& cell,
                         const QuadRule& volume_rule) {
  if (volume_rule.degree < 4) throw Error("l2_project needs a volume rule exact to degree 4");
  std::array<double, 6> rhs{};
  for (std::size_t q = 0; q < volume_rule.size(); ++q) {
    const auto& bp = volume_rule.points[q];
    const double fv = f(cell.from_barycentric(bp[0], bp[1], bp[2]));
    const auto phi = basis_values(bp[0], bp[1]);
    for (int i = 0; i < 6; ++i) rhs[i] += volume_rule.weights[q] * fv * phi[i];
  }
  QuadraticPoly p;
  p.c = solve_reference_mass(rhs);
  return p;
}

DGField project_field(const std::function<double(Point2)>& f, const TriMesh& mesh,
                      const QuadRule& volume_rule, double time) {
  DGField field(mesh.num_cells(), time);
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    field.cells[k] = l2_project(f, mesh.cell(k), volume_rule);
  }
  return field;
}

Extrema extrema_on_cell(const QuadraticPoly& p) {
  const auto& c = p.c;
  Extrema e{std::min({c[0] + c[1] + c[3], c[0] + c[2] + c[5], c[0]}),
            std::max({c[0] + c[1] + c[3], c[0] + c[2] + c[5], c[0]})};
  auto consider = [&](double xi, double eta) {
    const double v = p.at_bary(xi, eta);
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
  };
  // Stationary point of a + b s + q s^2 on (0, 1).
  auto edge_root = [](double b, double q) -> double {
    if (q == 0.0) return -1.0;
    return -b / (2.0 * q);
  };

  if (double s = edge_root(c[1], c[3]); s > 0.0 && s < 1.0) consider(s, 0.0);
  if (double s = edge_root(c[2], c[5]); s > 0.0 && s < 1.0) consider(0.0, s);
  if (double s = edge_root(c[1] - c[2] + c[4] - 2.0 * c[5], c[3] - c[4] + c[5]); s > 0.0 && s < 1.0) {
    consider(s, 1.0 - s);
  }

  // grad = 0:  [2c3 c4; c4 2c5] (xi, eta) = -(c1, c2)
  const double h11 = 2.0 * c[3], h12 = c[4], h22 = 2.0 * c[5];
  const double det = h11 * h22 - h12 * h12;
  const double scale = std::max({std::abs(h11), std::abs(h12), std::abs(h22)});
  if (std::abs(det) > 1e-14 * scale * scale && scale > 0.0) {
    const double xi = (-c[1] * h22 + c[2] * h12) / det;
    const double eta = (-c[2] * h11 + c[1] * h12) / det;
    if (xi > 0.0 && eta > 0.0 && xi + eta < 1.0) consider(xi, eta);
  }
  return e;
}

double total_mass(const DGField& field, const TriMesh& mesh) {
  double m = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) m += mesh.cell(k).area * field.cells[k].average();
  return m;
}

}  // namespace mpsdg
