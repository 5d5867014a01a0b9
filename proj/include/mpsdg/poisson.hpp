#pragma once

#include <Eigen/Sparse>
#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "mpsdg/assembly.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/timestep.hpp"

namespace mpsdg {

/// Continuous P2 Lagrange space: nodes at vertices and edge midpoints. Local
/// node order per cell: vertices 0..2, then midpoints of local edges 0..2.
struct C0Space {
  static constexpr std::size_t kFixed = std::numeric_limits<std::size_t>::max();

  std::vector<Point2> nodes;
  std::vector<std::array<std::size_t, 6>> cell_nodes;
  /// Degree of freedom of each node (periodic images share one); kFixed for
  /// Dirichlet nodes.
  std::vector<std::size_t> dof;
  std::size_t num_dofs = 0;
  bool periodic = false;
};

/// Periodic space (requires every boundary edge to be paired) or, with
/// periodic = false, a space whose boundary nodes are fixed.
C0Space build_c0_space(const TriMesh& mesh, bool periodic);

/// P2 basis values at a barycentric point, in local node order.
std::array<double, 6> p2_lagrange(double l0, double l1, double l2);
/// Physical gradients of the P2 basis at a barycentric point.
std::array<Vec2, 6> p2_lagrange_gradients(const Cell& cell, double l0, double l1, double l2);

/// Compressed sparse row matrix over the degrees of freedom.
using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Stiffness matrix (grad psi_a, grad psi_b) over the free degrees of freedom.
SparseOperator assemble_poisson(const TriMesh& mesh, const C0Space& space);

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. With `mean_zero` the right-hand
/// side is projected onto mean-zero vectors first and the result is shifted to
/// mean zero (the constant null space of the periodic operator). Throws
/// NumericError when the tolerance is not reached within max_iter.
CgReport solve_cg(const SparseOperator& op, const Eigen::VectorXd& rhs, Eigen::VectorXd& x, double tol,
                  int max_iter, bool mean_zero);

/// Nodal values of a function on the space's nodes.
std::vector<double> interpolate(const C0Space& space, const std::function<double(Point2)>& f);

/// Solves -Lap(phi) = f with phi = g on the boundary (non-periodic space);
/// returns nodal values.
std::vector<double> solve_poisson_dirichlet(const TriMesh& mesh, const C0Space& space,
                                            const std::function<double(Point2)>& f,
                                            const std::function<double(Point2)>& g, double tol = 1e-12);

/// Velocity (-phi_y, phi_x) of a continuous P2 stream function given by nodal
/// values.
VelocityState velocity_field(const TriMesh& mesh, const C0Space& space, const std::vector<double>& phi);

/// Stream-function solve Lap(phi) = w on a fully periodic mesh, reused across
/// time stages (matrix assembled once, previous solution as initial guess).
class StreamFunctionSolver {
 public:
  explicit StreamFunctionSolver(const TriMesh& mesh, double tol = 1e-10, int max_iter = 10000);

  /// Solves for phi from the DG vorticity and returns its nodal values.
  const std::vector<double>& solve(const DGField& w);
  void update_velocity(const DGField& w, VelocityState& out);

  const C0Space& space() const { return space_; }
  const SparseOperator& matrix() const { return matrix_; }
  const CgReport& last_report() const { return report_; }

 private:
  const TriMesh* mesh_;
  C0Space space_;
  SparseOperator matrix_;
  double tol_;
  int max_iter_;
  QuadRule load_rule_;
  Eigen::VectorXd x_;
  std::vector<double> phi_;
  CgReport report_;
};

/// Right-hand side of the vorticity equation: solves for the stream function
/// from the current vorticity, stores the velocity in the problem's
/// VelocityState, then evaluates the DG operator.
RhsFn vorticity_rhs(const SpatialOperator& op, StreamFunctionSolver& solver, Exec exec = Exec::parallel);

}  // namespace mpsdg
