#include "mpsdg/poisson.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <numeric>
#include <string>

#include "mpsdg/error.hpp"
#include "mpsdg/quadrature.hpp"

namespace mpsdg {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Element stiffness matrix, exact with the degree-2 rule (the integrand is
/// a product of two linear gradients).
std::array<std::array<double, 6>, 6> element_stiffness(const Cell& cell) {
  static const QuadRule rule = triangle_rule(2);
  std::array<std::array<double, 6>, 6> ke{};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& b = rule.points[q];
    const auto g = p2_lagrange_gradients(cell, b[0], b[1], b[2]);
    const double w = rule.weights[q] * cell.area;
    for (int a = 0; a < 6; ++a) {
      for (int c = 0; c < 6; ++c) ke[a][c] += w * dot(g[a], g[c]);
    }
  }
  return ke;
}

}  // namespace

std::array<double, 6> p2_lagrange(double l0, double l1, double l2) {
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l1 * l2,         4.0 * l2 * l0,         4.0 * l0 * l1};
}

std::array<Vec2, 6> p2_lagrange_gradients(const Cell& cell, double l0, double l1, double l2) {
  const Vec2 g0 = cell.grad_xi, g1 = cell.grad_eta;
  const Vec2 g2 = -1.0 * (g0 + g1);
  return {(4.0 * l0 - 1.0) * g0,     (4.0 * l1 - 1.0) * g1,     (4.0 * l2 - 1.0) * g2,
          4.0 * (l2 * g1 + l1 * g2), 4.0 * (l0 * g2 + l2 * g0), 4.0 * (l1 * g0 + l0 * g1)};
}

C0Space build_c0_space(const TriMesh& mesh, bool periodic) {
  if (periodic && !mesh.fully_periodic()) throw MeshError("periodic Poisson space needs every boundary edge paired");
  const std::size_t nv = mesh.num_vertices();
  C0Space s;
  s.periodic = periodic;
  s.nodes = mesh.vertices();
  for (const Edge& e : mesh.edges()) s.nodes.push_back(e.midpoint);
  for (const Cell& c : mesh.cells()) {
    s.cell_nodes.push_back({c.vertex_ids[0], c.vertex_ids[1], c.vertex_ids[2], nv + c.edge_ids[0],
                            nv + c.edge_ids[1], nv + c.edge_ids[2]});
  }

  s.dof.assign(s.nodes.size(), C0Space::kFixed);
  if (periodic) {
    DisjointSets sets(s.nodes.size());
    for (const PeriodicPair& p : mesh.periodic_pairs()) {
      sets.unite(p.a, p.c);
      sets.unite(p.b, p.d);
    }
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      if (const auto& partner = mesh.edge(e).partner) sets.unite(nv + e, nv + *partner);
    }
    std::vector<std::size_t> index(s.nodes.size(), C0Space::kFixed);
    for (std::size_t n = 0; n < s.nodes.size(); ++n) {
      const std::size_t r = sets.find(n);
      if (index[r] == C0Space::kFixed) index[r] = s.num_dofs++;
      s.dof[n] = index[r];
    }
  } else {
    std::vector<bool> fixed(s.nodes.size(), false);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const Edge& edge = mesh.edge(e);
      if (edge.is_interior()) continue;
      fixed[edge.vertex_ids[0]] = fixed[edge.vertex_ids[1]] = fixed[nv + e] = true;
    }
    for (std::size_t n = 0; n < s.nodes.size(); ++n) {
      if (!fixed[n]) s.dof[n] = s.num_dofs++;
    }
  }
  return s;
}

SparseOperator assemble_poisson(const TriMesh& mesh, const C0Space& space) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.num_cells() * 36);
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const auto ke = element_stiffness(mesh.cell(k));
    const auto& nodes = space.cell_nodes[k];
    for (int a = 0; a < 6; ++a) {
      const std::size_t ra = space.dof[nodes[a]];
      if (ra == C0Space::kFixed) continue;
      for (int b = 0; b < 6; ++b) {
        const std::size_t cb = space.dof[nodes[b]];
        if (cb == C0Space::kFixed) continue;
        triplets.emplace_back(static_cast<int>(ra), static_cast<int>(cb), ke[a][b]);
      }
    }
  }
  SparseOperator op(static_cast<Eigen::Index>(space.num_dofs), static_cast<Eigen::Index>(space.num_dofs));
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

CgReport solve_cg(const SparseOperator& op, const Eigen::VectorXd& rhs, Eigen::VectorXd& x, double tol,
                  int max_iter, bool mean_zero) {
  Eigen::VectorXd b = rhs;
  if (mean_zero && b.size() > 0) b.array() -= b.mean();
  if (x.size() != b.size()) x = Eigen::VectorXd::Zero(b.size());
  if (b.norm() == 0.0) {
    x.setZero();
    return {};
  }
  Eigen::ConjugateGradient<SparseOperator, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iter);
  cg.compute(op);
  x = cg.solveWithGuess(b, x);
  if (cg.info() != Eigen::Success) {
    throw NumericError("conjugate gradients did not converge in " + std::to_string(cg.iterations()) +
                       " iterations, relative residual " + std::to_string(cg.error()));
  }
  if (mean_zero) x.array() -= x.mean();
  return {static_cast<int>(cg.iterations()), cg.error()};
}

std::vector<double> interpolate(const C0Space& space, const std::function<double(Point2)>& f) {
  std::vector<double> v(space.nodes.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(space.nodes[n]);
  return v;
}

std::vector<double> solve_poisson_dirichlet(const TriMesh& mesh, const C0Space& space,
                                            const std::function<double(Point2)>& f,
                                            const std::function<double(Point2)>& g, double tol) {
  if (space.periodic) throw Error("solve_poisson_dirichlet needs a non-periodic space");
  const SparseOperator op = assemble_poisson(mesh, space);
  const QuadRule rule = triangle_rule(5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs));
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& cell = mesh.cell(k);
    const auto& nodes = space.cell_nodes[k];
    const auto ke = element_stiffness(cell);
    std::array<double, 6> fe{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& b = rule.points[q];
      const double fv = f(cell.from_barycentric(b[0], b[1], b[2])) * rule.weights[q] * cell.area;
      const auto psi = p2_lagrange(b[0], b[1], b[2]);
      for (int a = 0; a < 6; ++a) fe[a] += fv * psi[a];
    }
    for (int a = 0; a < 6; ++a) {
      const std::size_t ra = space.dof[nodes[a]];
      if (ra == C0Space::kFixed) continue;
      double v = fe[a];
      for (int c = 0; c < 6; ++c) {
        if (space.dof[nodes[c]] == C0Space::kFixed) v -= ke[a][c] * g(space.nodes[nodes[c]]);
      }
      rhs[static_cast<Eigen::Index>(ra)] += v;
    }
  }
  Eigen::VectorXd x;
  solve_cg(op, rhs, x, tol, 10 * static_cast<int>(space.num_dofs) + 100, false);
  std::vector<double> phi(space.nodes.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    phi[n] = space.dof[n] == C0Space::kFixed ? g(space.nodes[n]) : x[static_cast<Eigen::Index>(space.dof[n])];
  }
  return phi;
}

VelocityState velocity_field(const TriMesh& mesh, const C0Space& space, const std::vector<double>& phi) {
  VelocityState v;
  v.mesh = &mesh;
  v.grad_phi.resize(mesh.num_cells());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& cell = mesh.cell(k);
    const auto& nodes = space.cell_nodes[k];
    for (int corner = 0; corner < 3; ++corner) {
      std::array<double, 3> l{};
      l[corner] = 1.0;
      const auto g = p2_lagrange_gradients(cell, l[0], l[1], l[2]);
      Vec2 grad;
      for (int a = 0; a < 6; ++a) grad = grad + phi[nodes[a]] * g[a];
      v.grad_phi[k][corner] = grad;
    }
  }
  return v;
}

StreamFunctionSolver::StreamFunctionSolver(const TriMesh& mesh, double tol, int max_iter)
    : mesh_(&mesh),
      space_(build_c0_space(mesh, true)),
      matrix_(assemble_poisson(mesh, space_)),
      tol_(tol),
      max_iter_(max_iter),
      load_rule_(triangle_rule(4)) {}

const std::vector<double>& StreamFunctionSolver::solve(const DGField& w) {
  // Lap(phi) = w in weak form: -(grad phi, grad psi) = (w, psi), i.e. K phi = -b.
  const std::size_t nc = mesh_->num_cells();
  std::vector<std::array<double, 6>> element(nc);
  const long n = static_cast<long>(nc);
#pragma omp parallel for schedule(static)
  for (long kk = 0; kk < n; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const Cell& cell = mesh_->cell(k);
    std::array<double, 6> fe{};
    for (std::size_t q = 0; q < load_rule_.size(); ++q) {
      const auto& b = load_rule_.points[q];
      const double wv = w.cells[k].at_bary(b[0], b[1]) * load_rule_.weights[q] * cell.area;
      const auto psi = p2_lagrange(b[0], b[1], b[2]);
      for (int a = 0; a < 6; ++a) fe[a] += wv * psi[a];
    }
    element[k] = fe;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_.num_dofs));
  for (std::size_t k = 0; k < nc; ++k) {
    for (int a = 0; a < 6; ++a) rhs[static_cast<Eigen::Index>(space_.dof[space_.cell_nodes[k][a]])] -= element[k][a];
  }
  report_ = solve_cg(matrix_, rhs, x_, tol_, max_iter_, true);
  phi_.resize(space_.nodes.size());
  for (std::size_t i = 0; i < phi_.size(); ++i) phi_[i] = x_[static_cast<Eigen::Index>(space_.dof[i])];
  return phi_;
}

void StreamFunctionSolver::update_velocity(const DGField& w, VelocityState& out) {
  out = velocity_field(*mesh_, space_, solve(w));
}

RhsFn vorticity_rhs(const SpatialOperator& op, StreamFunctionSolver& solver, Exec exec) {
  auto velocity = op.problem().velocity;
  if (!velocity) throw ConfigError("vorticity_rhs: problem has no velocity state");
  return [&op, &solver, velocity, exec](const DGField& w, double t, Residual& r) {
    solver.update_velocity(w, *velocity);
    op.residual(w, t, r, exec);
  };
}

}  // namespace mpsdg
