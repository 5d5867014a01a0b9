#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mpsdg/flux.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/quadrature.hpp"

namespace mpsdg {

enum class AlphaPolicy {
  /// max |F'(u).n| over samples of [m, M].
  global,
  /// max |F'(u).n| over the two traces and the bounds m, M.
  per_edge,
};

struct SchemeConfig {
  FluxParams flux;
  bool interface_correction = true;
  EdgeRule edge_rule = gauss_3();
  QuadRule volume_rule = triangle_rule(4);
  AlphaPolicy alpha_policy = AlphaPolicy::per_edge;
};

/// Coefficient rates du/dt, one 6-vector per cell in the local basis.
using Residual = std::vector<std::array<double, 6>>;

enum class Exec {
  /// Reference path: every cell recomputes the fluxes on its own edges.
  serial,
  /// OpenMP path: one flux evaluation per edge point, then a per-cell gather.
  parallel,
};

/// Semi-discrete DG operator for u_t + div F(u) = div(A(u) grad u) with the
/// direct DG diffusion flux and interface correction.
///
/// On every edge point the diffusion flux is evaluated along the unit vector
/// of gamma = A(u)^T n and multiplied by |gamma|, so that it vanishes where
/// A does; for |gamma| = 1 this is the plain flux formula.
class SpatialOperator {
 public:
  SpatialOperator(const TriMesh& mesh, const ProblemSpec& problem, SchemeConfig cfg);

  const TriMesh& mesh() const { return *mesh_; }
  const ProblemSpec& problem() const { return *problem_; }
  const SchemeConfig& config() const { return cfg_; }

  void residual(const DGField& u, double t, Residual& out, Exec exec = Exec::parallel) const;
  Residual residual(const DGField& u, double t, Exec exec = Exec::parallel) const;

  /// Rate of change of the average of one cell: (1/|K|) times the boundary
  /// integral of the normal fluxes.
  double average_rate(const DGField& u, double t, std::size_t cell) const;

  /// Length scale used on a flux edge point along unit direction `dir`.
  double length_scale(std::size_t face, std::size_t q, Vec2 dir) const;

  /// Flux-carrying edges, in the order the parallel path stores them.
  const std::vector<std::size_t>& faces() const { return faces_; }
  /// Edge point q of a face in the left cell's frame.
  Point2 face_point(std::size_t face, std::size_t q) const { return points_[face * nq_ + q]; }

  struct PointFlux {
    double flux = 0.0;  ///< normal diffusion flux minus convection flux, left to right
    double u_left = 0.0;
    double u_right = 0.0;
  };
  PointFlux point_flux(const DGField& u, double t, std::size_t face, std::size_t q) const;

 private:
  struct Side {
    std::size_t face = 0;
    bool left = true;
  };

  void residual_serial(const DGField& u, double t, Residual& out) const;
  void residual_parallel(const DGField& u, double t, Residual& out) const;
  /// Volume integrals of cell k into r (integrals, not averages).
  void add_volume(const DGField& u, std::size_t k, std::array<double, 6>& r) const;
  /// Edge-point contribution to cell k from one side of a face.
  void add_edge_point(const DGField& u, std::size_t k, const Side& side, std::size_t q, const PointFlux& pf,
                      std::array<double, 6>& r) const;
  void finish_cell(std::size_t k, const std::array<double, 6>& r, std::array<double, 6>& out) const;

  const TriMesh* mesh_;
  const ProblemSpec* problem_;
  SchemeConfig cfg_;
  std::size_t nq_ = 0;
  std::vector<std::size_t> faces_;
  /// For each cell and local edge, the face carrying its flux.
  std::vector<std::array<Side, 3>> sides_;
  std::vector<Point2> points_;
  /// Normal-direction length scale per face point (gauss_point_scale) and
  /// per face (edge_normal_scale).
  std::vector<double> h_point_;
  std::vector<double> h_face_;
  /// Reference derivatives d(phi_j)/d(xi), d(phi_j)/d(eta) at volume points.
  std::vector<std::array<std::array<double, 2>, 6>> vol_dphi_;
};

Residual spatial_residual(const TriMesh& mesh, const DGField& field, const ProblemSpec& problem,
                          const SchemeConfig& cfg, double t = 0.0, Exec exec = Exec::parallel);

double average_rate(const TriMesh& mesh, const DGField& field, const ProblemSpec& problem,
                    const SchemeConfig& cfg, std::size_t cell, double t = 0.0);

/// Cell average of a coefficient rate.
double average_of(const std::array<double, 6>& c);

}  // namespace mpsdg
