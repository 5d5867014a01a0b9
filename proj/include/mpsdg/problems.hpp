#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpsdg/geometry.hpp"
#include "mpsdg/limiter.hpp"

namespace mpsdg {

enum class BoundaryCondition { periodic, dirichlet_zero };

/// Velocity field of an incompressible flow, stored per cell as the gradient
/// of the stream function at the three vertices (the gradient of a continuous
/// P2 function is linear on each cell).
struct VelocityState {
  /// Mesh the gradients live on; set together with grad_phi.
  const TriMesh* mesh = nullptr;
  std::vector<std::array<Vec2, 3>> grad_phi;

  /// (-phi_y, phi_x) at barycentric point (l0, l1, l2) of `cell`.
  Vec2 velocity(std::size_t cell, double l0, double l1, double l2) const {
    const auto& g = grad_phi[cell];
    const Vec2 grad = l0 * g[0] + l1 * g[1] + l2 * g[2];
    return {-grad.y, grad.x};
  }
  /// Velocity at physical point x expressed in the frame of `cell`.
  Vec2 velocity_at(std::size_t cell, Point2 x) const {
    const auto b = mesh->cell(cell).barycentric(x);
    return velocity(cell, b[0], b[1], b[2]);
  }
};

/// Convection flux F(u) possibly depending on position; `cell` identifies the
/// cell whose frame `x` is expressed in.
using ConvectionFlux = std::function<Vec2(double u, Point2 x, std::size_t cell)>;

struct ProblemSpec {
  std::string name;
  Rect domain;
  BoundaryCondition boundary = BoundaryCondition::periodic;

  /// F(u) and F'(u); both empty for pure diffusion.
  ConvectionFlux flux;
  ConvectionFlux flux_derivative;
  /// A(u).
  std::function<Mat2(double)> diffusion;
  std::function<double(Point2)> initial;
  /// Exact solution u(x, t) if known.
  std::function<double(Point2, double)> exact;
  Bounds bounds;

  std::optional<SlopeLimiterParams> slope_defaults;
  /// Set for the vorticity problems; the velocity is recomputed before every
  /// residual evaluation.
  std::shared_ptr<VelocityState> velocity;

  bool has_convection() const { return static_cast<bool>(flux); }
};

/// max over u in [lo, hi] of the spectral norm of A(u), by sampling (exact for
/// A affine in u).
double max_diffusion_norm(const ProblemSpec& problem, double lo, double hi);

/// u_t = eps Lap u on the periodic unit square, u0 = sin(2 pi (x + y)).
ProblemSpec linear_diffusion(double epsilon);
/// u_t = Lap(u^2) on [-10, 10]^2, written with A(u) = 2u I, two disc indicators.
ProblemSpec porous_medium();
/// u_t + (u^2)_x + (u^2)_y = eps div(nu(u) grad u) on [-1.5, 1.5]^2.
ProblemSpec strongly_degenerate(double epsilon);
double sdp_nu(double u);

enum class VorticityVariant { accuracy, vortex_patch };
/// w_t + div(V w) = Lap w / Re on the periodic [0, 2 pi]^2; V from the stream function.
ProblemSpec ns_vorticity(double reynolds, VorticityVariant variant);

}  // namespace mpsdg
