#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"

namespace mpsdg {

/// Randomized checks of the quadrature constructions and of the
/// bound-preservation theorems, shared by the `quadcheck` command, the
/// acceptance run and the tests.
namespace verify {

using Rng = std::mt19937_64;

/// Hexagonal patch of `rings` rings of equilateral triangles with interior
/// vertices moved by up to `jitter` edge lengths, redrawn until the smallest
/// angle is at least `min_angle` and the largest at most `max_angle`
/// (radians). Boundary edges are Dirichlet.
TriMesh random_hex_mesh(Rng& rng, int rings, double jitter, double min_angle, double max_angle);

/// Cell polynomial with a random average in [lo, hi] (the ends drawn with
/// positive probability) and random higher coefficients of random size,
/// scaled into [lo, hi] by the bound limiter.
QuadraticPoly random_bounded_poly(Rng& rng, double lo, double hi);
DGField random_bounded_field(Rng& rng, std::size_t cells, double lo, double hi);

struct MappedRuleCheck {
  std::size_t triangles = 0;
  /// Largest relative error over the six quadratic monomials.
  double max_error = 0.0;
  double vertex_weight_error = 0.0;  ///< max |w_vertex - 2/81|
  double min_weight = 0.0;
  double weight_sum_error = 0.0;
  bool pass = false;
};
/// Exactness of the mapped Gauss-Lobatto x Gauss-Radau rule on the
/// monomials 1, x, y, x^2, xy, y^2 over random triangles, against the
/// closed-form averages of products of linear functions.
MappedRuleCheck check_mapped_vertex_rule(std::size_t triangles, std::uint64_t seed);

struct SelectedWeightCheck {
  std::size_t meshes = 0;
  std::size_t cells = 0;
  std::size_t nonpositive = 0;
  std::size_t bound_failures = 0;
  double min_weight = 0.0;
  /// Largest error of the composite rule on a random quadratic.
  double max_rule_error = 0.0;
  bool pass = false;
};
/// Selected-point weights on random meshes: positivity, the lower bounds
/// (w1/6) tan(tmin) cot(tmax) for vertices and midpoints, (1/18) tan(tmin)
/// cot(tmax) for half-normal points, w1/6 for far normal points, and
/// exactness of the composite rule.
SelectedWeightCheck check_selected_weights(std::size_t meshes, std::uint64_t seed);

struct TheoremCheck {
  std::size_t meshes = 0;
  std::size_t fields = 0;
  std::size_t averages = 0;
  std::size_t violations = 0;
  /// Largest distance of a new average outside [0, 1].
  double worst_excess = 0.0;
  double min_lambda = 0.0;  ///< smallest dt / |K| bound used
  bool pass = false;
};
/// One forward-Euler step of u_t = Lap u with (beta0, beta1) = (5, 1/8), the
/// midpoint normal length scale and dt = safety * A_linear * min |K| from
/// random fields in [0, 1]; counts new averages outside [-tol, 1 + tol].
TheoremCheck check_linear_theorem(std::size_t meshes, std::size_t fields, std::uint64_t seed,
                                  double safety = 0.9, double tol = 1e-12);
/// Same with A(u) = (1 + u) I, 2-point Gauss edge quadrature, the per-point
/// length scale and the nonlinear step bound with w0 from the selected-point
/// weights.
TheoremCheck check_nonlinear_theorem(std::size_t meshes, std::size_t fields, std::uint64_t seed,
                                     double safety = 0.9, double tol = 1e-12);

struct EdgeIdentityCheck {
  std::size_t pairs = 0;
  double max_error = 0.0;
  bool pass = false;
};
/// The ten-value closed form of the edge integral of the diffusion flux
/// (Simpson values, two normal-line points per side) against the quadrature
/// assembly of the flux, for random quadratic pairs on random cell pairs.
EdgeIdentityCheck check_edge_identity(std::size_t pairs, std::uint64_t seed, double tol = 1e-11);

std::string summary(const MappedRuleCheck& c);
std::string summary(const SelectedWeightCheck& c);
std::string summary(const TheoremCheck& c);
std::string summary(const EdgeIdentityCheck& c);

}  // namespace verify
}  // namespace mpsdg
