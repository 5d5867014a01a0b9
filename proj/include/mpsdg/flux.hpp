#pragma once

#include <functional>
#include <string>

#include "mpsdg/geometry.hpp"

namespace mpsdg {

/// How the length scale h in the diffusion flux is measured on an edge.
enum class ScaleMode {
  /// Along the normal line through the edge midpoint, one value per edge.
  edge_normal_scale,
  /// Along the flux direction from each edge quadrature point.
  gauss_point_scale,
  /// The edge length.
  edge_length,
};

struct FluxParams {
  double beta0 = 5.0;
  double beta1 = 0.125;
  ScaleMode h_mode = ScaleMode::gauss_point_scale;
};

/// Value and first/second derivatives along the flux direction at an edge point.
struct Trace {
  double u = 0.0;
  double u_g = 0.0;
  double u_gg = 0.0;
};

struct EdgeTracePair {
  Trace inner;
  Trace outer;
  double scale = 0.0;
  Vec2 gamma;
};

/// beta0 [u]/h + avg(u_g) + beta1 h [u_gg], jumps taken outer minus inner.
/// Throws NumericError on a nonpositive scale.
double ddg_flux(const FluxParams& params, const EdgeTracePair& trace);

/// gamma = A(u)^T n.
Vec2 gamma_vector(const std::function<Mat2(double)>& diffusion, double u_edge, Vec2 n);

/// (1/2) (A_inner grad v) . n [u], with [u] = outer - inner.
double interface_correction(double u_jump, Vec2 testgrad_inner, const Mat2& A_inner, Vec2 n);

/// Lax-Friedrichs flux from precomputed normal fluxes F(u).n on both sides.
inline double lax_friedrichs(double fn_inner, double fn_outer, double u_inner, double u_outer,
                             double alpha) {
  return 0.5 * (fn_inner + fn_outer - alpha * (u_outer - u_inner));
}

double lax_friedrichs(const std::function<Vec2(double)>& flux, double u_inner, double u_outer, Vec2 n,
                      double alpha);

enum class TheoremMode { linear, nonlinear };

struct ParamCheck {
  bool ok = false;
  std::string message;
};

/// Checks the coefficient ranges under which the bound-preservation theorems
/// hold. Never throws: a failed check is information, not an error.
ParamCheck validate_params(const FluxParams& params, TheoremMode mode);

}  // namespace mpsdg
