#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mpsdg/assembly.hpp"
#include "mpsdg/flux.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"
#include "mpsdg/problems.hpp"

namespace mpsdg {

/// Weight of a vertex in the mapped Gauss-Lobatto x Gauss-Radau rule.
inline constexpr double kW1 = 2.0 / 81.0;

/// Bound on dt/|K| for the heat equation; 0 when the largest angle is at
/// least a right angle. The 1/(6(8 beta1 - 1)) branch is dropped at
/// beta1 = 1/8 and the w1/(72(1 - 4 beta1)) branch at beta1 = 1/4.
double cfl_A_linear(double beta0, double beta1, double theta_min, double theta_max);

/// Bound on dt/|K| for nonlinear diffusion with 2-point Gauss edge quadrature.
double cfl_A_nonlinear(double beta0, double beta1, double theta_min, double w0);

enum class CflMode {
  linear_thm,
  nonlinear_thm,
  /// nonlinear_thm capped by the convective limit inradius / alpha.
  convection_combined,
  /// Empirical stability limit dt = C |K| / a_max; no bound guarantee.
  practical,
};

/// Stability constants of the practical mode (dt / (|K| / a_max)), about half
/// of the largest constant found stable on the structured meshes. The
/// per-point length scale is small near edge ends, which stiffens the penalty.
inline constexpr double kPracticalConstantEdge = 0.005;
inline constexpr double kPracticalConstantPoint = 0.0015;
double practical_constant(ScaleMode mode);

struct CflParams {
  double safety = 0.9;
  CflMode mode = CflMode::linear_thm;
  std::optional<double> user_dt;
  /// Defaults to practical_constant(flux.h_mode).
  std::optional<double> practical_constant;
};

/// Mesh quantities the step-size formulas need, computed once.
struct CflGeometry {
  double theta_min = 0.0;
  double theta_max = 0.0;
  double min_area = 0.0;
  double w0 = 0.0;  ///< smallest selected-point weight; 0 unless requested
  double min_inradius = 0.0;

  static CflGeometry of(const TriMesh& mesh, bool with_w0);
};

struct DtReport {
  double dt = 0.0;
  double theorem_dt = 0.0;  ///< bound of the theorem mode, +inf if none applies
  bool exceeds_theorem = false;
};

/// Step size per the selected mode. Diffusion bounds are divided by the
/// largest spectral norm of A(u) over the bounds at time t (the flux scales
/// with |A^T n|). A user dt overrides the mode; callers should warn when the
/// report says it exceeds the theorem bound. Throws ConfigError on safety
/// outside (0, 1] or when no positive step results.
DtReport compute_dt(const CflGeometry& geo, const CflParams& params, const FluxParams& flux,
                    const ProblemSpec& problem, double t, const TriMesh& mesh);

/// Largest |F'(u)| over the bounds and over the cell vertices of a mesh.
double max_wave_speed(const ProblemSpec& problem, const TriMesh& mesh, double t);

using RhsFn = std::function<void(const DGField&, double, Residual&)>;
using StageHook = std::function<void(DGField&, double)>;

/// u + dt * r, in place.
void axpy_field(DGField& u, double dt, const Residual& r);

void forward_euler_step(DGField& state, double t, double dt, const RhsFn& rhs, const StageHook& post_stage = {});

/// Shu-Osher three-stage SSP Runge-Kutta step; post_stage is applied to each
/// stage result at its stage time (t + dt, t + dt/2, t + dt).
void ssp_rk3_step(DGField& state, double t, double dt, const RhsFn& rhs, const StageHook& post_stage = {});

enum class LimitSchedule { per_stage, per_step };

struct IntegrateOptions {
  double t_end = 0.0;
  std::function<double(const DGField&, double)> dt;
  /// Limiting (slope then bound limiter); empty for none.
  StageHook limiter;
  LimitSchedule schedule = LimitSchedule::per_stage;
  /// Times at which `record` is called; steps are shortened to hit them.
  std::vector<double> record_times;
  std::function<void(const DGField&, double)> record;
  std::size_t max_steps = 100000000;
};

struct IntegrateReport {
  std::size_t steps = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
};

/// SSP-RK3 from state.time to t_end; the last step is shortened to land on
/// t_end exactly.
IntegrateReport integrate(DGField& state, const RhsFn& rhs, const IntegrateOptions& opts);

}  // namespace mpsdg
