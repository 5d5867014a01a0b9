#include "mpsdg/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mpsdg/error.hpp"
#include "mpsdg/quadrature.hpp"

namespace mpsdg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// a / b, or +inf when b is not positive (branch absent from the minimum).
double branch(double a, double b) { return b > 0.0 ? a / b : kInf; }

/// Fraction of inradius / alpha allowed by the P2 bound-preserving condition
/// alpha dt perimeter / |K| <= (2/3) (1/6), with perimeter / |K| = 2 / r.
constexpr double kConvectionFraction = 1.0 / 18.0;

}  // namespace

double cfl_A_linear(double beta0, double beta1, double theta_min, double theta_max) {
  if (theta_max >= 0.5 * std::numbers::pi - 1e-12) return 0.0;
  const double tmin = std::tan(theta_min);
  const double ratio = tmin / std::tan(theta_max);
  const double inner = std::min({branch(1.0, 6.0 * (8.0 * beta1 - 1.0)),
                                 branch(kW1, 8.0 * (beta0 - 2.25 + 6.0 * beta1)), branch(kW1, 4.0 * beta0)});
  return tmin * std::min(branch(kW1, 72.0 * (1.0 - 4.0 * beta1)), ratio * inner);
}

double cfl_A_nonlinear(double beta0, double beta1, double theta_min, double w0) {
  if (!(w0 > 0.0)) throw ConfigError("cfl_A_nonlinear: w0 must be positive");
  const double c = (3.0 - std::sqrt(3.0)) / 3.0;
  return std::sin(theta_min) * c * w0 *
         std::min(1.0 / (2.0 * beta0 + 8.0 * beta1 + 3.0), 1.0 / (8.0 * beta1 + 1.0));
}

double practical_constant(ScaleMode mode) {
  return mode == ScaleMode::gauss_point_scale ? kPracticalConstantPoint : kPracticalConstantEdge;
}

CflGeometry CflGeometry::of(const TriMesh& mesh, bool with_w0) {
  CflGeometry g;
  g.theta_min = mesh.theta_min();
  g.theta_max = mesh.theta_max();
  g.min_area = kInf;
  g.min_inradius = kInf;
  for (const Cell& c : mesh.cells()) {
    g.min_area = std::min(g.min_area, c.area);
    g.min_inradius = std::min(g.min_inradius, c.inradius());
  }
  if (with_w0) g.w0 = min_selected_weight(mesh);
  return g;
}

double max_wave_speed(const ProblemSpec& problem, const TriMesh& mesh, double t) {
  if (!problem.has_convection()) return 0.0;
  const double m = problem.bounds.lower(t), big_m = problem.bounds.upper(t);
  double a = 0.0;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    for (const Point2& x : mesh.cell(k).vertices) {
      for (int i = 0; i <= 4; ++i) a = std::max(a, norm(problem.flux_derivative(m + (big_m - m) * i / 4.0, x, k)));
    }
  }
  return a;
}

DtReport compute_dt(const CflGeometry& geo, const CflParams& params, const FluxParams& flux,
                    const ProblemSpec& problem, double t, const TriMesh& mesh) {
  if (!(params.safety > 0.0 && params.safety <= 1.0)) throw ConfigError("CFL safety must lie in (0, 1]");
  const double a_max = max_diffusion_norm(problem, problem.bounds.lower(t), problem.bounds.upper(t));
  auto diffusive = [&](double a) { return a_max > 0.0 ? a * geo.min_area / a_max : kInf; };

  const double linear = diffusive(cfl_A_linear(flux.beta0, flux.beta1, geo.theta_min, geo.theta_max));
  const double nonlinear =
      geo.w0 > 0.0 ? diffusive(cfl_A_nonlinear(flux.beta0, flux.beta1, geo.theta_min, geo.w0)) : 0.0;

  DtReport rep;
  double dt = kInf;
  switch (params.mode) {
    case CflMode::linear_thm:
      rep.theorem_dt = dt = linear;
      break;
    case CflMode::nonlinear_thm:
    case CflMode::convection_combined:
      if (!(geo.w0 > 0.0)) throw ConfigError("nonlinear step-size bound needs the selected-point weight w0");
      rep.theorem_dt = dt = nonlinear;
      break;
    case CflMode::practical:
      rep.theorem_dt = geo.w0 > 0.0 ? nonlinear : linear;
      dt = diffusive(params.practical_constant.value_or(practical_constant(flux.h_mode)));
      break;
  }
  dt *= params.safety;
  if (problem.has_convection() && params.mode != CflMode::linear_thm && params.mode != CflMode::nonlinear_thm) {
    const double alpha = max_wave_speed(problem, mesh, t);
    if (alpha > 0.0) dt = std::min(dt, params.safety * kConvectionFraction * geo.min_inradius / alpha);
  }
  if (params.user_dt) {
    dt = *params.user_dt;
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw ConfigError("step-size computation gave dt = " + std::to_string(dt) +
                      " (a theorem bound vanishes on this mesh; use the practical mode or an explicit dt)");
  }
  rep.dt = dt;
  rep.exceeds_theorem = dt > rep.theorem_dt;
  return rep;
}

void axpy_field(DGField& u, double dt, const Residual& r) {
  const long n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    auto& c = u.cells[static_cast<std::size_t>(k)].c;
    const auto& d = r[static_cast<std::size_t>(k)];
    for (int i = 0; i < 6; ++i) c[i] += dt * d[i];
  }
}

namespace {

void check_stage(const DGField& u, int stage) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (double v : u.cells[k].c) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite value in cell " + std::to_string(k) + " after stage " + std::to_string(stage));
      }
    }
  }
}

/// a * x + b * y, in place into y.
void combine(double a, const DGField& x, double b, DGField& y) {
  const long n = static_cast<long>(y.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    auto& c = y.cells[static_cast<std::size_t>(k)].c;
    const auto& d = x.cells[static_cast<std::size_t>(k)].c;
    for (int i = 0; i < 6; ++i) c[i] = a * d[i] + b * c[i];
  }
}

}  // namespace

void forward_euler_step(DGField& state, double t, double dt, const RhsFn& rhs, const StageHook& post_stage) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  Residual r;
  rhs(state, t, r);
  axpy_field(state, dt, r);
  check_stage(state, 1);
  if (post_stage) post_stage(state, t + dt);
}

void ssp_rk3_step(DGField& state, double t, double dt, const RhsFn& rhs, const StageHook& post_stage) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  Residual r;
  // u1 = u + dt H(u)
  DGField u1 = state;
  rhs(state, t, r);
  axpy_field(u1, dt, r);
  check_stage(u1, 1);
  if (post_stage) post_stage(u1, t + dt);
  // u2 = 3/4 u + 1/4 (u1 + dt H(u1))
  rhs(u1, t + dt, r);
  axpy_field(u1, dt, r);
  combine(0.75, state, 0.25, u1);
  check_stage(u1, 2);
  if (post_stage) post_stage(u1, t + 0.5 * dt);
  // u3 = 1/3 u + 2/3 (u2 + dt H(u2))
  rhs(u1, t + 0.5 * dt, r);
  axpy_field(u1, dt, r);
  combine(1.0 / 3.0, state, 2.0 / 3.0, u1);
  check_stage(u1, 3);
  if (post_stage) post_stage(u1, t + dt);
  u1.time = t + dt;
  state = std::move(u1);
}

IntegrateReport integrate(DGField& state, const RhsFn& rhs, const IntegrateOptions& opts) {
  if (!opts.dt) throw ConfigError("integrate: no step-size function");
  std::vector<double> stops = opts.record_times;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::remove_if(stops.begin(), stops.end(), [&](double s) { return s > opts.t_end; }), stops.end());
  if (stops.empty() || stops.back() < opts.t_end) stops.push_back(opts.t_end);

  IntegrateReport rep;
  rep.dt_min = kInf;
  double t = state.time;
  const double tol = 1e-12 * std::max(1.0, std::abs(opts.t_end));
  auto is_record = [&](double s) {
    return std::find(opts.record_times.begin(), opts.record_times.end(), s) != opts.record_times.end();
  };
  std::size_t next = 0;
  while (next < stops.size() && stops[next] < t - tol) ++next;
  if (next < stops.size() && std::abs(stops[next] - t) <= tol) {
    if (opts.record && is_record(stops[next])) opts.record(state, t);
    ++next;
  }

  while (next < stops.size()) {
    if (rep.steps >= opts.max_steps) throw NumericError("integrate: step limit reached at t = " + std::to_string(t));
    const double stop = stops[next];
    double dt = opts.dt(state, t);
    bool lands = false;
    if (t + dt >= stop - tol) {
      dt = stop - t;
      lands = true;
    }
    if (opts.schedule == LimitSchedule::per_stage) {
      ssp_rk3_step(state, t, dt, rhs, opts.limiter);
    } else {
      ssp_rk3_step(state, t, dt, rhs);
      if (opts.limiter) opts.limiter(state, t + dt);
    }
    ++rep.steps;
    rep.dt_min = std::min(rep.dt_min, dt);
    rep.dt_max = std::max(rep.dt_max, dt);
    t = lands ? stop : t + dt;
    state.time = t;
    if (lands) {
      if (opts.record && is_record(stop)) opts.record(state, t);
      ++next;
    }
  }
  if (rep.steps == 0) rep.dt_min = 0.0;
  return rep;
}

}  // namespace mpsdg
