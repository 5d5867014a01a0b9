#include "mpsdg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mpsdg/error.hpp"

namespace mpsdg {

namespace {
constexpr double kPi = std::numbers::pi;
}

double max_diffusion_norm(const ProblemSpec& problem, double lo, double hi) {
  constexpr int kSamples = 256;
  double a = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double u = lo + (hi - lo) * i / kSamples;
    a = std::max(a, problem.diffusion(u).spectral_norm());
  }
  return a;
}

ProblemSpec linear_diffusion(double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("linear_diffusion: epsilon must be positive");
  ProblemSpec p;
  p.name = "linear_diffusion";
  p.domain = {0.0, 1.0, 0.0, 1.0};
  p.boundary = BoundaryCondition::periodic;
  p.diffusion = [epsilon](double) { return Mat2::identity(epsilon); };
  p.initial = [](Point2 x) { return std::sin(2.0 * kPi * (x.x + x.y)); };
  p.exact = [epsilon](Point2 x, double t) {
    return std::exp(-8.0 * kPi * kPi * epsilon * t) * std::sin(2.0 * kPi * (x.x + x.y));
  };
  const auto amplitude = [epsilon](double t) { return std::exp(-8.0 * kPi * kPi * epsilon * t); };
  p.bounds = {[amplitude](double t) { return -amplitude(t); }, amplitude};
  return p;
}

ProblemSpec porous_medium() {
  ProblemSpec p;
  p.name = "porous_medium";
  p.domain = {-10.0, 10.0, -10.0, 10.0};
  p.boundary = BoundaryCondition::dirichlet_zero;
  p.diffusion = [](double u) { return Mat2::identity(2.0 * u); };
  p.initial = [](Point2 x) {
    const double d1 = (x.x - 2.0) * (x.x - 2.0) + (x.y + 2.0) * (x.y + 2.0);
    const double d2 = (x.x + 2.0) * (x.x + 2.0) + (x.y - 2.0) * (x.y - 2.0);
    return (d1 < 6.0 || d2 < 6.0) ? 1.0 : 0.0;
  };
  p.bounds = Bounds::constant(0.0, 1.0);
  return p;
}

double sdp_nu(double u) { return std::abs(u) <= 0.25 ? 0.0 : 1.0; }

ProblemSpec strongly_degenerate(double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("strongly_degenerate: epsilon must be positive");
  ProblemSpec p;
  p.name = "strongly_degenerate";
  p.domain = {-1.5, 1.5, -1.5, 1.5};
  p.boundary = BoundaryCondition::dirichlet_zero;
  p.flux = [](double u, Point2, std::size_t) { return Vec2{u * u, u * u}; };
  p.flux_derivative = [](double u, Point2, std::size_t) { return Vec2{2.0 * u, 2.0 * u}; };
  p.diffusion = [epsilon](double u) { return Mat2::identity(epsilon * sdp_nu(u)); };
  p.initial = [](Point2 x) {
    const double d1 = (x.x + 0.5) * (x.x + 0.5) + (x.y + 0.5) * (x.y + 0.5);
    const double d2 = (x.x - 0.5) * (x.x - 0.5) + (x.y - 0.5) * (x.y - 0.5);
    if (d1 < 0.16) return 1.0;
    if (d2 < 0.16) return -1.0;
    return 0.0;
  };
  p.bounds = Bounds::constant(-1.0, 1.0);
  p.slope_defaults = SlopeLimiterParams{1.5, 5.0};
  return p;
}

ProblemSpec ns_vorticity(double reynolds, VorticityVariant variant) {
  if (!(reynolds > 0.0)) throw ConfigError("ns_vorticity: Reynolds number must be positive");
  ProblemSpec p;
  p.domain = {0.0, 2.0 * kPi, 0.0, 2.0 * kPi};
  p.boundary = BoundaryCondition::periodic;
  const double nu = 1.0 / reynolds;
  p.diffusion = [nu](double) { return Mat2::identity(nu); };
  auto state = std::make_shared<VelocityState>();
  p.velocity = state;
  // Zero velocity until the stream function has been solved for.
  p.flux = [state](double w, Point2 x, std::size_t cell) {
    if (state->grad_phi.empty()) return Vec2{};
    return w * state->velocity_at(cell, x);
  };
  p.flux_derivative = [state](double, Point2 x, std::size_t cell) {
    if (state->grad_phi.empty()) return Vec2{};
    return state->velocity_at(cell, x);
  };
  if (variant == VorticityVariant::accuracy) {
    p.name = "ns_accuracy";
    p.initial = [](Point2 x) { return -2.0 * std::sin(x.x) * std::sin(x.y); };
    p.exact = [nu](Point2 x, double t) { return -2.0 * std::sin(x.x) * std::sin(x.y) * std::exp(-2.0 * nu * t); };
    const auto amplitude = [nu](double t) { return 2.0 * std::exp(-2.0 * nu * t); };
    p.bounds = {[amplitude](double t) { return -amplitude(t); }, amplitude};
  } else {
    p.name = "ns_vortex_patch";
    p.initial = [](Point2 x) {
      const bool in_x = x.x >= 0.5 * kPi && x.x <= 1.5 * kPi;
      if (in_x && x.y >= 0.25 * kPi && x.y <= 0.75 * kPi) return -1.0;
      if (in_x && x.y >= 1.25 * kPi && x.y <= 1.75 * kPi) return 1.0;
      return 0.0;
    };
    p.bounds = Bounds::constant(-1.0, 1.0);
  }
  return p;
}

}  // namespace mpsdg
