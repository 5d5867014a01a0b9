#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mpsdg/error.hpp"
#include "mpsdg/problems.hpp"

using namespace mpsdg;

namespace {

constexpr double kPi = std::numbers::pi;

/// u_t - eps Lap u by central differences.
double heat_defect(const std::function<double(Point2, double)>& u, double eps, Point2 x, double t) {
  const double h = 1e-3, k = 1e-6;
  const double ut = (u(x, t + k) - u(x, t - k)) / (2 * k);
  const double lap = (u({x.x + h, x.y}, t) + u({x.x - h, x.y}, t) + u({x.x, x.y + h}, t) + u({x.x, x.y - h}, t) -
                      4 * u(x, t)) /
                     (h * h);
  return ut - eps * lap;
}

}  // namespace

TEST_CASE("linear diffusion") {
  const ProblemSpec p = linear_diffusion(1.0);
  CHECK(p.boundary == BoundaryCondition::periodic);
  CHECK_FALSE(p.has_convection());
  CHECK(p.bounds.upper(1e-4) == doctest::Approx(0.9921354055).epsilon(1e-9));
  CHECK(p.bounds.lower(1e-4) == doctest::Approx(-0.9921354055).epsilon(1e-9));
  CHECK(p.exact({0.125, 0.125}, 0.0) == doctest::Approx(1.0));
  CHECK(p.initial({0.3, 0.4}) == doctest::Approx(p.exact({0.3, 0.4}, 0.0)));
  for (Point2 x : {Point2{0.1, 0.2}, Point2{0.77, 0.31}}) {
    CHECK(std::abs(heat_defect(p.exact, 1.0, x, 1e-3)) < 1e-3);
  }
  // Periodic in both directions.
  CHECK(p.exact({0.0, 0.3}, 0.2) == doctest::Approx(p.exact({1.0, 0.3}, 0.2)));
  CHECK(max_diffusion_norm(p, -1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(linear_diffusion(0.0), ConfigError);
}

TEST_CASE("porous medium") {
  const ProblemSpec p = porous_medium();
  CHECK(p.initial({2.0, -2.0}) == 1.0);
  CHECK(p.initial({-2.0, 2.0}) == 1.0);
  CHECK(p.initial({0.0, 0.0}) == 0.0);
  CHECK(p.initial({2.0 + 2.44, -2.0}) == 1.0);  // radius sqrt(6) = 2.449
  CHECK(p.initial({2.0 + 2.46, -2.0}) == 0.0);
  CHECK(p.bounds.lower(0.0) == 0.0);
  CHECK(p.bounds.upper(5.0) == 1.0);
  CHECK(p.diffusion(0.0).spectral_norm() == 0.0);
  CHECK(max_diffusion_norm(p, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(p.boundary == BoundaryCondition::dirichlet_zero);
}

TEST_CASE("strongly degenerate convection-diffusion") {
  CHECK(sdp_nu(0.25) == 0.0);
  CHECK(sdp_nu(-0.25) == 0.0);
  CHECK(sdp_nu(0.251) == 1.0);
  CHECK(sdp_nu(-0.9) == 1.0);
  const ProblemSpec p = strongly_degenerate(0.1);
  CHECK(p.has_convection());
  CHECK(p.initial({-0.5, -0.5}) == 1.0);
  CHECK(p.initial({0.5, 0.5}) == -1.0);
  CHECK(p.initial({0.0, 0.0}) == 0.0);
  const Vec2 f = p.flux(0.5, {0, 0}, 0);
  CHECK(f.x == doctest::Approx(0.25));
  CHECK(f.y == doctest::Approx(0.25));
  const Vec2 df = p.flux_derivative(-1.0, {0, 0}, 0);
  CHECK(df.x == doctest::Approx(-2.0));
  CHECK(max_diffusion_norm(p, -1.0, 1.0) == doctest::Approx(0.1));
  CHECK(max_diffusion_norm(p, -0.2, 0.2) == 0.0);
  CHECK_THROWS_AS(strongly_degenerate(-1.0), ConfigError);
}

TEST_CASE("vorticity problems") {
  const ProblemSpec acc = ns_vorticity(100.0, VorticityVariant::accuracy);
  CHECK(acc.domain.x1 == doctest::Approx(2 * kPi));
  CHECK(acc.bounds.upper(0.1) == doctest::Approx(1.996).epsilon(1e-4));
  CHECK(acc.exact({0.5 * kPi, 0.5 * kPi}, 0.0) == doctest::Approx(-2.0));
  for (Point2 x : {Point2{0.4, 1.3}, Point2{2.5, 5.0}}) {
    CHECK(std::abs(heat_defect(acc.exact, 0.01, x, 0.05)) < 1e-4);
  }
  // No velocity until the stream function is solved.
  CHECK(acc.flux(1.0, {1.0, 1.0}, 0).x == 0.0);
  CHECK(acc.velocity);

  const ProblemSpec vp = ns_vorticity(1e4, VorticityVariant::vortex_patch);
  CHECK(vp.initial({kPi, kPi / 2}) == -1.0);
  CHECK(vp.initial({kPi, 1.5 * kPi}) == 1.0);
  CHECK(vp.initial({kPi, kPi}) == 0.0);
  CHECK(vp.initial({0.2, kPi / 2}) == 0.0);
  CHECK(vp.bounds.lower(0.0) == -1.0);
  CHECK(vp.diffusion(0.0).a11 == doctest::Approx(1e-4));
  CHECK_THROWS_AS(ns_vorticity(0.0, VorticityVariant::accuracy), ConfigError);
}
