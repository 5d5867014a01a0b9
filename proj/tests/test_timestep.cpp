#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mpsdg/error.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/timestep.hpp"

using namespace mpsdg;

namespace {

constexpr double kPi = std::numbers::pi;

/// u' = lambda u on every coefficient of a one-cell field.
RhsFn scalar_ode(double lambda) {
  return [lambda](const DGField& u, double, Residual& r) {
    r.assign(u.size(), {});
    for (std::size_t k = 0; k < u.size(); ++k)
      for (int i = 0; i < 6; ++i) r[k][i] = lambda * u.cells[k].c[i];
  };
}

DGField one_cell(double v) {
  DGField u(1);
  u.cells[0] = QuadraticPoly::constant(v);
  return u;
}

}  // namespace

TEST_CASE("linear-theorem step-size constant") {
  const double w1 = 2.0 / 81.0;
  const double s3 = std::sqrt(3.0);
  CHECK(cfl_A_linear(5.0, 0.125, kPi / 3, kPi / 3) == doctest::Approx(s3 * w1 / 36.0).epsilon(1e-14));
  CHECK(cfl_A_linear(5.0, 0.125, kPi / 3, kPi / 3) == doctest::Approx(1.188e-3).epsilon(1e-3));
  CHECK(cfl_A_linear(5.0, 0.25, kPi / 3, kPi / 3) == doctest::Approx(s3 * w1 / 34.0).epsilon(1e-14));
  // Right angles make the bound vanish.
  CHECK(cfl_A_linear(5.0, 0.125, kPi / 4, kPi / 2) == 0.0);
  // Nonincreasing in beta0 and in the largest angle.
  double prev = cfl_A_linear(1.0, 0.2, 0.9, 1.2);
  for (double b0 = 1.5; b0 < 20.0; b0 += 0.5) {
    const double a = cfl_A_linear(b0, 0.2, 0.9, 1.2);
    CHECK(a <= prev + 1e-18);
    prev = a;
  }
  CHECK(cfl_A_linear(5.0, 0.2, 0.9, 1.3) < cfl_A_linear(5.0, 0.2, 0.9, 1.2));
}

TEST_CASE("nonlinear-theorem step-size constant") {
  const double c = (3.0 - std::sqrt(3.0)) / 3.0;
  CHECK(c == doctest::Approx(0.42265).epsilon(1e-5));
  const double a = cfl_A_nonlinear(5.0, 0.125, kPi / 3, 0.01);
  CHECK(a == doctest::Approx(std::sin(kPi / 3) * c * 0.01 / 14.0).epsilon(1e-14));
  CHECK(cfl_A_nonlinear(5.0, 0.125, kPi / 3, 0.02) == doctest::Approx(2.0 * a).epsilon(1e-14));
  // Small beta0: the second branch 1 / (8 beta1 + 1) is active.
  CHECK(cfl_A_nonlinear(0.5, 0.25, kPi / 3, 0.01) == doctest::Approx(std::sin(kPi / 3) * c * 0.01 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(cfl_A_nonlinear(5.0, 0.125, kPi / 3, 0.0), ConfigError);
}

TEST_CASE("compute_dt") {
  const ProblemSpec heat = linear_diffusion(0.5);
  const TriMesh m = generate_structured(12, 12, heat.domain, MeshPattern::uniform, true);
  const CflGeometry geo = CflGeometry::of(m, true);
  CHECK(geo.min_area == doctest::Approx(1.0 / 288.0).epsilon(1e-13));
  CHECK(geo.w0 > 0.0);
  const FluxParams flux{5.0, 0.125, ScaleMode::edge_normal_scale};

  CflParams p;
  p.mode = CflMode::practical;
  p.safety = 0.9;
  const DtReport rep = compute_dt(geo, p, flux, heat, 0.0, m);
  // A(u) = 0.5 I everywhere.
  const double expected = 0.9 * kPracticalConstantEdge * (1.0 / 288.0) / 0.5;
  CHECK(rep.dt == doctest::Approx(expected).epsilon(1e-13));
  // Steps needed to reach 1e-4.
  CHECK(rep.dt == doctest::Approx(3.125e-5).epsilon(1e-12));
  CHECK(static_cast<int>(std::ceil(1e-4 / rep.dt)) == 4);
  // Halving h divides dt by four.
  const TriMesh fine = generate_structured(24, 24, heat.domain, MeshPattern::uniform, true);
  const DtReport rf = compute_dt(CflGeometry::of(fine, false), p, flux, heat, 0.0, fine);
  CHECK(rep.dt / rf.dt == doctest::Approx(4.0).epsilon(1e-12));

  // Right triangles: the linear theorem bound vanishes and is refused.
  CflParams lin;
  lin.mode = CflMode::linear_thm;
  CHECK_THROWS_AS(compute_dt(geo, lin, flux, heat, 0.0, m), ConfigError);
  CflParams nl;
  nl.mode = CflMode::nonlinear_thm;
  const DtReport rn = compute_dt(geo, nl, flux, heat, 0.0, m);
  CHECK(rn.dt == doctest::Approx(0.9 * cfl_A_nonlinear(5, 0.125, geo.theta_min, geo.w0) / 288.0 / 0.5).epsilon(1e-12));
  CHECK_FALSE(rn.exceeds_theorem);

  CflParams zero = p;
  zero.safety = 0.0;
  CHECK_THROWS_AS(compute_dt(geo, zero, flux, heat, 0.0, m), ConfigError);
  CflParams fixed = p;
  fixed.user_dt = 1.0;
  CHECK(compute_dt(geo, fixed, flux, heat, 0.0, m).exceeds_theorem);
}

TEST_CASE("convective speed") {
  const ProblemSpec sdp = strongly_degenerate(0.1);
  const TriMesh m = generate_structured(4, 4, sdp.domain, MeshPattern::uniform);
  CHECK(max_wave_speed(sdp, m, 0.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(max_wave_speed(linear_diffusion(1.0), m, 0.0) == 0.0);
}

TEST_CASE("Runge-Kutta steps") {
  const double lambda = -1.7, dt = 0.3;
  const double z = lambda * dt;
  DGField u = one_cell(2.0);
  forward_euler_step(u, 0.0, dt, scalar_ode(lambda));
  CHECK(u.cells[0].c[0] == doctest::Approx(2.0 * (1.0 + z)).epsilon(1e-15));

  DGField v = one_cell(2.0);
  int hooks = 0;
  ssp_rk3_step(v, 0.0, dt, scalar_ode(lambda), [&](DGField&, double) { ++hooks; });
  CHECK(v.cells[0].c[0] == doctest::Approx(2.0 * (1.0 + z + z * z / 2 + z * z * z / 6)).epsilon(1e-15));
  CHECK(hooks == 3);
  CHECK(v.time == doctest::Approx(dt));

  // Third order: error of one step scales like dt^4.
  auto one_step_error = [&](double h) {
    DGField w = one_cell(1.0);
    ssp_rk3_step(w, 0.0, h, scalar_ode(lambda));
    return std::abs(w.cells[0].c[0] - std::exp(lambda * h));
  };
  CHECK(one_step_error(0.02) / one_step_error(0.01) == doctest::Approx(16.0).epsilon(0.02));

  // Zero right-hand side keeps the state.
  DGField c = one_cell(0.25);
  ssp_rk3_step(c, 0.0, 1.0, scalar_ode(0.0));
  CHECK(c.cells[0].c[0] == 0.25);

  CHECK_THROWS_AS(ssp_rk3_step(c, 0.0, 0.0, scalar_ode(1.0)), ConfigError);
  DGField blow = one_cell(1e300);
  CHECK_THROWS_AS(ssp_rk3_step(blow, 0.0, 1.0, scalar_ode(1e300)), NumericError);
}

TEST_CASE("integrate lands on record times and the final time") {
  DGField u = one_cell(1.0);
  IntegrateOptions opts;
  opts.t_end = 1.0;
  opts.dt = [](const DGField&, double) { return 0.3; };
  opts.record_times = {0.0, 0.5, 2.0};
  std::vector<double> seen;
  opts.record = [&](const DGField& s, double t) {
    CHECK(s.time == doctest::Approx(t));
    seen.push_back(t);
  };
  int limiter_calls = 0;
  opts.limiter = [&](DGField&, double) { ++limiter_calls; };
  const IntegrateReport rep = integrate(u, scalar_ode(-1.0), opts);
  // 0 -> 0.3 -> 0.5 -> 0.8 -> 1.0
  CHECK(rep.steps == 4);
  CHECK(rep.dt_min == doctest::Approx(0.2));
  CHECK(rep.dt_max == doctest::Approx(0.3));
  CHECK(u.time == 1.0);
  CHECK(seen == std::vector<double>{0.0, 0.5});
  CHECK(limiter_calls == 12);
  CHECK(u.cells[0].c[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));

  DGField w = one_cell(1.0);
  opts.schedule = LimitSchedule::per_step;
  limiter_calls = 0;
  opts.record = {};
  integrate(w, scalar_ode(-1.0), opts);
  CHECK(limiter_calls == 4);

  opts.max_steps = 2;
  DGField x = one_cell(1.0);
  CHECK_THROWS_AS(integrate(x, scalar_ode(-1.0), opts), NumericError);
}
