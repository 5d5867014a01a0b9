#include <cmath>
#include <random>

#include "doctest.h"
#include "mpsdg/error.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/quadrature.hpp"
#include "oracles.hpp"

using namespace mpsdg;

namespace {

DGField random_field(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DGField u(n);
  for (auto& p : u.cells) {
    p = oracle::random_poly(rng, std::pow(10.0, 2.0 * unit(rng) - 1.5));
    p.c[0] += lo + (hi - lo) * unit(rng) - p.average();
  }
  return u;
}

}  // namespace

TEST_CASE("scaling factor") {
  CHECK(mps_theta(0.5, Extrema{-0.1, 1.2}, 0.0, 1.0) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(mps_theta(0.5, Extrema{0.1, 0.9}, 0.0, 1.0) == 1.0);
  // Only the lower side is violated: (0.2 - 0) / (0.2 - (-0.2)).
  CHECK(mps_theta(0.2, Extrema{-0.2, 0.5}, 0.0, 1.0) == doctest::Approx(0.5));
  // Average on the bound: the polynomial collapses to the constant.
  CHECK(mps_theta(0.0, Extrema{-0.3, 0.4}, 0.0, 1.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("limited fields: bounds, averages, idempotence") {
  std::mt19937_64 rng(12);
  const Bounds b = Bounds::constant(-0.5, 2.0);
  DGField u = random_field(rng, 300, -0.5, 2.0);
  const DGField before = u;
  const LimiterStats stats = mps_limit(u, b, 0.0);
  CHECK(stats.limited_cells > 0);
  CHECK(stats.limited_cells < 300);
  for (std::size_t k = 0; k < u.size(); ++k) {
    CHECK(u.cells[k].average() == doctest::Approx(before.cells[k].average()).epsilon(1e-14).scale(1.0));
    const auto e = oracle::refined_extrema(u.cells[k], 60);
    CHECK(e.min >= -0.5 - 1e-12);
    CHECK(e.max <= 2.0 + 1e-12);
    // Either unchanged or a uniform scaling of the deviation from the average.
    const auto& p = u.cells[k];
    const auto& q = before.cells[k];
    double theta = -1.0;
    for (int i = 1; i < 6; ++i) {
      if (std::abs(q.c[i]) > 1e-8) {
        const double t = p.c[i] / q.c[i];
        if (theta < 0.0) theta = t;
        CHECK(t == doctest::Approx(theta).epsilon(1e-10));
      }
    }
    CHECK(theta <= 1.0 + 1e-14);
  }
  DGField again = u;
  const LimiterStats second = mps_limit(again, b, 0.0);
  CHECK(second.limited_cells == 0);
  CHECK(again.cells == u.cells);
}

TEST_CASE("serial and parallel limiters agree") {
  std::mt19937_64 rng(13);
  DGField a = random_field(rng, 500, 0.0, 1.0);
  DGField b = a;
  const Bounds bounds = Bounds::constant(0.0, 1.0);
  const LimiterStats sa = mps_limit(a, bounds, 0.0);
  const LimiterStats sb = mps_limit_serial(b, bounds, 0.0);
  CHECK(sa.limited_cells == sb.limited_cells);
  CHECK(a.cells == b.cells);
}

TEST_CASE("time-dependent bounds and the average guard") {
  const Bounds shrinking{[](double t) { return -std::exp(-t); }, [](double t) { return std::exp(-t); }};
  DGField u(1);
  u.cells[0] = QuadraticPoly{{0.0, 1.0, 0.0, 0.0, 0.0, 0.0}};  // xi - 1/3 shifted below
  u.cells[0].c[0] = -u.cells[0].average();
  DGField early = u, late = u;
  mps_limit(early, shrinking, 0.0);
  mps_limit(late, shrinking, 3.0);
  CHECK(early.cells == u.cells);
  const auto e = extrema_on_cell(late.cells[0]);
  CHECK(e.max <= std::exp(-3.0) + 1e-15);
  CHECK(e.min >= -std::exp(-3.0) - 1e-15);

  // An average outside by more than round-off is a step-size failure.
  DGField bad(2);
  bad.cells[1] = QuadraticPoly::constant(1.0 + 1e-6);
  CHECK_THROWS_AS(mps_limit(bad, Bounds::constant(0.0, 1.0), 0.0), NumericError);
  DGField tiny(1);
  tiny.cells[0] = QuadraticPoly::constant(1.0 + 1e-13);
  CHECK_NOTHROW(mps_limit(tiny, Bounds::constant(0.0, 1.0), 0.0));
}

TEST_CASE("slope limiter") {
  const TriMesh m = generate_structured(8, 8, Rect{0, 1, 0, 1}, MeshPattern::uniform);
  const QuadRule rule = triangle_rule(5);
  SUBCASE("constant data untouched") {
    DGField u(m.num_cells());
    for (auto& c : u.cells) c = QuadraticPoly::constant(0.4);
    CHECK(slope_limit(u, m, {1.5, 0.0}) == 0);
  }
  SUBCASE("smooth data below the TVB threshold untouched") {
    DGField u = project_field([](Point2 x) { return 0.1 * std::sin(x.x + 2 * x.y); }, m, rule);
    const DGField before = u;
    CHECK(slope_limit(u, m, {1.5, 50.0}) == 0);
    CHECK(u.cells == before.cells);
  }
  SUBCASE("a jump is limited, averages kept, limited cells linear") {
    DGField u = project_field([](Point2 x) { return x.x + x.y < 1.0 ? 1.0 : -1.0; }, m, rule);
    const DGField before = u;
    const std::size_t limited = slope_limit(u, m, {1.5, 0.0});
    CHECK(limited > 0);
    std::size_t linear = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(u.cells[k].average() == doctest::Approx(before.cells[k].average()).epsilon(1e-13).scale(1.0));
      if (!(u.cells[k] == before.cells[k])) {
        CHECK(std::abs(u.cells[k].c[3]) + std::abs(u.cells[k].c[4]) + std::abs(u.cells[k].c[5]) < 1e-14);
        ++linear;
      }
    }
    CHECK(linear <= limited);
  }
  SUBCASE("bad parameters") {
    DGField u(m.num_cells());
    CHECK_THROWS_AS(slope_limit(u, m, {0.5, 1.0}), ConfigError);
  }
}
