#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mpsdg/error.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/quadrature.hpp"
#include "mpsdg/verify.hpp"
#include "oracles.hpp"

using namespace mpsdg;

namespace {

double apply(const QuadRule& r, int a, int b, int c) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& l = r.points[i];
    s += r.weights[i] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c);
  }
  return s;
}

double apply(const EdgeRule& r, int k) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
  return s;
}

}  // namespace

TEST_CASE("triangle rules integrate barycentric monomials exactly") {
  for (int degree : {2, 4, 5}) {
    const QuadRule r = triangle_rule(degree);
    CHECK(r.degree == degree);
    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        for (int c = 0; a + b + c <= degree; ++c) {
          CHECK(apply(r, a, b, c) == doctest::Approx(oracle::bary_moment(a, b, c)).epsilon(1e-13));
        }
      }
    }
  }
  // Not exact one degree higher.
  CHECK(std::abs(apply(triangle_rule(2), 3, 0, 0) - oracle::bary_moment(3, 0, 0)) > 1e-6);
  CHECK_THROWS_AS(triangle_rule(9), Error);
}

TEST_CASE("one-dimensional rules") {
  const EdgeRule lob = gauss_lobatto_3();
  const EdgeRule rad = gauss_radau_3();
  const double s6 = std::sqrt(6.0);
  CHECK(rad.weights[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(rad.weights[1] == doctest::Approx((16.0 + s6) / 36.0).epsilon(1e-15));
  CHECK(rad.weights[2] == doctest::Approx((16.0 - s6) / 36.0).epsilon(1e-15));
  CHECK(rad.nodes[0] == -0.5);
  for (const EdgeRule& r : {gauss_2(), gauss_3(), lob, rad}) {
    for (int k = 0; k <= r.degree; ++k) {
      CHECK(apply(r, k) == doctest::Approx(oracle::interval_moment(k)).scale(1.0).epsilon(1e-14));
    }
    CHECK(std::abs(apply(r, r.degree + 1) - oracle::interval_moment(r.degree + 1)) > 1e-8);
  }
  CHECK(apply(lob, 3) == doctest::Approx(0.0).scale(1.0));
  CHECK(apply(rad, 4) == doctest::Approx(1.0 / 80.0).epsilon(1e-14));
}

TEST_CASE("mapped vertex rule") {
  const QuadRule r = mapped_vertex_rule();
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

  // Weight at each vertex and presence of the edge midpoints.
  auto weight_at = [&](std::array<double, 3> p) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (std::abs(r.points[i][0] - p[0]) + std::abs(r.points[i][1] - p[1]) + std::abs(r.points[i][2] - p[2]) < 1e-13)
        return r.weights[i];
    }
    return -1.0;
  };
  CHECK(weight_at({1, 0, 0}) == doctest::Approx(kVertexWeight).epsilon(1e-14));
  CHECK(weight_at({0, 1, 0}) == doctest::Approx(2.0 / 81.0).epsilon(1e-14));
  CHECK(weight_at({0, 0, 1}) == doctest::Approx(2.0 / 81.0).epsilon(1e-14));
  CHECK(weight_at({0.5, 0.5, 0}) > 0.0);
  CHECK(weight_at({0, 0.5, 0.5}) > 0.0);
  CHECK(weight_at({0.5, 0, 0.5}) > 0.0);

  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) {
      for (int c = 0; a + b + c <= 2; ++c) {
        CHECK(apply(r, a, b, c) == doctest::Approx(oracle::bary_moment(a, b, c)).epsilon(1e-14));
      }
    }
  }
  // Products of two quadratics on random triangles: the library check.
  const auto check = verify::check_mapped_vertex_rule(200, 17);
  CHECK(check.pass);
  CHECK(check.max_error < 1e-12);
}

TEST_CASE("Monte Carlo cross-check of the degree-4 rule") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto f = [](double a, double b) { return a * a * b * b - 3.0 * a * a * a * b + 2.0 * b * b * b * b + a; };
  double mc = 0.0;
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
    mc += f(a, b);
  }
  mc /= samples;
  const QuadRule r = triangle_rule(4);
  double q = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) q += r.weights[i] * f(r.points[i][0], r.points[i][1]);
  CHECK(std::abs(mc - q) < 2e-3);
}

TEST_CASE("selected-point weights") {
  SUBCASE("equilateral lattice reaches the w1/6 floor") {
    verify::Rng rng(1);
    const TriMesh m = verify::random_hex_mesh(rng, 2, 0.0, 0.0, std::numbers::pi / 2);
    for (std::size_t k = 0; k < m.num_cells(); ++k) {
      const SelectedPointRule r = selected_point_weights(m, k);
      for (int i = 0; i < 12; ++i) CHECK(r.weights[i] > 0.0);
      for (int i = 0; i < 6; ++i) CHECK(r.weights[i] >= kVertexWeight / 6.0 - 1e-15);
      // The twelve points plus the residual nodes reproduce cell averages of quadratics.
      const Cell& c = m.cell(k);
      auto f = [](Point2 x) { return 1.0 + x.x - 2.0 * x.y + 3.0 * x.x * x.x - x.x * x.y + 0.5 * x.y * x.y; };
      double q = 0.0;
      for (int i = 0; i < 12; ++i) q += r.weights[i] * f(r.points[i]);
      for (std::size_t i = 0; i < r.residual_points.size(); ++i) q += r.residual_weights[i] * f(r.residual_points[i]);
      double exact = 0.0;
      const QuadRule t = triangle_rule(2);
      for (std::size_t i = 0; i < t.size(); ++i)
        exact += t.weights[i] * f(c.from_barycentric(t.points[i][0], t.points[i][1], t.points[i][2]));
      CHECK(q == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(min_selected_weight(m) > 0.0);
  }
  SUBCASE("jittered meshes") {
    const auto check = verify::check_selected_weights(10, 5);
    CHECK(check.pass);
    CHECK(check.nonpositive == 0);
    CHECK(check.bound_failures == 0);
  }
}
