#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics; only its plain data types are used.

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "mpsdg/geometry.hpp"
#include "mpsdg/poly2.hpp"

namespace oracle {

using mpsdg::Point2;
using mpsdg::QuadraticPoly;

/// Barycentric coordinates of p in triangle (a, b, c) by Cramer's rule.
inline std::array<double, 3> barycentric(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

/// Cell polynomial expanded into monomials of (x, y) and evaluated densely:
/// xi and eta are affine in (x, y), so p = sum over the six basis products.
inline double dense_eval(const QuadraticPoly& p, const std::array<Point2, 3>& v, Point2 x) {
  const auto l = barycentric(v[0], v[1], v[2], x);
  const double xi = l[0], eta = l[1];
  const std::array<double, 6> basis{1.0, xi, eta, xi * xi, xi * eta, eta * eta};
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += p.c[i] * basis[i];
  return s;
}

/// Extrema of p over the reference simplex by brute-force sampling.
inline mpsdg::Extrema sampled_extrema(const QuadraticPoly& p, int n) {
  mpsdg::Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double v = p.at_bary(static_cast<double>(i) / n, static_cast<double>(j) / n);
      e.min = std::min(e.min, v);
      e.max = std::max(e.max, v);
    }
  }
  return e;
}

/// Sampling on an n x n lattice, then a second n x n lattice over the
/// neighborhood (two lattice steps) of the best sample for each extremum.
inline mpsdg::Extrema refined_extrema(const QuadraticPoly& p, int n) {
  double best_min = std::numeric_limits<double>::infinity(), best_max = -best_min;
  std::array<double, 2> at_min{}, at_max{};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double a = static_cast<double>(i) / n, b = static_cast<double>(j) / n;
      const double v = p.at_bary(a, b);
      if (v < best_min) best_min = v, at_min = {a, b};
      if (v > best_max) best_max = v, at_max = {a, b};
    }
  }
  const double r = 2.0 / n;
  auto zoom = [&](std::array<double, 2> c, bool want_min) {
    double best = want_min ? best_min : best_max;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double a = c[0] - r + 2.0 * r * i / n, b = c[1] - r + 2.0 * r * j / n;
        if (a < 0.0 || b < 0.0 || a + b > 1.0) continue;
        const double v = p.at_bary(a, b);
        best = want_min ? std::min(best, v) : std::max(best, v);
      }
    }
    return best;
  };
  return {zoom(at_min, true), zoom(at_max, false)};
}

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Average over a triangle of l0^a l1^b l2^c: a! b! c! 2 / (a+b+c+2)!.
inline double bary_moment(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) * 2.0 / factorial(a + b + c + 2);
}

/// Mean of u^k over [-1/2, 1/2].
inline double interval_moment(int k) { return k % 2 ? 0.0 : 1.0 / ((k + 1) * std::pow(2.0, k)); }

/// Distance from `origin` along unit `dir` to the segment (a, b); +inf when missed.
inline double ray_segment(Point2 origin, Point2 dir, Point2 a, Point2 b) {
  const Point2 e = b - a;
  const double det = mpsdg::cross(dir, e);
  if (std::abs(det) < 1e-15) return std::numeric_limits<double>::infinity();
  const Point2 w = a - origin;
  const double t = mpsdg::cross(w, e) / det;
  const double s = mpsdg::cross(w, dir) / det;
  if (t <= 1e-14 || s < -1e-14 || s > 1.0 + 1e-14) return std::numeric_limits<double>::infinity();
  return t;
}

inline QuadraticPoly random_poly(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  QuadraticPoly p;
  for (auto& c : p.c) c = g(rng);
  return p;
}

}  // namespace oracle
