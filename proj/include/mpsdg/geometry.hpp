#pragma once

#include <cmath>

namespace mpsdg {

/// Point or vector in the plane.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = Point2;

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity(double s = 1.0) { return {s, 0.0, 0.0, s}; }

  constexpr Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  constexpr Vec2 apply_transpose(Vec2 v) const {
    return {a11 * v.x + a21 * v.y, a12 * v.x + a22 * v.y};
  }
  /// Largest singular value, i.e. max |A^T n| over unit n.
  double spectral_norm() const {
    const double p = a11 * a11 + a21 * a21;
    const double q = a11 * a12 + a21 * a22;
    const double r = a12 * a12 + a22 * a22;
    const double half_tr = 0.5 * (p + r);
    const double disc = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
    return std::sqrt(half_tr + disc);
  }
};

/// Axis-aligned rectangle.
struct Rect {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

}  // namespace mpsdg
