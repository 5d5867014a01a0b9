#include "mpsdg/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mpsdg/error.hpp"

namespace mpsdg {

namespace {

enum class CellOutcome { unchanged, limited, clamped_and_limited, out_of_bounds };

CellOutcome limit_cell(QuadraticPoly& p, double m, double big_m) {
  // A cell inside the bounds up to round-off is left alone, so limiting a
  // limited field changes nothing.
  const double slack = kRoundoffSlack * std::max({1.0, std::abs(m), std::abs(big_m)});
  const Extrema ext = extrema_on_cell(p);
  if (ext.min >= m - slack && ext.max <= big_m + slack) return CellOutcome::unchanged;

  double avg = p.average();
  bool clamped = false;
  if (avg < m || avg > big_m) {
    if (avg < m - kAverageGuard || avg > big_m + kAverageGuard) return CellOutcome::out_of_bounds;
    const double target = std::clamp(avg, m, big_m);
    p.c[0] += target - avg;
    avg = target;
    clamped = true;
  }
  const double theta = mps_theta(avg, extrema_on_cell(p), m, big_m);
  if (theta >= 1.0) return clamped ? CellOutcome::clamped_and_limited : CellOutcome::unchanged;
  p.c[0] = theta * (p.c[0] - avg) + avg;
  for (int i = 1; i < QuadraticPoly::kSize; ++i) p.c[i] *= theta;
  return clamped ? CellOutcome::clamped_and_limited : CellOutcome::limited;
}

[[noreturn]] void report_violation(const DGField& field, std::size_t cell, double m, double big_m) {
  throw NumericError("cell " + std::to_string(cell) + " average " + std::to_string(field.cells[cell].average()) +
                     " outside [" + std::to_string(m) + ", " + std::to_string(big_m) +
                     "]: time step too large for bound preservation");
}

void tally(CellOutcome o, LimiterStats& s) {
  if (o == CellOutcome::limited || o == CellOutcome::clamped_and_limited) ++s.limited_cells;
  if (o == CellOutcome::clamped_and_limited) ++s.clamped_averages;
}

double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

}  // namespace

double mps_theta(double average, const Extrema& ext, double m, double M) {
  double theta = 1.0;
  if (ext.max - average > 0.0) theta = std::min(theta, std::abs((M - average) / (ext.max - average)));
  if (average - ext.min > 0.0) theta = std::min(theta, std::abs((m - average) / (ext.min - average)));
  return theta;
}

LimiterStats mps_limit_serial(DGField& field, const Bounds& bounds, double t) {
  const double m = bounds.lower(t), big_m = bounds.upper(t);
  LimiterStats stats;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const CellOutcome o = limit_cell(field.cells[k], m, big_m);
    if (o == CellOutcome::out_of_bounds) report_violation(field, k, m, big_m);
    tally(o, stats);
  }
  return stats;
}

LimiterStats mps_limit(DGField& field, const Bounds& bounds, double t) {
  const double m = bounds.lower(t), big_m = bounds.upper(t);
  const long n = static_cast<long>(field.size());
  long bad = n;
  long limited = 0, clamped = 0;
#pragma omp parallel for schedule(static) reduction(min : bad) reduction(+ : limited, clamped)
  for (long k = 0; k < n; ++k) {
    QuadraticPoly p = field.cells[static_cast<std::size_t>(k)];
    const CellOutcome o = limit_cell(p, m, big_m);
    if (o == CellOutcome::out_of_bounds) {
      bad = std::min(bad, k);
      continue;
    }
    field.cells[static_cast<std::size_t>(k)] = p;
    if (o == CellOutcome::limited || o == CellOutcome::clamped_and_limited) ++limited;
    if (o == CellOutcome::clamped_and_limited) ++clamped;
  }
  if (bad < n) report_violation(field, static_cast<std::size_t>(bad), m, big_m);
  return {static_cast<std::size_t>(limited), static_cast<std::size_t>(clamped)};
}

std::size_t slope_limit(DGField& field, const TriMesh& mesh, const SlopeLimiterParams& params) {
  if (params.gamma < 1.0 || params.M_tvb < 0.0) throw ConfigError("slope limiter needs gamma >= 1, M >= 0");
  std::vector<double> avg(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) avg[k] = field.cells[k].average();

  const long n = static_cast<long>(field.size());
  long limited = 0;
#pragma omp parallel for schedule(static) reduction(+ : limited)
  for (long kk = 0; kk < n; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const Cell& cell = mesh.cell(k);
    QuadraticPoly& p = field.cells[k];
    const double u0 = avg[k];
    const Point2 b0 = cell.centroid();

    // Neighbor centroids (in this cell's frame) and averages; a zero ghost
    // mirrored through the edge midpoint on Dirichlet edges.
    std::array<Point2, 3> bn{};
    std::array<double, 3> un{};
    for (int i = 0; i < 3; ++i) {
      if (const auto& nb = cell.neighbor_ids[i]) {
        bn[i] = mesh.cell(*nb).centroid() - cell.neighbor_shift[i];
        un[i] = avg[*nb];
      } else {
        bn[i] = 2.0 * cell.edge_midpoint(i) - b0;
        un[i] = 0.0;
      }
    }

    const double threshold = params.M_tvb * cell.diameter * cell.diameter;
    std::array<double, 3> delta{};
    bool changed = false;
    for (int i = 0; i < 3; ++i) {
      const Point2 mid = cell.edge_midpoint(i);
      const Vec2 r = mid - b0;
      const double du = evaluate(p, cell, mid) - u0;
      // Write r = a (b_i - b0) + b (b_j - b0) with a, b >= 0 for one j != i.
      double reference = un[i] - u0;
      double best_negativity = std::numeric_limits<double>::infinity();
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        const Vec2 di = bn[i] - b0, dj = bn[j] - b0;
        const double det = cross(di, dj);
        if (std::abs(det) < 1e-14 * norm(di) * norm(dj)) continue;
        const double a = cross(r, dj) / det;
        const double b = cross(di, r) / det;
        const double negativity = std::max(0.0, -a) + std::max(0.0, -b);
        if (negativity < best_negativity) {
          best_negativity = negativity;
          reference = a * (un[i] - u0) + b * (un[j] - u0);
        }
      }
      delta[i] = std::abs(du) <= threshold ? du : minmod(du, params.gamma * reference);
      if (delta[i] != du) changed = true;
    }
    if (!changed) continue;

    double pos = 0.0, neg = 0.0;
    for (double d : delta) {
      pos += std::max(0.0, d);
      neg += std::max(0.0, -d);
    }
    if (pos > 0.0 && neg > 0.0) {
      const double tp = std::min(1.0, neg / pos), tn = std::min(1.0, pos / neg);
      for (double& d : delta) d = tp * std::max(0.0, d) - tn * std::max(0.0, -d);
    } else {
      delta = {0.0, 0.0, 0.0};
    }
    // Linear function with midpoint values u0 + delta_i: vertex values
    // a_i = sum(v) - 2 v_i.
    std::array<double, 3> v{u0 + delta[0], u0 + delta[1], u0 + delta[2]};
    const double s = v[0] + v[1] + v[2];
    const double a0 = s - 2.0 * v[0], a1 = s - 2.0 * v[1], a2 = s - 2.0 * v[2];
    p.c = {a2, a0 - a2, a1 - a2, 0.0, 0.0, 0.0};
    ++limited;
  }
  return static_cast<std::size_t>(limited);
}

}  // namespace mpsdg
