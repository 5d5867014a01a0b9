#pragma once

#include <cstddef>
#include <functional>

#include "mpsdg/mesh.hpp"
#include "mpsdg/poly2.hpp"

namespace mpsdg {

/// Admissible interval [m(t), M(t)].
struct Bounds {
  std::function<double(double)> lower;
  std::function<double(double)> upper;

  static Bounds constant(double m, double M) {
    return {[m](double) { return m; }, [M](double) { return M; }};
  }
};

struct SlopeLimiterParams {
  double gamma = 1.5;
  double M_tvb = 5.0;
};

/// Scaling factor theta for a single polynomial; 1 when it is already inside.
double mps_theta(double average, const Extrema& ext, double m, double M);

/// Largest distance by which a cell average may lie outside [m, M] before the
/// limiter treats it as a step-size violation instead of round-off.
inline constexpr double kAverageGuard = 1e-11;

/// Cells whose range exceeds [m, M] by at most this much (relative to
/// max(1, |m|, |M|)) count as inside and are not modified.
inline constexpr double kRoundoffSlack = 1e-14;

struct LimiterStats {
  std::size_t limited_cells = 0;
  std::size_t clamped_averages = 0;
};

/// Linear scaling towards the cell average so that every cell polynomial lies
/// in [m(t), M(t)]; cells within kRoundoffSlack of the bounds are unchanged.
/// Throws NumericError naming the first cell whose average is outside the
/// bounds by more than kAverageGuard.
LimiterStats mps_limit(DGField& field, const Bounds& bounds, double t);
/// Serial reference of mps_limit.
LimiterStats mps_limit_serial(DGField& field, const Bounds& bounds, double t);

/// Triangle Pi-Delta slope limiter with a TVB threshold M h^2 on the
/// midpoint deviations. Limited cells become linear; averages are unchanged.
/// Returns the number of limited cells.
std::size_t slope_limit(DGField& field, const TriMesh& mesh, const SlopeLimiterParams& params);

}  // namespace mpsdg
