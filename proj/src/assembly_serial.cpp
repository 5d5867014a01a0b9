#include "mpsdg/assembly.hpp"

namespace mpsdg {

// Reference path: each cell evaluates the fluxes on its own three edges, so
// every interior flux is computed twice. Kept simple on purpose; the
// parallel path must agree with it.
void SpatialOperator::residual_serial(const DGField& u, double t, Residual& out) const {
  for (std::size_t k = 0; k < mesh_->num_cells(); ++k) {
    std::array<double, 6> r{};
    add_volume(u, k, r);
    for (const Side& side : sides_[k]) {
      for (std::size_t q = 0; q < nq_; ++q) {
        add_edge_point(u, k, side, q, point_flux(u, t, side.face, q), r);
      }
    }
    finish_cell(k, r, out[k]);
  }
}

}  // namespace mpsdg
