#include <exception>

#include "mpsdg/assembly.hpp"

namespace mpsdg {

namespace {

// Exceptions must not cross an OpenMP region boundary; the first one thrown
// by any thread is kept and rethrown after the loop.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(mpsdg_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

// Two phases: one flux evaluation per edge point, then a per-cell gather in
// the same order as the serial path, so both paths give identical numbers.
void SpatialOperator::residual_parallel(const DGField& u, double t, Residual& out) const {
  const long nf = static_cast<long>(faces_.size());
  std::vector<PointFlux> flux(faces_.size() * nq_);
  ExceptionSlot slot;

#pragma omp parallel for schedule(static)
  for (long f = 0; f < nf; ++f) {
    slot.run([&] {
      for (std::size_t q = 0; q < nq_; ++q) {
        flux[static_cast<std::size_t>(f) * nq_ + q] = point_flux(u, t, static_cast<std::size_t>(f), q);
      }
    });
  }
  slot.rethrow();

  const long nc = static_cast<long>(mesh_->num_cells());
#pragma omp parallel for schedule(static)
  for (long kk = 0; kk < nc; ++kk) {
    slot.run([&] {
      const auto k = static_cast<std::size_t>(kk);
      std::array<double, 6> r{};
      add_volume(u, k, r);
      for (const Side& side : sides_[k]) {
        for (std::size_t q = 0; q < nq_; ++q) add_edge_point(u, k, side, q, flux[side.face * nq_ + q], r);
      }
      finish_cell(k, r, out[k]);
    });
  }
  slot.rethrow();
}

}  // namespace mpsdg
