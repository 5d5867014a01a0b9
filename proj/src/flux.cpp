#include "mpsdg/flux.hpp"

#include <sstream>

#include "mpsdg/error.hpp"

namespace mpsdg {

double ddg_flux(const FluxParams& params, const EdgeTracePair& trace) {
  if (!(trace.scale > 0.0)) throw NumericError("ddg_flux: nonpositive length scale");
  const double h = trace.scale;
  return params.beta0 * (trace.outer.u - trace.inner.u) / h + 0.5 * (trace.inner.u_g + trace.outer.u_g) +
         params.beta1 * h * (trace.outer.u_gg - trace.inner.u_gg);
}

Vec2 gamma_vector(const std::function<Mat2(double)>& diffusion, double u_edge, Vec2 n) {
  return diffusion(u_edge).apply_transpose(n);
}

double interface_correction(double u_jump, Vec2 testgrad_inner, const Mat2& A_inner, Vec2 n) {
  return 0.5 * dot(A_inner.apply(testgrad_inner), n) * u_jump;
}

double lax_friedrichs(const std::function<Vec2(double)>& flux, double u_inner, double u_outer, Vec2 n,
                      double alpha) {
  return lax_friedrichs(dot(flux(u_inner), n), dot(flux(u_outer), n), u_inner, u_outer, alpha);
}

ParamCheck validate_params(const FluxParams& params, TheoremMode mode) {
  const double b0 = params.beta0, b1 = params.beta1;
  std::ostringstream msg;
  bool ok = true;
  if (b1 < 0.125 || b1 > 0.25) {
    ok = false;
    msg << "beta1 = " << b1 << " outside [1/8, 1/4]; ";
  }
  const double floor = mode == TheoremMode::linear ? 2.25 - 6.0 * b1 : 1.5 - 4.0 * b1;
  if (b0 < floor) {
    ok = false;
    msg << "beta0 = " << b0 << " below " << floor << "; ";
  }
  if (ok) msg << "parameters satisfy the " << (mode == TheoremMode::linear ? "linear" : "nonlinear")
              << " bound-preservation conditions";
  return {ok, msg.str()};
}

}  // namespace mpsdg
