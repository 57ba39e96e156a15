#pragma once

#include <functional>
#include <vector>

#include "hv/eta_grid.hpp"
#include "json.hpp"

namespace hv {

struct OseenOptions {
  double dtau = 0.01;
  double edge_tol = 1e-6;  // abort once edge/max exceeds this
};

// T_alpha(tau) w0 for d_tau w + alpha (V^G . grad w + V^w . grad G) - L w = 0,
// L = Delta + eta/2 . grad + 1, on the periodic eta-box (side >= 60). Strang
// splitting: the L-flow is exact (heat for e^h - 1, then the dilation
// w -> e^h w(e^{h/2} eta) by 8-point Lagrange interpolation), the advection is
// explicit RK2 with V^w = bs_whole_plane(w).
EtaField linearized_oseen_evolve(const EtaField& w0, double tau, double alpha, const OseenOptions& opt = {});

// Same flow, calling f(tau_k, w) at each of the increasing times taus (> 0).
void linearized_oseen_trajectory(const EtaField& w0, const std::vector<double>& taus, double alpha,
                                 const std::function<void(double, const EtaField&)>& f, const OseenOptions& opt = {});

// Fitted constants of the four semigroup estimates (p = 2) over a fixed
// dictionary of inputs, the small-tau slope of the operator-norm proxy
// max_w ||grad T w|| / ||w||, and the drift of T(tau) G over tau in [0, 2].
struct SemigroupEstimates {
  double alpha = 0.0, m = 3.0;
  int N = 0;
  double dtau = 0.0;
  double C1 = 0, C2 = 0, C3 = 0, C4 = 0;
  double grad_slope = 0.0;
  double steady_drift = 0.0;  // max_tau ||T G - G||_{L2(m)} / ||G||_{L2(m)}
  nlohmann::json table;
};
SemigroupEstimates semigroup_estimates(double alpha, int N, double dtau, double m = 3.0);

}  // namespace hv
