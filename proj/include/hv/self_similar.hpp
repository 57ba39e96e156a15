#pragma once

#include <map>
#include <string>
#include <vector>

#include "hv/biot_savart.hpp"
#include "hv/eta_grid.hpp"
#include "hv/stepper.hpp"

namespace hv {

// (alpha / s) W(eta, tau) = chi_vp omega with eta = (X - (0, 20)) / sqrt(s),
// s = t + delta, tau = log s; W_R = W - chi_vp G and V_R = BS[W_R].
struct SelfSimilarState {
  double t = 0.0, tau = 0.0, s = 0.0;
  EtaField W, W_R, V_R1, V_R2;
};

// Throws when the eta-grid does not resolve G (h > 0.5) or is too small to hold
// it (half-width < 12).
SelfSimilarState make_self_similar(const StateSnapshot& snap, const EtaGridPtr& eg, double alpha, double delta);

struct SelfSimilarResidual {
  double tau = 0.0;
  double residual = 0.0;   // ||LHS - sum F_i||_{L2(m)}
  double lhs_norm = 0.0;   // ||LHS||_{L2(m)}
  std::map<std::string, double> terms;  // L2(m) norm of every term
};

// Residual of the W_R equation at the middle snapshot of three consecutive
// ones; d_tau by the three-point formula on the nonuniform tau nodes.
SelfSimilarResidual self_similar_residual(const std::vector<StateSnapshot>& window, const EtaGridPtr& eg,
                                          double alpha, double delta, double m = 3.0);

}  // namespace hv
