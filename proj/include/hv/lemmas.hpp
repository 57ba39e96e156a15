#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hv/fields_init.hpp"
#include "json.hpp"

namespace hv {

// {lemma, lattice, fitted_constant, max_violation} plus per-sample details.
struct LemmaReport {
  std::string lemma;
  nlohmann::json lattice;
  double fitted_constant = 0.0;
  double max_violation = 0.0;
  nlohmann::json details;
  nlohmann::json to_json() const;
};

// Analytic recovery: max over single-mode samples (continuous xi, random
// y-profiles) of the ratio of the two sides of the d_x bound, times
// (mu_tilde - mu). The scalar oracle is 1 / (e eps0); max_violation is the
// relative gap to it.
LemmaReport verify_analytic_recovery(double mu, double mu_tilde, double eps0, std::uint64_t seed);
// Same over several (mu, mu_tilde) pairs; also checks that halving
// mu_tilde - mu doubles the max ratio.
LemmaReport verify_analytic_recovery_pairs(double eps0, std::uint64_t seed);

// Product estimate: random band-limited f, g on g's x-grid (exact discrete
// convolution in x, pointwise in y). Ratio = ||fg|| / (sum_xi sup-weighted f * ||g||)
// in Y^1 + Y^2 at (mu, t); max_violation = max(ratio - 1, 0).
LemmaReport verify_product_estimate(const GridPtr& g, double mu, double t, const WeightParams& p, int samples,
                                    std::uint64_t seed);

// Integral lemma: the four scaled left sides over a (theta, beta, zeta, mu)
// lattice with t = theta (mu0 - mu) / gamma, for gamma in gammas.
// max_violation is the largest relative spread across the gamma ladder.
LemmaReport verify_integral_lemma(double mu0, const std::vector<double>& gammas);
// The four left sides at one point (the third with its sup over mu).
std::array<double, 4> integral_lemma_lhs(double mu0, double mu, double beta, double zeta, double gamma, double t);

// Velocity bound ||U||_inf <= C ||w||_{4/3}^{1/2} ||w||_4^{1/2} over 10 cases
// (Gaussians of several widths and random positive blob clusters);
// max_violation is the largest relative deviation of a case from the median C.
LemmaReport verify_velocity_linf(std::uint64_t seed);
// Far-field bound ||U||_{L^inf(A)} <= C(d) ||w||_{L^1} for d in ds; details
// hold C(d); max_violation > 0 when C(d) fails to decrease.
LemmaReport verify_velocity_far_field(const std::vector<double>& ds, std::uint64_t seed);

}  // namespace hv
