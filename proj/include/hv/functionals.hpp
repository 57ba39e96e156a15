#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "hv/eta_grid.hpp"
#include "hv/fields_init.hpp"
#include "hv/grid_fourier.hpp"
#include "hv/stepper.hpp"
#include "json.hpp"

namespace hv {

// (int |w|^2 <eta>^{2m} d eta)^{1/2}
double norm_L2m(const EtaField& w, double m);
// (||d1 w||^2 + ||d2 w||^2)^{1/2} in L2(m), spectral derivatives
double norm_grad_L2m(const EtaField& w, double m);
// ||G||_{L2(m)} from the radial integral int_0^inf G(r)^2 (1 + r^2)^m 2 pi r dr
double oseen_norm_L2m_radial(double m);
// regression value of oseen_norm_L2m_radial(3), equal to (158 / (16 pi))^{1/2}
inline constexpr double kOseenNormL2m3 = 1.7729382747475821;

// 16 Chebyshev points in (0, mu0 - gamma t); empty when mu0 <= gamma t.
std::vector<double> mu_grid(double t, const WeightParams& p);

// int_0^{1+mu} e^{eps0 (1 + mu) y^2 / t} e^{eps0 (1 + mu - y)_+ |xi|} |f(y)| dy by the
// trapezoid rule on the nodes; the last partial cell uses the linearly
// interpolated integrand.
double norm_mu_t(const HalfPlaneGrid& g, const cplx* f, double xi, double mu, double t, double eps0);
// Same integrand with the sup over the nodes used by norm_mu_t instead of the integral.
double sup_weighted(const HalfPlaneGrid& g, const cplx* f, double xi, double mu, double eps0);

// Y1 and Y2 norms with xi-integrals in the measure d xi / 2 pi, so that
// Y^1 = sum_k and Y^2 = (Lx sum_k)^{1/2} over the Fourier coefficients.
struct YkNorm {
  double Y1 = 0.0, Y2 = 0.0, full = 0.0;  // full = Y1 + Y2 (the Y1 cap Y2 norm)
  bool empty_range = false;
  std::string warning;
  std::vector<double> mu, Y1_mu, Y2_mu;
};
// Conormal derivatives d_x^i (y d_y)^j, i + j <= 3, the beta-weighted top tier
// and the sup over mu_grid. xf (may be null) is added as the (1, x) companion.
YkNorm norm_Yk(const ModeField& f, const ModeField* xf, double t, const WeightParams& p);
// Y^1_{mu,t} + Y^2_{mu,t} of f alone (no derivatives, no sup).
double norm_Y12_mu(const ModeField& f, double mu, double t, const WeightParams& p);

struct EnergyConfig {
  double alpha = 1.0;
  double delta = 0.02;
  WeightParams weights;
  double eta_L = 40.0;  // eta-box for W_R
  int eta_N = 128;
};

// Values may exceed the double range (E_m carries e^{Psi} and e^{5 eps0 / t});
// log10 versions are always finite and E_* then hold +inf.
struct EnergyReport {
  double t = 0.0;
  double E_vp = 0.0, E_m = 0.0, E_b = 0.0, E_total = 0.0;
  double log10_E_m = -std::numeric_limits<double>::infinity();
  double log10_E_total = -std::numeric_limits<double>::infinity();
  bool partial = false;
  std::string warning;
  std::map<std::string, double> constituents;
  nlohmann::json to_json() const;
};

// Accumulates E_vp, E_m, E_b over stored snapshots (sup over history, time
// integral by the trapezoid rule).
class EnergyTracker {
 public:
  explicit EnergyTracker(EnergyConfig cfg);
  EnergyReport add(const StateSnapshot& s);
  const std::vector<EnergyReport>& history() const { return hist_; }

 private:
  EnergyConfig cfg_;
  std::vector<EnergyReport> hist_;
  double sup_vp_ = 0.0, log_sup_m1_ = -std::numeric_limits<double>::infinity();
  double log_int_m2_ = -std::numeric_limits<double>::infinity();
  double log_prev_m2_ = -std::numeric_limits<double>::infinity();
  double sup_band_ = 0.0, prev_t_ = 0.0;
};

// Report at the last snapshot of the history.
EnergyReport energy_report(const std::vector<StateSnapshot>& history, const EnergyConfig& cfg);

}  // namespace hv
