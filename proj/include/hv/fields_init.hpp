#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hv/grid_fourier.hpp"
#include "json.hpp"

namespace hv {

inline constexpr double kVortexX = 0.0;
inline constexpr double kVortexY = 20.0;

struct PointVortexConfig {
  double alpha = 1.0;
  double delta = 0.02;
};
std::vector<std::string> vortex_problems(const PointVortexConfig& cfg);

// G(eta) = exp(-|eta|^2/4)/(4 pi)
double oseen_profile(double e1, double e2);
// V^G = eta^perp/(2 pi |eta|^2) (1 - exp(-|eta|^2/4)), eta^perp = (-e2, e1)
std::array<double, 2> oseen_velocity(double e1, double e2);

// (alpha/delta) G((X - X0)/sqrt(delta)) restricted to |X - X0| <= 6.
double mollified_value(const PointVortexConfig& cfg, double x, double y);
// Rejects grids with fewer than 6 points across sqrt(delta) near the vortex.
PhysicalField mollified_vorticity(const PointVortexConfig& cfg, const GridPtr& grid);
// Largest x or y spacing within the vortex support.
double core_spacing(const HalfPlaneGrid& g);

// delta -> 0 limit: (alpha/pi) 20/(x^2 + 400).
double u0_closed(double alpha, double x);
// Same limit summed over x-periods of length Lx.
double u0_periodic(double alpha, double x, double Lx);
// Finite delta: the Poisson-kernel integral of the mollified data. Throws on
// quadrature failure.
double boundary_trace_u0(double x, const PointVortexConfig& cfg);

// Quintic smoothstep on [0,1], clamped outside, and its derivatives.
double smoothstep(double s);
double smoothstep_d1(double s);
double smoothstep_d2(double s);

struct CutoffValue {
  double v = 0, dx = 0, dy = 0, lap = 0;
};
double chi_vp(double x, double y);
CutoffValue chi_vp_full(double x, double y);
double chi_b(double y);
double chi_b_d1(double y);
double chi_b_d2(double y);
double chi_m(double x, double y);
double zeta1(double y);
double zeta2(double x, double y);
double theta_w(double x, double y);

struct WeightParams {
  double eps0 = 0.05;
  double eps1 = 0.05;
  double gamma = 200.0;
  double mu0 = 0.1;
  double beta = 0.75;
  double m = 3.0;
};
std::vector<std::string> weight_problems(const WeightParams& p);
nlohmann::json weights_to_json(const WeightParams& p);
WeightParams weights_from_json(const nlohmann::json& j);

// psi = y^2 (1 + |x|), Psi = (20 eps0 / t) (1 - gamma t - theta)_+^2.
std::pair<double, double> weight_psi_Psi(double t, double x, double y, const WeightParams& p);

// CSV table "x,y,chi_vp,chi_m,chi_b,zeta1,zeta2,theta" on a uniform sample.
std::string cutoff_table_csv(double x0, double x1, int nx, double y0, double y1, int ny);

}  // namespace hv
