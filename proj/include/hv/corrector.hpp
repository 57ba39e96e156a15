#pragma once

#include <string>
#include <vector>

#include "hv/fields_init.hpp"
#include "hv/grid_fourier.hpp"
#include "json.hpp"

namespace hv {

// Boundary slip of the initial data. For delta > 0 the truncated Gaussian is
// radially symmetric about (0, 20) and the Poisson kernel is harmonic there, so
// the mean-value property gives u0^delta = (1 - e^{-9/delta}) u0 exactly.
struct U0Source {
  double alpha = 1.0;
  double delta = 0.0;  // 0 selects the delta -> 0 limit
  bool periodic = false;
  double Lx = 160.0;
  double value(double x) const;
  // Fourier coefficient (1/Lx) int u0 e^{-i xi x} dx of the periodic version.
  double mode(double xi) const;
};

// y-profiles: u_c = u0(x) Pu(t, y), omega_c = u0(x) Pw(t, y).
double corrector_Pu(double t, double y);
double corrector_Pw(double t, double y);
// d^n/dy^n Pw
double corrector_Pw_dn(double t, double y, int n);

struct CorrectorState {
  double t = 0.0;
  GridPtr grid;
  U0Source source;
  bool delta_flag = false;  // true when the mollified trace is used
  std::vector<double> u0;   // u0(x_i)
  std::vector<double> Pu, Pw;
  PhysicalField u_c, omega_c;
};

// Rejects t whose layer has fewer than 4 y-nodes in [0, 2 sqrt t].
CorrectorState corrector(double t, const GridPtr& grid, const U0Source& src);
// omega_c as modes and the traces (d_y + |xi|)(omega_c)_xi(0).
ModeField corrector_modes(const CorrectorState& c);
std::vector<cplx> corrector_bc_trace(const CorrectorState& c);

struct CorrectorBoundRow {
  int i = 0, j = 0, k = 0;
  std::vector<double> t, norm, scaled;  // scaled = t^{k/2} norm
  double fitted_constant = 0.0;
  double band = 0.0;  // max |scaled / mid - 1|, mid = (max + min) / 2
  bool grows = false;
};

struct CorrectorBoundReport {
  std::vector<CorrectorBoundRow> rows;
  std::vector<double> trace_t, trace_norm;
  double trace_slope = 0.0;
  nlohmann::json to_json() const;
};

// Weighted conormal norms of the delta -> 0 corrector with C' = eps0; the
// y-integral runs over [0, 1 + mu0].
CorrectorBoundReport corrector_bound_report(const std::vector<double>& ts, const WeightParams& p, double alpha,
                                            int max_order = 2);

// (d_t - d_y^2) Pu by fourth-order differences, Richardson-combined over steps h and h/2.
double corrector_heat_residual(double t, double y, double h);
// int_0^inf Pw dy by adaptive quadrature.
double corrector_omega_mass(double t);

}  // namespace hv
