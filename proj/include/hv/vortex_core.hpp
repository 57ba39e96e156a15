#pragma once

#include <array>
#include <complex>
#include <vector>

#include <memory>
#include <string>

#include "hv/eta_grid.hpp"
#include "hv/grid_fourier.hpp"

namespace hv {

// Lamb-Oseen core (alpha / s) G((X - Xc) / sqrt s), s = t + delta, carried
// analytically because desk-scale grids cannot resolve sqrt(delta). Its velocity
// is the exact x-periodic half-plane field: the Oseen vortex, the point-vortex
// row of its periodic copies, and the image row at the reflected center.
struct VortexCore {
  double alpha = 1.0;
  double delta = 0.02;
  double xc = 0.0, yc = 20.0;
  double Lx = 160.0;
  // strain response omega_1 on a periodic box in X - Xc (physical units); may be null
  std::shared_ptr<const EtaField> pert;

  double s(double t) const { return t + delta; }
  double vorticity(double t, double x, double y) const;
  std::array<double, 3> vorticity_grad(double t, double x, double y) const;  // value, d_x, d_y
  std::array<double, 2> velocity(double t, double x, double y) const;
  // velocity at the center from everything except the core itself (image and periodic rows)
  std::array<double, 2> self_drift() const;
  // periodic and image rows only, at any point
  std::array<double, 2> external_velocity(double x, double y) const;
  // wall slip Fourier coefficient (alpha / Lx) e^{-|xi| yc} e^{-i xi xc}
  std::complex<double> wall_mode(double xi) const;
};

// Response of the core to the rest of the flow, in the frame moving with the center:
//   d_t w + u_O.grad w + u_1.grad omega_O + u_1.grad w - Delta w = -dU.grad(omega_O + w),
// with u_1 = BS[w] and dU = U_ext(Xc + X') - U_ext(Xc): the periodic and image rows
// exactly, the grid part through its gradient M. Diffusion by integrating factor,
// the rest Adams-Bashforth 2.
struct CorePerturbation {
  EtaGridPtr box;
  EtaField w, r_prev;
  bool have_prev = false;
  std::string warning;

  // side covers 10 sqrt(delta + t_max) on each side; spacing sqrt(delta)/5
  CorePerturbation(double delta, double t_max);
  // M = grid-part {du/dx, du/dy, dv/dx, dv/dy} at the center
  void advance(double t, double dt, const VortexCore& core, const std::array<double, 4>& M);
};

// Evaluates a mode field at an arbitrary point: Fourier sum in x, cubic
// interpolation in y.
double eval_modes_at(const ModeField& F, double x, double y);
// Values at every (xs[a], ys[b]), stored a-major; one Fourier sum per x.
std::vector<double> sample_modes(const ModeField& F, const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace hv
