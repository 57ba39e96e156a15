#pragma once

#include <array>
#include <string>

#include "hv/eta_grid.hpp"
#include "hv/grid_fourier.hpp"

namespace hv {

struct VelocityModes {
  ModeField u, v;
  std::string warning;
};

// Per-mode half-plane Biot-Savart law by product integration: omega is linear
// between nodes and the exponential kernels are integrated exactly on each cell.
// v_xi(0) = 0 holds exactly. The xi = 0 mode is the |xi| -> 0 limit.
VelocityModes bs_half_plane(const ModeField& omega);
void bs_half_plane_profile(const HalfPlaneGrid& g, double xi, const cplx* w, cplx* u, cplx* v);

// i xi u + d_y v and i xi v - d_y u, per mode.
ModeField divergence_modes(const VelocityModes& U);
ModeField curl_modes(const VelocityModes& U);

struct EtaVelocity {
  EtaField v1, v2;
  std::string warning;
};

// Whole-plane law K(d) = d^perp / (2 pi |d|^2) by a cell-centered sum with the
// self-cell omitted, evaluated as a zero-padded FFT convolution, plus the
// self-cell first-moment correction (h^2 / 4 pi)(d2 w, -d1 w).
EtaVelocity bs_whole_plane(const EtaField& w);
// Sum_j K(eta_i + d - Y_j) w_j h^2 with no correction (d well away from the lattice).
EtaVelocity bs_whole_plane_offset(const EtaField& w, double d1, double d2);
// Direct O(N^4) sum with the same self-cell treatment, for small grids.
EtaVelocity bs_whole_plane_direct(const EtaField& w);
std::array<double, 2> bs_whole_plane_point(const EtaField& w, double e1, double e2);

// w*(Y1, Y2) = w(Y1, -Y2)
EtaField reflect_eta(const EtaField& w);
// V(eta) - V~(eta + (0, 40) e^{-tau/2}) with V = BS[W] and V~(x, y) = (-V1(x, -y), V2(x, -y)).
// Rejects W with mass outside |eta| <= 6 e^{-tau/2}.
EtaVelocity self_similar_image_velocity(const EtaField& W, double tau);

}  // namespace hv
