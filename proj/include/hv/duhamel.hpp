#pragma once

#include <vector>

#include "hv/corrector.hpp"
#include "hv/grid_fourier.hpp"
#include "hv/stepper.hpp"

namespace hv {

// Sources of the boundary system for f = chi_b (omega - omega_c):
//   (d_t - Delta) f = N, (d_y + |xi|) f|_{y=0} = B, f -> b as t -> 0,
// plus the x-weighted versions for x f (tilde quantities).
struct SourceTerms {
  double t = 0.0;
  ModeField b, N, bt, Nt;
  std::vector<cplx> B, Bt;
};

// N uses the stepper's own advection term and B its boundary data, so the two
// discretizations solve the same equations.
SourceTerms assemble_sources(const StateSnapshot& s, const NonlinearEval& ev, const CorrectorState& c);
// chi_b (omega - omega_c) at the snapshot time.
ModeField boundary_difference(const StateSnapshot& s, const CorrectorState& c);

// int_0^Ly K_xi(tau, y, z) F(z) dz for F linear between nodes: the heat part in
// closed form (erf), the R part by 4-point Gauss-Legendre per cell. Nodes above
// zmax_index are ignored.
cplx kernel_apply(const HalfPlaneGrid& g, double xi, double tau, double y, const cplx* F, int zmax_index);

struct DuhamelInput {
  std::vector<double> s;               // increasing sample times, s[0] is the start
  std::vector<ModeField> N;            // interior source at each s
  std::vector<std::vector<cplx>> B;    // boundary data at each s
  ModeField initial;                   // f at s[0] (b when s[0] = 0)
};

// Three-term representation on rows y <= 3 for the listed mode slots. Time
// integrals use sigma = sqrt(t - s) with Gauss-Legendre on each sample interval
// (which removes the s = t endpoint singularity); sources are linear in s between samples.
// Throws with fewer than 16 s-nodes or t outside (s[0], s.back()].
ModeField duhamel_boundary_solution(const DuhamelInput& in, double t, const std::vector<int>& modes);

// Index of the last y-node <= y.
int last_row_below(const HalfPlaneGrid& g, double y);

}  // namespace hv
