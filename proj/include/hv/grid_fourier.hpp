#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace hv {

using cplx = std::complex<double>;

// Per-grid y stencils for first and second derivatives.
struct DyStencils {
  int width1 = 3, width2 = 4;
  std::vector<int> start1, start2;
  std::vector<double> w1, w2;  // [j*width + m]
};

// Periodic-in-x truncation of the half plane. x nodes are x_i = -Lx/2 + i*dx,
// so x = 0 is node Nx/2. y nodes come from the map
//   y(s) = Ly * expm1(kappa*s) / expm1(kappa),  s in [0,1],
// which is geometric with ratio r = exp(kappa/(Ny-1)); r = 1 is uniform.
// Keeping kappa fixed while refining Ny keeps the map smooth.
struct HalfPlaneGrid {
  double Lx = 160.0;
  int Nx = 256;
  double Ly = 60.0;
  int Ny = 256;
  double grading_ratio = 1.02;
  std::vector<double> y;   // Ny nodes, y[0] = 0, y[Ny-1] = Ly
  std::vector<double> hy;  // Ny-1 spacings
  std::vector<double> wy;  // trapezoid weights on [0, Ly]
  DyStencils st;

  double dx() const { return Lx / Nx; }
  double x(int i) const { return -0.5 * Lx + i * dx(); }
  // signed wavenumber index for storage slot k (FFT order)
  int kk(int k) const { return k < Nx / 2 ? k : k - Nx; }
  double xi(int k) const;
  std::size_t size() const { return static_cast<std::size_t>(Nx) * Ny; }
  double kappa() const;
};

using GridPtr = std::shared_ptr<const HalfPlaneGrid>;

// Checks every invariant; throws std::invalid_argument listing all problems.
GridPtr make_grid(double Lx, int Nx, double Ly, int Ny, double grading_ratio);
// Same map with kappa given directly (used for refinement ladders).
GridPtr make_grid_kappa(double Lx, int Nx, double Ly, int Ny, double kappa);
// Arbitrary strictly increasing nodes from 0 to Ly.
GridPtr make_grid_nodes(double Lx, int Nx, std::vector<double> nodes);
std::vector<std::string> grid_problems(double Lx, int Nx, double Ly, int Ny, double grading_ratio);

nlohmann::json grid_to_json(const HalfPlaneGrid& g);
GridPtr grid_from_json(const nlohmann::json& j);

// Real field, value(i, j) at (x_i, y_j), stored x-major.
struct PhysicalField {
  GridPtr grid;
  std::vector<double> v;
  explicit PhysicalField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
  double& operator()(int i, int j) { return v[static_cast<std::size_t>(i) * grid->Ny + j]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(i) * grid->Ny + j]; }
};

// Profiles f_k(y_j) for every wavenumber slot k in FFT order, stored (k, y) row-major.
struct ModeField {
  GridPtr grid;
  std::vector<cplx> a;
  explicit ModeField(GridPtr g) : grid(std::move(g)), a(grid->size(), cplx(0.0, 0.0)) {}
  cplx& operator()(int k, int j) { return a[static_cast<std::size_t>(k) * grid->Ny + j]; }
  const cplx& operator()(int k, int j) const { return a[static_cast<std::size_t>(k) * grid->Ny + j]; }
  cplx* row(int k) { return a.data() + static_cast<std::size_t>(k) * grid->Ny; }
  const cplx* row(int k) const { return a.data() + static_cast<std::size_t>(k) * grid->Ny; }
};

ModeField to_modes(const PhysicalField& f);
PhysicalField to_physical(const ModeField& F);
// Largest conjugate-symmetry defect relative to max |F|.
double symmetry_defect(const ModeField& F);

enum class DxKind { deriv, abs };
ModeField apply_dx(const ModeField& F, DxKind kind);
ModeField apply_dy(const ModeField& F, int order);
// Zero every mode with |k| > Nx/3.
void dealias(ModeField& F);

// Finite-difference weights for the order-th derivative at z from nodes xs (Fornberg).
std::vector<double> fd_weights(double z, const std::vector<double>& xs, int order);

void dy_profile(const HalfPlaneGrid& g, const cplx* in, cplx* out, int order);
void dy_profile(const HalfPlaneGrid& g, const double* in, double* out, int order);

struct LaplaceInverse {
  ModeField phi;
  std::vector<cplx> trace;  // d_y phi_k(0)
  std::string warning;
};

// Solves (d_y^2 - xi^2) phi = rhs with phi(0) = 0 and the decay closure
// d_y phi(Ly) = -|xi| phi(Ly), per mode, by a conservative three-point scheme.
LaplaceInverse dirichlet_laplacian_inverse(const ModeField& rhs);
// Single profile version; returns d_y phi(0).
cplx dirichlet_solve_profile(const HalfPlaneGrid& g, double xi, const cplx* rhs, cplx* phi);

// Complex tridiagonal solve (Thomas); a = sub, b = diag, c = super.
void tridiag_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<cplx>& d);

}  // namespace hv
