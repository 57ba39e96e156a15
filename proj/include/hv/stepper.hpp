#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hv/biot_savart.hpp"
#include "hv/grid_fourier.hpp"
#include "hv/vortex_core.hpp"

namespace hv {

// The vorticity is split as omega = omega_core + omega_g: the analytic Oseen
// core (see VortexCore) plus a grid field carrying the boundary layer and all
// interaction. The core is advected with the velocity at its center; the strain
// part of the interaction on the unresolved core is not represented.
struct StepperConfig {
  double alpha = 1.0;
  double delta = 0.02;
  double dt = 1e-3;
  double t_start = 0.0;  // <= 0 picks the smallest t whose layer sqrt(t) spans 4 cells
  bool advect = true;    // false: U.grad(omega) and the BC right side are forced to 0
  bool core = true;      // false: no analytic core (custom initial data only)
  bool core_strain = true;  // evolve the core's strain response (CorePerturbation)
  double t_max = 0.1;       // sizes the strain-response box
  int picard_max = 8;
  double picard_tol = 1e-8;
  double cfl = 0.5;
};
std::vector<std::string> stepper_problems(const StepperConfig& c, const HalfPlaneGrid& g);
// Smallest t with sqrt(t) >= y[4].
double default_t_start(const HalfPlaneGrid& g);

struct CflError : std::runtime_error {
  double suggested_dt;
  CflError(const std::string& m, double s) : std::runtime_error(m), suggested_dt(s) {}
};

struct StepInfo {
  double t = 0.0;
  double bc_residual = 0.0;  // max_xi |g(omega^{n+1}) - g used in the final solve|
  int iterations = 0;
  bool diverged = false;
  double cfl = 0.0;  // dt * max(|u|/dx + |v|/dy)
};

struct StateSnapshot {
  double t = 0.0;
  ModeField omega;  // grid part
  VortexCore core;
};

// Per-state derived quantities: advection term, boundary data and core drift.
struct NonlinearEval {
  ModeField N;
  std::vector<cplx> g;  // (d_y + |xi|) omega_g(0) data
  std::array<double, 2> drift{0.0, 0.0};
  std::array<double, 4> strain{0.0, 0.0, 0.0, 0.0};  // grad of the grid-part velocity at the core center
  double speed_rate = 0.0;  // max(|u|/dx + |v|/dy)
};

// u d_x omega + v d_y omega, spectral in x with 2/3 dealiasing, finite differences in y.
ModeField nonlinear_term(const ModeField& omega, const VelocityModes& U);
// Same with the total velocity (grid part plus core) acting on the grid part.
NonlinearEval evaluate_nonlinear(const ModeField& omega_g, const VortexCore* core, double t, bool advect);

class Stepper {
 public:
  // Starts at t_start from the linear boundary layer -u0_xi K_xi(t, y, 0),
  // rescaled per mode to exact discrete no-slip.
  Stepper(GridPtr grid, StepperConfig cfg);
  // Custom initial grid field, no core unless cfg.core.
  Stepper(GridPtr grid, StepperConfig cfg, ModeField omega0, double t0);

  StepInfo step();
  double t() const { return t_; }
  const ModeField& omega() const { return w_; }
  const VortexCore& core() const { return core_; }
  const StepperConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }
  StateSnapshot snapshot() const { return {t_, w_, core_}; }
  // advection term and BC data of the current state
  const NonlinearEval& current() const { return cur_; }
  // warning from the strain-response box, empty when fine
  std::string core_warning() const { return pert_ ? pert_->warning : std::string(); }

  double total_vorticity() const;
  // boundary slip u(x, 0) of the total field, per mode
  std::vector<cplx> slip_modes() const;

 private:
  void solve(const ModeField& Nstar, const std::vector<cplx>& g, ModeField& out) const;

  GridPtr grid_;
  StepperConfig cfg_;
  double t_ = 0.0;
  int nsteps_ = 0;
  ModeField w_, wprev_;
  VortexCore core_;
  double core_prev_xc_ = 0.0, core_prev_yc_ = 0.0;
  std::shared_ptr<CorePerturbation> pert_;
  NonlinearEval cur_, prev_;
};

// Total vorticity (grid part plus core) on the grid nodes.
PhysicalField total_vorticity_field(const StateSnapshot& s);
// Total vorticity at an arbitrary point.
double total_vorticity_at(const StateSnapshot& s, double x, double y);

}  // namespace hv
