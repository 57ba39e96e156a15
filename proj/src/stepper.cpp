#include "hv/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hv/boundary_kernels.hpp"
#include "hv/fields_init.hpp"
#include "hv/parallel.hpp"

namespace hv {

std::vector<std::string> stepper_problems(const StepperConfig& c, const HalfPlaneGrid& g) {
  std::vector<std::string> p;
  if (!std::isfinite(c.alpha)) p.push_back("alpha must be finite");
  if (!(c.delta > 0.0)) p.push_back("delta must be > 0");
  if (!(c.dt > 0.0)) p.push_back("dt must be > 0");
  if (c.t_start < 0.0) p.push_back("t_start must be >= 0");
  if (c.picard_max < 1) p.push_back("picard_max must be >= 1");
  if (!(c.picard_tol > 0.0)) p.push_back("picard_tol must be > 0");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) p.push_back("cfl must lie in (0, 1]");
  if (c.core && g.Ly < kVortexY + 10.0) p.push_back("Ly must exceed 30 to hold the vortex core");
  if (c.t_start > 0.0 && c.t_start < default_t_start(g))
    p.push_back("t_start too small: the layer sqrt(t_start) must span 4 y-cells (t_start >= " +
                std::to_string(default_t_start(g)) + ")");
  return p;
}

double default_t_start(const HalfPlaneGrid& g) { return g.y[4] * g.y[4]; }

ModeField nonlinear_term(const ModeField& omega, const VelocityModes& U) {
  ModeField W = omega, Um = U.u, Vm = U.v;
  dealias(W);
  dealias(Um);
  dealias(Vm);
  PhysicalField u = to_physical(Um), v = to_physical(Vm);
  PhysicalField wx = to_physical(apply_dx(W, DxKind::deriv)), wy = to_physical(apply_dy(W, 1));
  PhysicalField prod(omega.grid);
  for (std::size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = u.v[i] * wx.v[i] + v.v[i] * wy.v[i];
  ModeField N = to_modes(prod);
  dealias(N);
  return N;
}

NonlinearEval evaluate_nonlinear(const ModeField& omega_g, const VortexCore* core, double t, bool advect) {
  const auto& g = *omega_g.grid;
  NonlinearEval ev{ModeField(omega_g.grid), std::vector<cplx>(g.Nx, cplx(0.0, 0.0)), {0.0, 0.0}, {0.0, 0.0, 0.0, 0.0},
                   0.0};
  if (!advect) return ev;
  ModeField W = omega_g;
  dealias(W);
  VelocityModes vg = bs_half_plane(W);
  PhysicalField u = to_physical(vg.u), v = to_physical(vg.v);
  if (core) {
    parallel_for(g.Nx, [&](std::size_t iz) {
      int i = static_cast<int>(iz);
      for (int j = 0; j < g.Ny; ++j) {
        auto c = core->velocity(t, g.x(i), g.y[j]);
        u(i, j) += c[0];
        v(i, j) += c[1];
      }
    });
  }
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) {
      double hy = j < g.Ny - 1 ? g.hy[j] : g.hy[j - 1];
      if (j > 0) hy = std::min(hy, g.hy[j - 1]);
      ev.speed_rate = std::max(ev.speed_rate, std::abs(u(i, j)) / g.dx() + std::abs(v(i, j)) / hy);
    }
  VelocityModes U{to_modes(u), to_modes(v), {}};
  ev.N = nonlinear_term(W, U);
  auto inv = dirichlet_laplacian_inverse(ev.N);
  if (core) {
    ev.drift = core->self_drift();
    ev.drift[0] += eval_modes_at(vg.u, core->xc, core->yc);
    ev.drift[1] += eval_modes_at(vg.v, core->xc, core->yc);
    // grad of the grid-part velocity at the center by central differences
    const double hg = 0.05, X = core->xc, Y = core->yc;
    for (int c = 0; c < 2; ++c) {
      const ModeField& F = c == 0 ? vg.u : vg.v;
      double gx = (eval_modes_at(F, X + hg, Y) - eval_modes_at(F, X - hg, Y)) / (2.0 * hg);
      double gy = (eval_modes_at(F, X, Y + hg) - eval_modes_at(F, X, Y - hg)) / (2.0 * hg);
      ev.strain[2 * c] = gx;
      ev.strain[2 * c + 1] = gy;
    }
  }
  for (int k = 0; k < g.Nx; ++k) {
    double xi = g.xi(k);
    ev.g[k] = inv.trace[k];
    if (core) ev.g[k] -= cplx(std::abs(xi) * ev.drift[1], xi * ev.drift[0]) * core->wall_mode(xi);
  }
  return ev;
}

namespace {

bool zeroed_mode(const HalfPlaneGrid& g, int k) { return g.Nx % 2 == 0 && k == g.Nx / 2; }

VortexCore make_core(const HalfPlaneGrid& g, const StepperConfig& c) {
  VortexCore v;
  v.alpha = c.core ? c.alpha : 0.0;
  v.delta = c.delta;
  v.xc = kVortexX;
  v.yc = kVortexY;
  v.Lx = g.Lx;
  return v;
}

void check_config(const StepperConfig& cfg, const HalfPlaneGrid& g) {
  auto p = stepper_problems(cfg, g);
  if (p.empty()) return;
  std::string m = "stepper config:";
  for (auto& s : p) m += "\n  " + s;
  throw std::invalid_argument(m);
}

}  // namespace

Stepper::Stepper(GridPtr grid, StepperConfig cfg)
    : grid_(std::move(grid)), cfg_(cfg), w_(grid_), wprev_(grid_), cur_{ModeField(grid_), {}, {}, {}, 0.0},
      prev_{ModeField(grid_), {}, {}, {}, 0.0} {
  check_config(cfg_, *grid_);
  const auto& g = *grid_;
  t_ = cfg_.t_start > 0.0 ? cfg_.t_start : default_t_start(g);
  core_ = make_core(g, cfg_);
  if (cfg_.core && cfg_.core_strain && cfg_.alpha != 0.0)
    pert_ = std::make_shared<CorePerturbation>(cfg_.delta, cfg_.t_max);
  parallel_for(g.Nx, [&](std::size_t kz) {
    int k = static_cast<int>(kz);
    if (zeroed_mode(g, k) || std::abs(g.kk(k)) > g.Nx / 3) return;
    double xi = g.xi(k);
    cplx u0 = core_.wall_mode(xi);
    if (std::abs(u0) < 1e-300) return;
    std::vector<cplx> p(g.Ny), u(g.Ny), v(g.Ny);
    for (int j = 0; j < g.Ny - 1; ++j) p[j] = -u0 * kernel_K(xi, t_, g.y[j], 0.0);
    p[g.Ny - 1] = 0.0;
    bs_half_plane_profile(g, xi, p.data(), u.data(), v.data());
    // rescale so the discrete slip of the total field vanishes
    cplx c = -u0 / u[0];
    for (int j = 0; j < g.Ny; ++j) w_(k, j) = c.real() * p[j];
  });
  wprev_ = w_;
  core_prev_xc_ = core_.xc;
  core_prev_yc_ = core_.yc;
  cur_ = evaluate_nonlinear(w_, &core_, t_, cfg_.advect);
}

Stepper::Stepper(GridPtr grid, StepperConfig cfg, ModeField omega0, double t0)
    : grid_(std::move(grid)), cfg_(cfg), t_(t0), w_(std::move(omega0)), wprev_(grid_),
      cur_{ModeField(grid_), {}, {}, {}, 0.0}, prev_{ModeField(grid_), {}, {}, {}, 0.0} {
  if (w_.grid != grid_) throw std::invalid_argument("stepper: initial field lives on a different grid");
  cfg_.t_start = 0.0;
  check_config(cfg_, *grid_);
  core_ = make_core(*grid_, cfg_);
  if (cfg_.core && cfg_.core_strain && cfg_.alpha != 0.0)
    pert_ = std::make_shared<CorePerturbation>(cfg_.delta, cfg_.t_max);
  wprev_ = w_;
  core_prev_xc_ = core_.xc;
  core_prev_yc_ = core_.yc;
  cur_ = evaluate_nonlinear(w_, cfg_.core ? &core_ : nullptr, t_, cfg_.advect);
}

void Stepper::solve(const ModeField& Nstar, const std::vector<cplx>& gb, ModeField& out) const {
  const auto& g = *grid_;
  const double dt = cfg_.dt;
  const bool bdf2 = nsteps_ > 0;
  const double c0 = bdf2 ? 1.5 / dt : 1.0 / dt;
  const int n = g.Ny;
  parallel_for(g.Nx, [&](std::size_t kz) {
    int k = static_cast<int>(kz);
    cplx* o = out.row(k);
    if (zeroed_mode(g, k)) {
      std::fill(o, o + n, cplx(0.0, 0.0));
      return;
    }
    double xi = g.xi(k), a = std::abs(xi), x2 = xi * xi;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
    std::vector<cplx> d(n);
    const cplx* wn = w_.row(k);
    const cplx* wp = wprev_.row(k);
    const cplx* N = Nstar.row(k);
    auto hist = [&](int j) { return bdf2 ? (2.0 * wn[j] - 0.5 * wp[j]) / dt : wn[j] / dt; };
    {
      double h = g.hy[0], w = g.wy[0];
      di[0] = c0 + x2 + (1.0 / h - a) / w;
      up[0] = -1.0 / (h * w);
      d[0] = hist(0) - N[0] - gb[k] / w;
    }
    for (int j = 1; j < n - 1; ++j) {
      double w = g.wy[j], am = 1.0 / (g.hy[j - 1] * w), ap = 1.0 / (g.hy[j] * w);
      lo[j] = -am;
      up[j] = -ap;
      di[j] = c0 + x2 + am + ap;
      d[j] = hist(j) - N[j];
    }
    di[n - 1] = 1.0;
    d[n - 1] = 0.0;
    tridiag_solve(lo, di, up, d);
    std::copy(d.begin(), d.end(), o);
  });
}

StepInfo Stepper::step() {
  const auto& g = *grid_;
  const double dt = cfg_.dt;
  StepInfo info;
  info.cfl = dt * cur_.speed_rate;
  if (info.cfl > cfg_.cfl) {
    double sdt = 0.9 * cfg_.cfl / cur_.speed_rate;
    std::ostringstream os;
    os << "CFL violation at t = " << t_ << ": dt * max(|u|/dx + |v|/dy) = " << info.cfl << " > " << cfg_.cfl
       << "; suggested dt <= " << sdt;
    throw CflError(os.str(), sdt);
  }
  const bool bdf2 = nsteps_ > 0;

  ModeField Nuse(grid_);
  std::vector<cplx> guse(g.Nx);
  for (std::size_t i = 0; i < Nuse.a.size(); ++i)
    Nuse.a[i] = bdf2 ? 2.0 * cur_.N.a[i] - prev_.N.a[i] : cur_.N.a[i];
  for (int k = 0; k < g.Nx; ++k) guse[k] = bdf2 ? 2.0 * cur_.g[k] - prev_.g[k] : cur_.g[k];
  std::array<double, 2> drift;
  for (int c = 0; c < 2; ++c) drift[c] = bdf2 ? 2.0 * cur_.drift[c] - prev_.drift[c] : cur_.drift[c];

  ModeField wnew(grid_);
  VortexCore cnew = core_;
  NonlinearEval ev{ModeField(grid_), {}, {0.0, 0.0}, {}, 0.0};
  double last = HUGE_VAL;
  for (int m = 0; m < cfg_.picard_max; ++m) {
    solve(Nuse, guse, wnew);
    for (int c = 0; c < 2; ++c) {
      double x0 = c == 0 ? core_.xc : core_.yc, xp = c == 0 ? core_prev_xc_ : core_prev_yc_;
      double x1 = bdf2 ? (4.0 * x0 - xp + 2.0 * dt * drift[c]) / 3.0 : x0 + dt * drift[c];
      (c == 0 ? cnew.xc : cnew.yc) = x1;
    }
    ev = evaluate_nonlinear(wnew, cfg_.core ? &cnew : nullptr, t_ + dt, cfg_.advect);
    double res = 0.0;
    for (int k = 0; k < g.Nx; ++k) res = std::max(res, std::abs(ev.g[k] - guse[k]));
    info.iterations = m + 1;
    info.bc_residual = res;
    if (res <= cfg_.picard_tol) break;
    if (m > 0 && res > last) {
      info.diverged = true;
      break;
    }
    last = res;
    Nuse = ev.N;
    guse = ev.g;
    drift = ev.drift;
  }
  if (pert_) {
    pert_->advance(t_, dt, core_, cur_.strain);
    cnew.pert = std::make_shared<const EtaField>(pert_->w);
  }
  core_prev_xc_ = core_.xc;
  core_prev_yc_ = core_.yc;
  core_ = cnew;
  wprev_ = std::move(w_);
  w_ = std::move(wnew);
  prev_ = std::move(cur_);
  cur_ = std::move(ev);
  t_ += dt;
  ++nsteps_;
  info.t = t_;
  return info;
}

double Stepper::total_vorticity() const {
  const auto& g = *grid_;
  double s = 0.0;
  for (int j = 0; j < g.Ny; ++j) s += g.wy[j] * w_(0, j).real();
  s *= g.Lx;
  if (cfg_.core) {
    double r = 2.0 * std::sqrt(core_.s(t_));
    s += core_.alpha * 0.5 * (std::erf((g.Ly - core_.yc) / r) + std::erf(core_.yc / r));
  }
  return s;
}

std::vector<cplx> Stepper::slip_modes() const {
  const auto& g = *grid_;
  auto U = bs_half_plane(w_);
  std::vector<cplx> s(g.Nx);
  for (int k = 0; k < g.Nx; ++k) {
    s[k] = U.u(k, 0);
    if (cfg_.core && !zeroed_mode(g, k)) s[k] += core_.wall_mode(g.xi(k));
  }
  return s;
}

PhysicalField total_vorticity_field(const StateSnapshot& s) {
  PhysicalField f = to_physical(s.omega);
  const auto& g = *s.omega.grid;
  if (s.core.alpha != 0.0)
    for (int i = 0; i < g.Nx; ++i)
      for (int j = 0; j < g.Ny; ++j) f(i, j) += s.core.vorticity(s.t, g.x(i), g.y[j]);
  return f;
}

double total_vorticity_at(const StateSnapshot& s, double x, double y) {
  double v = eval_modes_at(s.omega, x, y);
  if (s.core.alpha != 0.0) v += s.core.vorticity(s.t, x, y);
  if (s.core.alpha != 0.0 && s.core.pert)
    v += eta_interpolate_spectral(*s.core.pert, {x - s.core.xc}, {y - s.core.yc})[0];
  return v;
}

}  // namespace hv
