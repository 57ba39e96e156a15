#include "hv/fields_init.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hv {

using std::numbers::pi;

std::vector<std::string> vortex_problems(const PointVortexConfig& cfg) {
  std::vector<std::string> errs;
  if (!std::isfinite(cfg.alpha)) errs.push_back("alpha must be finite");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) errs.push_back("delta must lie in (0, 1]");
  return errs;
}

double oseen_profile(double e1, double e2) { return std::exp(-0.25 * (e1 * e1 + e2 * e2)) / (4.0 * pi); }

std::array<double, 2> oseen_velocity(double e1, double e2) {
  double r2 = e1 * e1 + e2 * e2;
  // -expm1(-r2/4)/r2 -> 1/4 as r2 -> 0
  double f = r2 < 1e-12 ? 0.25 : -std::expm1(-0.25 * r2) / r2;
  return {-e2 * f / (2.0 * pi), e1 * f / (2.0 * pi)};
}

double mollified_value(const PointVortexConfig& cfg, double x, double y) {
  double dx = x - kVortexX, dy = y - kVortexY;
  if (dx * dx + dy * dy > 36.0) return 0.0;
  double sd = std::sqrt(cfg.delta);
  return cfg.alpha / cfg.delta * oseen_profile(dx / sd, dy / sd);
}

double core_spacing(const HalfPlaneGrid& g) {
  double h = g.dx();
  for (int j = 0; j + 1 < g.Ny; ++j)
    if (g.y[j + 1] > kVortexY - 6.0 && g.y[j] < kVortexY + 6.0) h = std::max(h, g.hy[j]);
  return h;
}

PhysicalField mollified_vorticity(const PointVortexConfig& cfg, const GridPtr& grid) {
  auto errs = vortex_problems(cfg);
  if (!errs.empty()) throw std::invalid_argument("mollified_vorticity: " + errs.front());
  double h = core_spacing(*grid), need = std::sqrt(cfg.delta) / 6.0;
  if (h > need) {
    std::ostringstream os;
    os << "mollified_vorticity: grid spacing " << h << " near the vortex exceeds sqrt(delta)/6 = " << need
       << "; need Nx >= " << static_cast<int>(std::ceil(grid->Lx / need)) << " and y spacing <= " << need
       << " on [14, 26]";
    throw std::invalid_argument(os.str());
  }
  PhysicalField f(grid);
  for (int i = 0; i < grid->Nx; ++i)
    for (int j = 0; j < grid->Ny; ++j) f(i, j) = mollified_value(cfg, grid->x(i), grid->y[j]);
  return f;
}

double u0_closed(double alpha, double x) { return alpha / pi * kVortexY / (x * x + kVortexY * kVortexY); }

double u0_periodic(double alpha, double x, double Lx) {
  double a = 2.0 * pi * kVortexY / Lx;
  return alpha / Lx * std::sinh(a) / (std::cosh(a) - std::cos(2.0 * pi * x / Lx));
}

double boundary_trace_u0(double x, const PointVortexConfig& cfg) {
  auto errs = vortex_problems(cfg);
  if (!errs.empty()) throw std::invalid_argument("boundary_trace_u0: " + errs.front());
  // polar coordinates about the vortex, rho = r/sqrt(delta); periodic trapezoid in angle
  const double sd = std::sqrt(cfg.delta);
  const int nth = 96;
  auto ring = [&](double rho) {
    double r = rho * sd, acc = 0.0;
    for (int k = 0; k < nth; ++k) {
      double th = 2.0 * pi * k / nth;
      double y1 = kVortexX + r * std::cos(th), y2 = kVortexY + r * std::sin(th);
      acc += y2 / ((x - y1) * (x - y1) + y2 * y2);
    }
    return acc * (2.0 * pi / nth) * rho * oseen_profile(rho, 0.0);
  };
  double err = 0.0;
  double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ring, 0.0, 6.0 / sd, 12, 1e-13,
                                                                            &err);
  if (!std::isfinite(val) || err > 1e-9 * std::max(1.0, std::abs(val)))
    throw std::runtime_error("boundary_trace_u0: quadrature did not converge");
  return cfg.alpha / pi * val;
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double smoothstep_d1(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

double smoothstep_d2(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

static double vortex_r(double x, double y) { return std::hypot(x - kVortexX, y - kVortexY); }

double chi_vp(double x, double y) { return 1.0 - smoothstep(vortex_r(x, y) - 5.0); }

CutoffValue chi_vp_full(double x, double y) {
  double r = vortex_r(x, y), s = r - 5.0;
  CutoffValue c;
  c.v = 1.0 - smoothstep(s);
  if (s <= 0.0 || s >= 1.0) return c;
  double d1 = smoothstep_d1(s), d2 = smoothstep_d2(s);
  c.dx = -d1 * (x - kVortexX) / r;
  c.dy = -d1 * (y - kVortexY) / r;
  c.lap = -d2 - d1 / r;
  return c;
}

double chi_b(double y) { return 1.0 - smoothstep(y - 2.0); }
double chi_b_d1(double y) { return -smoothstep_d1(y - 2.0); }
double chi_b_d2(double y) { return -smoothstep_d2(y - 2.0); }

double chi_m(double x, double y) { return smoothstep(vortex_r(x, y) - 3.0) * smoothstep((y - 0.25) * 8.0); }

double zeta1(double y) { return 1.0 - smoothstep((y - 0.375) * 8.0); }

double zeta2(double x, double y) { return 1.0 - smoothstep(vortex_r(x, y) - 2.0); }

double theta_w(double x, double y) {
  return 1.0 - 0.75 * smoothstep(vortex_r(x, y) - 4.0) * smoothstep((y - 0.375) * 8.0);
}

std::vector<std::string> weight_problems(const WeightParams& p) {
  std::vector<std::string> errs;
  if (!(p.eps0 > 0.0)) errs.push_back("eps0 must be > 0");
  if (!(p.eps1 > 0.0)) errs.push_back("eps1 must be > 0");
  if (!(p.gamma > 0.0)) errs.push_back("gamma must be > 0");
  if (p.mu0 != 0.1) errs.push_back("mu0 is fixed at 0.1");
  if (!(p.beta > 0.5 && p.beta < 1.0)) errs.push_back("beta must lie in (1/2, 1)");
  if (!(p.m > 2.0)) errs.push_back("m must be > 2");
  if (!(p.eps0 * (1.0 + p.mu0) < 0.25)) errs.push_back("eps0 (1 + mu0) must be < 1/4");
  return errs;
}

nlohmann::json weights_to_json(const WeightParams& p) {
  return {{"eps0", p.eps0}, {"eps1", p.eps1}, {"gamma", p.gamma}, {"mu0", p.mu0}, {"beta", p.beta}, {"m", p.m}};
}

WeightParams weights_from_json(const nlohmann::json& j) {
  WeightParams p;
  p.eps0 = j.value("eps0", p.eps0);
  p.eps1 = j.value("eps1", p.eps1);
  p.gamma = j.value("gamma", p.gamma);
  p.mu0 = j.value("mu0", p.mu0);
  p.beta = j.value("beta", p.beta);
  p.m = j.value("m", p.m);
  return p;
}

std::pair<double, double> weight_psi_Psi(double t, double x, double y, const WeightParams& p) {
  if (!(t > 0.0)) throw std::invalid_argument("weight_psi_Psi: t must be > 0");
  double psi = y * y * (1.0 + std::abs(x));
  double q = std::max(0.0, 1.0 - p.gamma * t - theta_w(x, y));
  return {psi, 20.0 * p.eps0 / t * q * q};
}

std::string cutoff_table_csv(double x0, double x1, int nx, double y0, double y1, int ny) {
  std::ostringstream os;
  os.precision(12);
  os << "x,y,chi_vp,chi_m,chi_b,zeta1,zeta2,theta\n";
  for (int i = 0; i < nx; ++i) {
    double x = nx > 1 ? x0 + (x1 - x0) * i / (nx - 1) : x0;
    for (int j = 0; j < ny; ++j) {
      double y = ny > 1 ? y0 + (y1 - y0) * j / (ny - 1) : y0;
      os << x << ',' << y << ',' << chi_vp(x, y) << ',' << chi_m(x, y) << ',' << chi_b(y) << ',' << zeta1(y)
         << ',' << zeta2(x, y) << ',' << theta_w(x, y) << '\n';
    }
  }
  return os.str();
}

}  // namespace hv
