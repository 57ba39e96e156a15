#include "hv/corrector.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hv/boundary_kernels.hpp"

namespace hv {

using boost::math::quadrature::gauss;
using std::numbers::pi;

double U0Source::value(double x) const {
  double base = periodic ? u0_periodic(alpha, x, Lx) : u0_closed(alpha, x);
  return delta > 0.0 ? base * -std::expm1(-9.0 / delta) : base;
}

double U0Source::mode(double xi) const {
  double m = alpha / Lx * std::exp(-kVortexY * std::abs(xi));
  return delta > 0.0 ? m * -std::expm1(-9.0 / delta) : m;
}

namespace {

// Composite 20-point Gauss-Legendre with panels no wider than sqrt(t)/2.
template <class F>
double layered_integral(F&& f, double a, double b, double t) {
  if (b <= a) return 0.0;
  double w = std::min(0.05, 0.5 * std::sqrt(t));
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / w)));
  double s = 0.0;
  for (int m = 0; m < n; ++m) {
    double lo = a + (b - a) * m / n, hi = a + (b - a) * (m + 1) / n;
    s += gauss<double, 20>::integrate(f, lo, hi);
  }
  return s;
}

template <class F>
double transition_integral(F&& f, double t) {
  return layered_integral(f, 2.0, 3.0, t);
}

bool touches_transition(double t, double y) {
  double w = 14.0 * std::sqrt(t);
  return y + w > 2.0;
}

}  // namespace

double corrector_Pu(double t, double y) {
  if (!(t > 0.0)) throw std::invalid_argument("corrector: t must be > 0");
  double c = 0.5 / std::sqrt(t);
  double head = 0.5 * (std::erf(y * c) - std::erf((y - 2.0) * c)) - 0.5 * (std::erf((y + 2.0) * c) - std::erf(y * c));
  if (!touches_transition(t, y)) return head;
  auto f = [&](double z) { return (kernel_g(t, y - z) - kernel_g(t, y + z)) * chi_b(z); };
  return head + layered_integral(f, 2.0, 3.0, t);
}

double corrector_Pw_dn(double t, double y, int n) {
  if (!(t > 0.0)) throw std::invalid_argument("corrector: t must be > 0");
  double v = -2.0 * kernel_g_dn(t, y, n);
  if (!touches_transition(t, y)) return v;
  auto f = [&](double z) { return (kernel_g_dn(t, y - z, n) + kernel_g_dn(t, y + z, n)) * chi_b_d1(z); };
  return v - layered_integral(f, 2.0, 3.0, t);
}

double corrector_Pw(double t, double y) { return corrector_Pw_dn(t, y, 0); }

CorrectorState corrector(double t, const GridPtr& grid, const U0Source& src) {
  if (!(t > 0.0)) throw std::invalid_argument("corrector: t must be > 0");
  int inside = 0;
  for (double y : grid->y)
    if (y <= 2.0 * std::sqrt(t)) ++inside;
  if (inside < 4)
    throw std::invalid_argument("corrector: y-grid has " + std::to_string(inside) +
                                " nodes in [0, 2 sqrt t]; need 4 (refine near y = 0 or raise t)");
  CorrectorState c{t, grid, src, src.delta > 0.0, {}, {}, {}, PhysicalField(grid), PhysicalField(grid)};
  c.u0.resize(grid->Nx);
  for (int i = 0; i < grid->Nx; ++i) c.u0[i] = src.value(grid->x(i));
  c.Pu.resize(grid->Ny);
  c.Pw.resize(grid->Ny);
  for (int j = 0; j < grid->Ny; ++j) {
    c.Pu[j] = corrector_Pu(t, grid->y[j]);
    c.Pw[j] = corrector_Pw(t, grid->y[j]);
  }
  for (int i = 0; i < grid->Nx; ++i)
    for (int j = 0; j < grid->Ny; ++j) {
      c.u_c(i, j) = c.u0[i] * c.Pu[j];
      c.omega_c(i, j) = c.u0[i] * c.Pw[j];
    }
  return c;
}

ModeField corrector_modes(const CorrectorState& c) { return to_modes(c.omega_c); }

std::vector<cplx> corrector_bc_trace(const CorrectorState& c) {
  const auto& g = *c.grid;
  PhysicalField u0f(c.grid);
  for (int i = 0; i < g.Nx; ++i) u0f(i, 0) = c.u0[i];
  auto U = to_modes(u0f);
  double d0 = corrector_Pw_dn(c.t, 0.0, 1), p0 = c.Pw[0];
  std::vector<cplx> tr(g.Nx);
  for (int k = 0; k < g.Nx; ++k) tr[k] = U(k, 0) * (d0 + std::abs(g.xi(k)) * p0);
  return tr;
}

nlohmann::json CorrectorBoundReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (auto& r : rows)
    rj.push_back({{"i", r.i}, {"j", r.j}, {"k", r.k}, {"t", r.t}, {"norm", r.norm}, {"scaled", r.scaled},
                  {"fitted_constant", r.fitted_constant}, {"band", r.band}, {"grows", r.grows}});
  return {{"rows", rj}, {"trace_t", trace_t}, {"trace_norm", trace_norm}, {"trace_slope", trace_slope}};
}

namespace {

// ||e^{eps0|xi|} |xi|^i (1, x) u0_xi||_{L1 + L2} for u0_xi = alpha e^{-20|xi|},
// |(x u0)_xi| = 20 alpha e^{-20|xi|}
double xi_factor(double eps0, double alpha, int i) {
  double b = kVortexY - eps0;
  double l1 = 2.0 * std::tgamma(i + 1.0) / std::pow(b, i + 1);
  double l2 = std::sqrt(2.0 * std::tgamma(2.0 * i + 1.0) / std::pow(2.0 * b, 2 * i + 1));
  return std::abs(alpha) * (1.0 + kVortexY) * (l1 + l2);
}

// (y d_y)^j applied to d_y^k Pw
double conormal(double t, double y, int j, int k) {
  switch (j) {
    case 0:
      return corrector_Pw_dn(t, y, k);
    case 1:
      return y * corrector_Pw_dn(t, y, k + 1);
    case 2:
      return y * corrector_Pw_dn(t, y, k + 1) + y * y * corrector_Pw_dn(t, y, k + 2);
    default:
      throw std::invalid_argument("conormal order > 2");
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

CorrectorBoundReport corrector_bound_report(const std::vector<double>& ts, const WeightParams& p, double alpha,
                                            int max_order) {
  if (!(p.eps0 * (1.0 + p.mu0) < 0.25))
    throw std::invalid_argument("corrector_bound_report: need eps0 (1 + mu0) < 1/4");
  CorrectorBoundReport rep;
  const double top = 1.0 + p.mu0;
  for (int i = 0; i <= max_order; ++i)
    for (int j = 0; j <= max_order; ++j)
      for (int k = 0; k <= max_order; ++k) {
        CorrectorBoundRow row{i, j, k, {}, {}, {}, 0.0, 0.0, false};
        double xf = xi_factor(p.eps0, alpha, i);
        for (double t : ts) {
          double yn = 0.0;
          if (alpha != 0.0) {
            auto f = [&](double y) { return std::exp(p.eps0 * y * y / t) * std::abs(conormal(t, y, j, k)); };
            yn = layered_integral(f, 0.0, top, t);
          }
          double nm = xf * yn;
          row.t.push_back(t);
          row.norm.push_back(nm);
          row.scaled.push_back(std::pow(t, 0.5 * k) * nm);
        }
        auto [mn, mx] = std::minmax_element(row.scaled.begin(), row.scaled.end());
        row.fitted_constant = *mx;
        double mid = 0.5 * (*mx + *mn);
        row.band = mid > 0.0 ? (*mx - *mn) / (2.0 * mid) : 0.0;
        // growth as t -> 0 beyond t^{-k/2}: smallest-t value well above the rest
        std::size_t imin = std::min_element(row.t.begin(), row.t.end()) - row.t.begin();
        row.grows = mid > 0.0 && row.scaled[imin] > 2.0 * mid;
        rep.rows.push_back(std::move(row));
      }
  for (double t : ts) {
    // (d_y + |xi|) omega_c at y = 0 equals u0_xi |xi| Pw(t, 0) since d_y Pw(t, 0) = 0
    double b = kVortexY - p.eps0;
    double l1 = 2.0 / (b * b), l2 = std::sqrt(2.0 * 2.0 / std::pow(2.0 * b, 3));
    double nm = std::abs(alpha) * (1.0 + kVortexY) * (l1 + l2) * std::abs(corrector_Pw(t, 0.0));
    rep.trace_t.push_back(t);
    rep.trace_norm.push_back(nm);
  }
  if (alpha != 0.0 && ts.size() >= 2) rep.trace_slope = fit_slope(rep.trace_t, rep.trace_norm);
  return rep;
}

double corrector_heat_residual(double t, double y, double h) {
  auto res = [&](double s) {
    double k = s * s;  // time step tied to the space step
    double dt = (-corrector_Pu(t + 2 * k, y) + 8 * corrector_Pu(t + k, y) - 8 * corrector_Pu(t - k, y) +
                 corrector_Pu(t - 2 * k, y)) /
                (12 * k);
    double dyy = (-corrector_Pu(t, y + 2 * s) + 16 * corrector_Pu(t, y + s) - 30 * corrector_Pu(t, y) +
                  16 * corrector_Pu(t, y - s) - corrector_Pu(t, y - 2 * s)) /
                 (12 * s * s);
    return dt - dyy;
  };
  double r1 = res(h), r2 = res(0.5 * h);
  return (16.0 * r2 - r1) / 15.0;
}

double corrector_omega_mass(double t) {
  double top = 3.0 + 14.0 * std::sqrt(t);
  return layered_integral([&](double y) { return corrector_Pw(t, y); }, 0.0, top, t);
}

}  // namespace hv
