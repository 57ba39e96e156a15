#include "hv/vortex_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hv/biot_savart.hpp"
#include "hv/fields_init.hpp"
#include "hv/parallel.hpp"

namespace hv {

using std::numbers::pi;

namespace {

double wrap(double d, double L) { return d - L * std::round(d / L); }

// cot(x) - 1/x
cplx cot_minus_inv(cplx x) {
  if (std::abs(x) < 0.1) {
    cplx x2 = x * x;
    return -x * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 / 4725.0)));
  }
  return std::cos(x) / std::sin(x) - 1.0 / x;
}

}  // namespace

double VortexCore::vorticity(double t, double x, double y) const {
  double dx = wrap(x - xc, Lx), dy = y - yc, ss = s(t);
  return alpha / (4.0 * pi * ss) * std::exp(-(dx * dx + dy * dy) / (4.0 * ss));
}

std::array<double, 3> VortexCore::vorticity_grad(double t, double x, double y) const {
  double dx = wrap(x - xc, Lx), dy = y - yc, ss = s(t);
  double w = alpha / (4.0 * pi * ss) * std::exp(-(dx * dx + dy * dy) / (4.0 * ss));
  return {w, -w * dx / (2.0 * ss), -w * dy / (2.0 * ss)};
}

std::array<double, 2> VortexCore::velocity(double t, double x, double y) const {
  // complex velocity w = u - i v
  const cplx I(0.0, 1.0);
  cplx d(wrap(x - xc, Lx), y - yc);
  double r2 = std::norm(d);
  cplx w(0.0, 0.0);
  if (r2 > 0.0) w += alpha * -std::expm1(-r2 / (4.0 * s(t))) / (2.0 * pi * I * d);
  cplx pre = alpha / (2.0 * I * Lx);
  w += pre * cot_minus_inv(pi * d / Lx);
  cplx e = cplx(d.real(), y + yc) * (pi / Lx);
  w -= pre * std::cos(e) / std::sin(e);
  return {w.real(), -w.imag()};
}

std::array<double, 2> VortexCore::self_drift() const {
  return {alpha / (2.0 * Lx) / std::tanh(2.0 * pi * yc / Lx), 0.0};
}

std::array<double, 2> VortexCore::external_velocity(double x, double y) const {
  const cplx I(0.0, 1.0);
  cplx d(wrap(x - xc, Lx), y - yc);
  cplx pre = alpha / (2.0 * I * Lx);
  cplx w = pre * cot_minus_inv(pi * d / Lx);
  cplx e = cplx(d.real(), y + yc) * (pi / Lx);
  w -= pre * std::cos(e) / std::sin(e);
  return {w.real(), -w.imag()};
}

CorePerturbation::CorePerturbation(double delta, double t_max)
    : box([&] {
        double side = 20.0 * std::sqrt(delta + t_max), h = std::sqrt(delta) / 5.0;
        int n = static_cast<int>(std::ceil(side / h / 16.0)) * 16;
        return make_eta_grid(side, std::max(n, 32));
      }()),
      w(box),
      r_prev(box) {}

void CorePerturbation::advance(double t, double dt, const VortexCore& core, const std::array<double, 4>& M) {
  const auto& g = *box;
  const double s = core.s(t), rs = std::sqrt(s), a = core.alpha;
  EtaField wx = eta_d1(w), wy = eta_d2(w);
  auto U1 = bs_whole_plane(w);
  EtaField r(box);
  const auto u0e = core.external_velocity(core.xc, core.yc);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      double x = g.at(i), y = g.at(j);
      double wo = a / s * oseen_profile(x / rs, y / rs);
      double wox = -wo * x / (2.0 * s), woy = -wo * y / (2.0 * s);
      auto vo = oseen_velocity(x / rs, y / rs);
      double uo = a / rs * vo[0], vv = a / rs * vo[1];
      // rows exactly, grid part linearized
      auto ue = core.external_velocity(core.xc + x, core.yc + y);
      double mx = ue[0] - u0e[0] + M[0] * x + M[1] * y, my = ue[1] - u0e[1] + M[2] * x + M[3] * y;
      double u1 = U1.v1(i, j), v1 = U1.v2(i, j);
      r(i, j) = -(uo * wx(i, j) + vv * wy(i, j)) - (u1 * wox + v1 * woy) - (u1 * wx(i, j) + v1 * wy(i, j)) -
                (mx * (wox + wx(i, j)) + my * (woy + wy(i, j)));
    }
  auto E = [dt](double k1, double k2) { return cplx(std::exp(-(k1 * k1 + k2 * k2) * dt), 0.0); };
  EtaField acc(box);
  if (have_prev) {
    EtaField rp = eta_spectral(r_prev, E);
    for (std::size_t q = 0; q < acc.v.size(); ++q) acc.v[q] = w.v[q] + dt * (1.5 * r.v[q] - 0.5 * rp.v[q]);
  } else {
    for (std::size_t q = 0; q < acc.v.size(); ++q) acc.v[q] = w.v[q] + dt * r.v[q];
  }
  w = eta_spectral(acc, E);
  r_prev = std::move(r);
  have_prev = true;
  double edge = eta_edge_ratio(w, 4);
  warning = edge > 1e-6 ? "core perturbation reaches the box edge: edge/max = " + std::to_string(edge) : "";
}

cplx VortexCore::wall_mode(double xi) const {
  return alpha / Lx * std::exp(-std::abs(xi) * yc) * std::exp(cplx(0.0, -xi * xc));
}

double eval_modes_at(const ModeField& F, double x, double y) {
  const auto& g = *F.grid;
  auto it = std::upper_bound(g.y.begin(), g.y.end(), y);
  int j = static_cast<int>(it - g.y.begin()) - 1;
  int j0 = std::clamp(j - 1, 0, g.Ny - 4);
  std::vector<double> ys(g.y.begin() + j0, g.y.begin() + j0 + 4);
  auto w = fd_weights(y, ys, 0);
  double s = 0.0;
  for (int k = 0; k < g.Nx; ++k) {
    cplx c(0.0, 0.0);
    for (int m = 0; m < 4; ++m) c += w[m] * F(k, j0 + m);
    s += (c * std::exp(cplx(0.0, g.xi(k) * x))).real();
  }
  return s;
}

std::vector<double> sample_modes(const ModeField& F, const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto& g = *F.grid;
  std::vector<double> out(xs.size() * ys.size());
  // y interpolation stencils shared by all columns
  std::vector<int> j0(ys.size());
  std::vector<std::vector<double>> w(ys.size());
  for (std::size_t b = 0; b < ys.size(); ++b) {
    auto it = std::upper_bound(g.y.begin(), g.y.end(), ys[b]);
    int j = static_cast<int>(it - g.y.begin()) - 1;
    j0[b] = std::clamp(j - 1, 0, g.Ny - 4);
    std::vector<double> yy(g.y.begin() + j0[b], g.y.begin() + j0[b] + 4);
    w[b] = fd_weights(ys[b], yy, 0);
  }
  parallel_for(xs.size(), [&](std::size_t a) {
    std::vector<double> col(g.Ny, 0.0);
    for (int k = 0; k < g.Nx; ++k) {
      cplx e = std::exp(cplx(0.0, g.xi(k) * xs[a]));
      const cplx* r = F.row(k);
      for (int j = 0; j < g.Ny; ++j) col[j] += (r[j] * e).real();
    }
    for (std::size_t b = 0; b < ys.size(); ++b) {
      double v = 0.0;
      if (ys[b] >= 0.0 && ys[b] <= g.Ly)
        for (int m = 0; m < 4; ++m) v += w[b][m] * col[j0[b] + m];
      out[a * ys.size() + b] = v;
    }
  });
  return out;
}

}  // namespace hv
