#include "hv/duhamel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hv/boundary_kernels.hpp"
#include "hv/fields_init.hpp"
#include "hv/parallel.hpp"

namespace hv {

using boost::math::quadrature::gauss;

int last_row_below(const HalfPlaneGrid& g, double y) {
  auto it = std::upper_bound(g.y.begin(), g.y.end(), y + 1e-12);
  return std::max(0, static_cast<int>(it - g.y.begin()) - 1);
}

ModeField boundary_difference(const StateSnapshot& s, const CorrectorState& c) {
  const auto& g = *s.omega.grid;
  PhysicalField w = total_vorticity_field(s);
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) w(i, j) = chi_b(g.y[j]) * (w(i, j) - c.omega_c(i, j));
  return to_modes(w);
}

SourceTerms assemble_sources(const StateSnapshot& s, const NonlinearEval& ev, const CorrectorState& c) {
  const GridPtr& gp = s.omega.grid;
  const auto& g = *gp;
  if (std::abs(c.t - s.t) > 1e-12 * std::max(1.0, s.t))
    throw std::invalid_argument("assemble_sources: corrector time does not match the state");
  SourceTerms st{s.t, ModeField(gp), ModeField(gp), ModeField(gp), ModeField(gp), {}, {}};

  PhysicalField w = total_vorticity_field(s);
  PhysicalField wy = to_physical(apply_dy(s.omega, 1));
  PhysicalField adv = to_physical(ev.N);
  ModeField wcm = to_modes(c.omega_c);
  PhysicalField wcxx = to_physical(apply_dx(apply_dx(wcm, DxKind::deriv), DxKind::deriv));
  std::vector<double> pw1(g.Ny);
  for (int j = 0; j < g.Ny; ++j) pw1[j] = corrector_Pw_dn(c.t, g.y[j], 1);

  PhysicalField N(gp), b(gp), bt(gp), xN(gp), f(gp);
  for (int i = 0; i < g.Nx; ++i) {
    double x = g.x(i);
    for (int j = 0; j < g.Ny; ++j) {
      double y = g.y[j], cb = chi_b(y), c1 = chi_b_d1(y), c2 = chi_b_d2(y);
      double wc = c.omega_c(i, j), wcy = c.u0[i] * pw1[j];
      N(i, j) = -cb * adv(i, j) + cb * wcxx(i, j) - (c2 * w(i, j) + 2.0 * c1 * wy(i, j)) + (c2 * wc + 2.0 * c1 * wcy);
      b(i, j) = c.u0[i] * cb * c1;
      bt(i, j) = x * b(i, j);
      xN(i, j) = x * N(i, j);
      f(i, j) = cb * (w(i, j) - wc);
    }
  }
  st.N = to_modes(N);
  st.b = to_modes(b);
  st.bt = to_modes(bt);
  // (d_t - Delta)(x f) = x N - 2 d_x f
  ModeField fm = to_modes(f);
  ModeField fx = apply_dx(fm, DxKind::deriv);
  st.Nt = to_modes(xN);
  for (std::size_t i = 0; i < st.Nt.a.size(); ++i) st.Nt.a[i] -= 2.0 * fx.a[i];

  auto trc = corrector_bc_trace(c);
  st.B.resize(g.Nx);
  for (int k = 0; k < g.Nx; ++k) st.B[k] = ev.g[k] - trc[k];
  // i d_xi B is the transform of x B(x); the commutator [|D_x|, x] adds -i sgn(xi) f(0)
  ModeField Bm(gp);
  for (int k = 0; k < g.Nx; ++k) Bm(k, 0) = st.B[k];
  PhysicalField Bx = to_physical(Bm);
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) Bx(i, j) = j == 0 ? g.x(i) * Bx(i, 0) : 0.0;
  ModeField xB = to_modes(Bx);
  st.Bt.resize(g.Nx);
  for (int k = 0; k < g.Nx; ++k) {
    double sg = g.kk(k) > 0 ? 1.0 : (g.kk(k) < 0 ? -1.0 : 0.0);
    st.Bt[k] = xB(k, 0) - cplx(0.0, sg) * fm(k, 0);
  }
  return st;
}

cplx kernel_apply(const HalfPlaneGrid& g, double xi, double tau, double y, const cplx* F, int zmax_index) {
  const int top = std::min(zmax_index, g.Ny - 1);
  if (!(tau > 0.0)) {
    int j = std::min(last_row_below(g, y), g.Ny - 2);
    double th = (y - g.y[j]) / g.hy[j];
    return (j + 1 <= top ? (1.0 - th) * F[j] + th * F[j + 1] : (j <= top ? (1.0 - th) * F[j] : 0.0));
  }
  const double st = std::sqrt(tau), r = 1.0 / (2.0 * st), reach = 40.0 * st;
  cplx heat(0.0, 0.0);
  for (double c : {y, -y}) {
    for (int j = 0; j < top; ++j) {
      double z0 = g.y[j], z1 = g.y[j + 1];
      if (z1 < c - reach || z0 > c + reach) continue;
      cplx B = (F[j + 1] - F[j]) / (z1 - z0), A = F[j] - B * z0;
      double dE = 0.5 * (std::erf((z1 - c) * r) - std::erf((z0 - c) * r));
      double dG = kernel_g(tau, z1 - c) - kernel_g(tau, z0 - c);
      heat += (A + B * c) * dE - 2.0 * tau * B * dG;
    }
  }
  cplx out = std::exp(-xi * xi * tau) * heat;
  const double a = std::abs(xi);
  if (a == 0.0) return out;
  cplx rp(0.0, 0.0);
  for (int j = 0; j < top; ++j) {
    double z0 = g.y[j], z1 = g.y[j + 1], h = z1 - z0;
    auto fn = [&](double z) {
      double th = (z - z0) / h;
      double R = kernel_R_closed(xi, tau, y, z);
      return std::array<double, 2>{R * (1.0 - th), R * th};
    };
    static const double xs[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double ws[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    double c0 = 0.0, c1 = 0.0;
    for (int q = 0; q < 4; ++q) {
      auto v = fn(0.5 * (z0 + z1) + 0.5 * h * xs[q]);
      c0 += ws[q] * v[0];
      c1 += ws[q] * v[1];
    }
    rp += 0.5 * h * (c0 * F[j] + c1 * F[j + 1]);
  }
  return out + rp;
}

namespace {

// sigma-panels covering one sample interval, with geometric refinement toward sigma = 0
std::vector<std::pair<double, double>> sigma_panels(double lo, double hi) {
  std::vector<std::pair<double, double>> p;
  if (lo > 0.0) {
    p.emplace_back(lo, hi);
    return p;
  }
  double a = hi;
  for (int k = 0; k < 6; ++k) {
    p.emplace_back(0.5 * a, a);
    a *= 0.5;
  }
  p.emplace_back(0.0, a);
  return p;
}

}  // namespace

ModeField duhamel_boundary_solution(const DuhamelInput& in, double t, const std::vector<int>& modes) {
  const std::size_t M = in.s.size();
  if (M < 16) throw std::invalid_argument("duhamel: need at least 16 source samples in time, got " + std::to_string(M));
  if (in.N.size() != M || in.B.size() != M) throw std::invalid_argument("duhamel: source arrays differ in length");
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (!(t > in.s[0]) || t > in.s.back() + tol)
    throw std::invalid_argument("duhamel: t must lie in (s[0], s[last]]");
  const GridPtr& gp = in.initial.grid;
  const auto& g = *gp;
  const int jtop = last_row_below(g, 3.0);
  const int zmax = std::min(jtop + 1, g.Ny - 1);
  ModeField out(gp);
  const std::size_t rows = static_cast<std::size_t>(jtop) + 1;

  parallel_for(modes.size() * rows, [&](std::size_t idx) {
    int k = modes[idx / rows];
    int j = static_cast<int>(idx % rows);
    double xi = g.xi(k), y = g.y[j];
    cplx val = kernel_apply(g, xi, t - in.s[0], y, in.initial.row(k), zmax);
    std::vector<cplx> Fs(zmax + 1);
    for (std::size_t m = 0; m + 1 < M && in.s[m] < t - tol; ++m) {
      double s0 = in.s[m], s1 = std::min(in.s[m + 1], t);
      double ds = in.s[m + 1] - in.s[m];
      const cplx* N0 = in.N[m].row(k);
      const cplx* N1 = in.N[m + 1].row(k);
      cplx B0 = in.B[m][k], B1 = in.B[m + 1][k];
      for (auto [lo, hi] : sigma_panels(std::sqrt(std::max(0.0, t - s1)), std::sqrt(t - s0))) {
        auto integrand = [&](double sig) {
          double s = t - sig * sig, th = (s - s0) / ds;
          for (int z = 0; z <= zmax; ++z) Fs[z] = (1.0 - th) * N0[z] + th * N1[z];
          cplx Bs = (1.0 - th) * B0 + th * B1;
          double tau = sig * sig;
          return 2.0 * sig * (kernel_apply(g, xi, tau, y, Fs.data(), zmax) - kernel_K(xi, tau, y, 0.0) * Bs);
        };
        static const auto& xs = gauss<double, 8>::abscissa();
        static const auto& ws = gauss<double, 8>::weights();
        double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
        cplx acc(0.0, 0.0);
        for (std::size_t q = 0; q < xs.size(); ++q) {
          double w = ws[q];
          if (xs[q] == 0.0) {
            acc += w * integrand(mid);
          } else {
            acc += w * (integrand(mid - hw * xs[q]) + integrand(mid + hw * xs[q]));
          }
        }
        val += hw * acc;
      }
    }
    out(k, j) = val;
  });
  return out;
}

}  // namespace hv
