#include "hv/self_similar.hpp"

#include <cmath>
#include <stdexcept>

#include "hv/fields_init.hpp"

namespace hv {

namespace {

struct PhysSample {
  EtaField omega, u, v;
};

// Total vorticity and velocity at X(eta) = (0, 20) + sqrt(s) eta.
PhysSample sample_physical(const StateSnapshot& snap, const EtaGridPtr& eg, double s) {
  const auto& e = *eg;
  const double r = std::sqrt(s);
  std::vector<double> xs(e.N), ys(e.N);
  for (int i = 0; i < e.N; ++i) {
    xs[i] = kVortexX + r * e.at(i);
    ys[i] = kVortexY + r * e.at(i);
  }
  PhysSample p{EtaField(eg), EtaField(eg), EtaField(eg)};
  // strain response of the core: vorticity by trigonometric interpolation, velocity
  // sqrt(s) BS_eta of the sampled field
  EtaField P(eg);
  EtaVelocity UP{EtaField(eg), EtaField(eg), {}};
  if (snap.core.pert && snap.core.alpha != 0.0) {
    std::vector<double> xr(e.N), yr(e.N);
    for (int i = 0; i < e.N; ++i) {
      xr[i] = xs[i] - snap.core.xc;
      yr[i] = ys[i] - snap.core.yc;
    }
    P.v = eta_interpolate_spectral(*snap.core.pert, xr, yr);
    UP = bs_whole_plane(P);
  }
  auto wg = sample_modes(snap.omega, xs, ys);
  auto U = bs_half_plane(snap.omega);
  auto ug = sample_modes(U.u, xs, ys), vg = sample_modes(U.v, xs, ys);
  for (int i = 0; i < e.N; ++i)
    for (int j = 0; j < e.N; ++j) {
      std::size_t q = static_cast<std::size_t>(i) * e.N + j;
      double w = wg[q] + P.v[q], u = ug[q] + r * UP.v1.v[q], v = vg[q] + r * UP.v2.v[q];
      if (snap.core.alpha != 0.0) {
        w += snap.core.vorticity(snap.t, xs[i], ys[j]);
        auto c = snap.core.velocity(snap.t, xs[i], ys[j]);
        u += c[0];
        v += c[1];
      }
      p.omega(i, j) = w;
      p.u(i, j) = u;
      p.v(i, j) = v;
    }
  return p;
}

void check_eta(const EtaGrid& e) {
  std::string m;
  if (e.h() > 0.5) m += " spacing " + std::to_string(e.h()) + " > 0.5;";
  if (0.5 * e.L < 12.0) m += " half-width " + std::to_string(0.5 * e.L) + " < 12;";
  if (!m.empty()) throw std::invalid_argument("self-similar: under-resolved eta-grid:" + m);
}

EtaField cutoff_field(const EtaGridPtr& eg, double s, int which) {
  const double r = std::sqrt(s);
  return sample_eta(eg, [&](double e1, double e2) {
    auto c = chi_vp_full(kVortexX + r * e1, kVortexY + r * e2);
    switch (which) {
      case 0:
        return c.v;
      case 1:
        return r * c.dx;
      case 2:
        return r * c.dy;
      default:
        return s * c.lap;
    }
  });
}

}  // namespace

SelfSimilarState make_self_similar(const StateSnapshot& snap, const EtaGridPtr& eg, double alpha, double delta) {
  check_eta(*eg);
  SelfSimilarState st{snap.t, std::log(snap.t + delta), snap.t + delta,
                      EtaField(eg), EtaField(eg), EtaField(eg), EtaField(eg)};
  if (alpha == 0.0) return st;
  auto p = sample_physical(snap, eg, st.s);
  auto chi = cutoff_field(eg, st.s, 0);
  const auto& e = *eg;
  for (int i = 0; i < e.N; ++i)
    for (int j = 0; j < e.N; ++j) {
      st.W(i, j) = st.s / alpha * chi(i, j) * p.omega(i, j);
      st.W_R(i, j) = st.W(i, j) - chi(i, j) * oseen_profile(e.at(i), e.at(j));
    }
  auto V = bs_whole_plane(st.W_R);
  st.V_R1 = V.v1;
  st.V_R2 = V.v2;
  return st;
}

SelfSimilarResidual self_similar_residual(const std::vector<StateSnapshot>& win, const EtaGridPtr& eg, double alpha,
                                          double delta, double m) {
  if (win.size() < 3) throw std::invalid_argument("self_similar_residual: need 3 consecutive snapshots");
  check_eta(*eg);
  SelfSimilarResidual out;
  const auto& e = *eg;
  const std::size_t c = win.size() / 2;
  const StateSnapshot& S0 = win[c - 1];
  const StateSnapshot& S1 = win[c];
  const StateSnapshot& S2 = win[c + 1];
  double tau0 = std::log(S0.t + delta), tau1 = std::log(S1.t + delta), tau2 = std::log(S2.t + delta);
  out.tau = tau1;
  if (alpha == 0.0) return out;
  if (!(tau0 < tau1 && tau1 < tau2)) throw std::invalid_argument("self_similar_residual: snapshots not increasing in t");

  auto A0 = make_self_similar(S0, eg, alpha, delta);
  auto A1 = make_self_similar(S1, eg, alpha, delta);
  auto A2 = make_self_similar(S2, eg, alpha, delta);
  const double s = A1.s, rs = std::sqrt(s), d = 40.0 / rs;
  const double h1 = tau1 - tau0, h2 = tau2 - tau1;
  EtaField dWR = (-h2 / (h1 * (h1 + h2))) * A0.W_R + ((h2 - h1) / (h1 * h2)) * A1.W_R +
                 (h1 / (h2 * (h1 + h2))) * A2.W_R;

  const EtaField& WR = A1.W_R;
  EtaField WRx = eta_d1(WR), WRy = eta_d2(WR), WRlap = eta_lap(WR);
  EtaField chi = cutoff_field(eg, s, 0), chx = cutoff_field(eg, s, 1), chy = cutoff_field(eg, s, 2),
           chl = cutoff_field(eg, s, 3);
  EtaField G(eg), Gx(eg), Gy(eg), VG1(eg), VG2(eg), VGd1(eg), VGd2(eg), CG(eg);
  for (int i = 0; i < e.N; ++i)
    for (int j = 0; j < e.N; ++j) {
      double a = e.at(i), b = e.at(j), g = oseen_profile(a, b);
      G(i, j) = g;
      Gx(i, j) = -0.5 * a * g;
      Gy(i, j) = -0.5 * b * g;
      auto vg = oseen_velocity(a, b);
      VG1(i, j) = vg[0];
      VG2(i, j) = vg[1];
      auto vd = oseen_velocity(a, b + d);
      VGd1(i, j) = vd[0];
      VGd2(i, j) = vd[1];
      CG(i, j) = chi(i, j) * g;
    }
  // W = chi G + W_R and its gradient
  EtaField Wx = hadamard(chx, G) + hadamard(chi, Gx) + WRx;
  EtaField Wy = hadamard(chy, G) + hadamard(chi, Gy) + WRy;

  const EtaField& VR1 = A1.V_R1;
  const EtaField& VR2 = A1.V_R2;
  auto VRt = bs_whole_plane_offset(reflect_eta(WR), 0.0, d);
  auto BCG = bs_whole_plane(CG);
  auto BCGt = bs_whole_plane_offset(reflect_eta(CG), 0.0, d);

  auto phys = sample_physical(S1, eg, s);
  EtaField Om = phys.omega;
  EtaField Omx = eta_d1(Om), Omy = eta_d2(Om);

  std::map<std::string, EtaField> T;
  for (const char* k : {"d_tau W_R", "alpha V_R.grad G", "alpha V^G.grad W_R", "L W_R", "F1", "F2", "F3", "F4", "F5",
                        "F6", "F7"})
    T.emplace(k, EtaField(eg));
  EtaField res(eg), lhs(eg);
  for (int i = 0; i < e.N; ++i)
    for (int j = 0; j < e.N; ++j) {
      double a = e.at(i), b = e.at(j);
      double g = G(i, j), gx = Gx(i, j), gy = Gy(i, j);
      double wx = Wx(i, j), wy = Wy(i, j);
      double rx = WRx(i, j), ry = WRy(i, j);
      double ch = chi(i, j), cx = chx(i, j), cy = chy(i, j), cl = chl(i, j);
      double vr1 = VR1(i, j), vr2 = VR2(i, j), vt1 = VRt.v1(i, j), vt2 = VRt.v2(i, j);

      double t_dt = dWR(i, j);
      double t_vrg = alpha * (vr1 * gx + vr2 * gy);
      double t_vgw = alpha * (VG1(i, j) * rx + VG2(i, j) * ry);
      double t_L = WRlap(i, j) + 0.5 * (a * rx + b * ry) + WR(i, j);

      // BS[(1 - chi) G] = V^G - BS[chi G]; its tilde at eta + d is V^G(eta + d) - BS[(chi G)*](eta + d)
      double A1v = VG1(i, j) - BCG.v1(i, j), A2v = VG2(i, j) - BCG.v2(i, j);
      double At1 = VGd1(i, j) - BCGt.v1(i, j), At2 = VGd2(i, j) - BCGt.v2(i, j);
      double F1 = alpha * ((A1v - At1 + VGd1(i, j)) * wx + (A2v - At2 + VGd2(i, j)) * wy);
      double F2 = 0.5 * (a * cx + b * cy) * g + 2.0 * (cx * gx + cy * gy) + cl * g;
      double F3 = alpha * (1.0 - ch) * (vr1 * gx + vr2 * gy) - alpha * (vr1 * cx + vr2 * cy) * g;
      double F4 = alpha * (vt1 * (cx * g + ch * gx) + vt2 * (cy * g + ch * gy));
      double F5 = -alpha * (vr1 * rx + vr2 * ry) + alpha * (vt1 * rx + vt2 * ry);
      // velocity of (1 - chi) omega: total minus the inner part (alpha / sqrt s)(V - V~(. + d))
      double V1 = BCG.v1(i, j) + vr1 - BCGt.v1(i, j) - vt1;
      double V2 = BCG.v2(i, j) + vr2 - BCGt.v2(i, j) - vt2;
      double uo = phys.u(i, j) - alpha / rs * V1, vo = phys.v(i, j) - alpha / rs * V2;
      double F6 = -rs * (uo * wx + vo * wy);
      // physical derivatives: d_X = d_eta / sqrt s
      double om = Om(i, j), omx = Omx(i, j) / rs, omy = Omy(i, j) / rs;
      double cX = cx / rs, cY = cy / rs, cL = cl / s;
      double F7 = s * s / alpha *
                  ((phys.u(i, j) * cX + phys.v(i, j) * cY) * om - 2.0 * (cX * omx + cY * omy) - cL * om);

      double L = t_dt + t_vrg + t_vgw - t_L;
      double R = F1 + F2 + F3 + F4 + F5 + F6 + F7;
      T.at("d_tau W_R")(i, j) = t_dt;
      T.at("alpha V_R.grad G")(i, j) = t_vrg;
      T.at("alpha V^G.grad W_R")(i, j) = t_vgw;
      T.at("L W_R")(i, j) = t_L;
      T.at("F1")(i, j) = F1;
      T.at("F2")(i, j) = F2;
      T.at("F3")(i, j) = F3;
      T.at("F4")(i, j) = F4;
      T.at("F5")(i, j) = F5;
      T.at("F6")(i, j) = F6;
      T.at("F7")(i, j) = F7;
      lhs(i, j) = L;
      res(i, j) = L - R;
    }
  for (auto& [k, f] : T) out.terms[k] = eta_norm_L2m(f, m);
  out.lhs_norm = eta_norm_L2m(lhs, m);
  out.residual = eta_norm_L2m(res, m);
  return out;
}

}  // namespace hv
