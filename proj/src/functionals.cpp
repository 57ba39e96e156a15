#include "hv/functionals.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hv/corrector.hpp"
#include "hv/parallel.hpp"
#include "hv/self_similar.hpp"

namespace hv {

using std::numbers::pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of sum_q exp(l_q)
double logsumexp(const std::vector<double>& l) {
  double m = kNegInf;
  for (double v : l) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : l) s += std::exp(v - m);
  return m + std::log(s);
}

double safe_exp(double x) { return x > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(x); }

// index of the last node <= y
int last_node(const HalfPlaneGrid& g, double y) {
  auto it = std::upper_bound(g.y.begin(), g.y.end(), y);
  return std::max(0, static_cast<int>(it - g.y.begin()) - 1);
}

}  // namespace

double norm_L2m(const EtaField& w, double m) { return eta_norm_L2m(w, m); }

double norm_grad_L2m(const EtaField& w, double m) {
  double a = eta_norm_L2m(eta_d1(w), m), b = eta_norm_L2m(eta_d2(w), m);
  return std::sqrt(a * a + b * b);
}

double oseen_norm_L2m_radial(double m) {
  boost::math::quadrature::exp_sinh<double> q;
  double v = q.integrate([m](double r) {
    double l = -0.5 * r * r + m * std::log1p(r * r);
    return l < -700.0 ? 0.0 : std::exp(l) / (16.0 * pi * pi) * 2.0 * pi * r;
  });
  return std::sqrt(v);
}

std::vector<double> mu_grid(double t, const WeightParams& p) {
  const double top = p.mu0 - p.gamma * t;
  std::vector<double> mu;
  if (!(top > 0.0)) return mu;
  for (int k = 0; k < 16; ++k) mu.push_back(0.5 * top * (1.0 - std::cos((2.0 * k + 1.0) * pi / 32.0)));
  return mu;
}

double norm_mu_t(const HalfPlaneGrid& g, const cplx* f, double xi, double mu, double t, double eps0) {
  const double top = 1.0 + mu, ax = std::abs(xi);
  auto integrand = [&](int j) {
    double y = g.y[j];
    double a = std::abs(f[j]);
    if (a == 0.0) return 0.0;
    return safe_exp(eps0 * top * y * y / t + eps0 * std::max(0.0, top - y) * ax + std::log(a));
  };
  const int J = std::min(last_node(g, top), g.Ny - 1);
  double s = 0.0, prev = integrand(0);
  for (int j = 1; j <= J; ++j) {
    double cur = integrand(j);
    s += 0.5 * g.hy[j - 1] * (prev + cur);
    prev = cur;
  }
  if (J + 1 < g.Ny && g.y[J] < top) {
    double th = (top - g.y[J]) / g.hy[J];
    double end = (1.0 - th) * prev + th * integrand(J + 1);
    s += 0.5 * (top - g.y[J]) * (prev + end);
  }
  return s;
}

double sup_weighted(const HalfPlaneGrid& g, const cplx* f, double xi, double mu, double eps0) {
  const double top = 1.0 + mu, ax = std::abs(xi);
  const int J = std::min(last_node(g, top) + 1, g.Ny - 1);
  double s = 0.0;
  for (int j = 0; j <= J; ++j) s = std::max(s, std::exp(eps0 * std::max(0.0, top - g.y[j]) * ax) * std::abs(f[j]));
  return s;
}

namespace {

// (y d_y)^j f for j = 0..3
std::vector<ModeField> conormal_family(const ModeField& f) {
  std::vector<ModeField> D{f};
  const auto& g = *f.grid;
  for (int j = 1; j <= 3; ++j) {
    ModeField d = apply_dy(D.back(), 1);
    for (int k = 0; k < g.Nx; ++k)
      for (int q = 0; q < g.Ny; ++q) d(k, q) *= g.y[q];
    D.push_back(std::move(d));
  }
  return D;
}

// per mu: (Y1, Y2) of the derivative tiers of one field
std::pair<double, double> tiered(const std::vector<ModeField>& D, double mu, double t, const WeightParams& p) {
  const auto& g = *D[0].grid;
  const double wb = std::pow(p.mu0 - mu - p.gamma * t, p.beta);
  double y1 = 0.0, y2 = 0.0;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (int k = 0; k < g.Nx; ++k) {
        double xi = g.xi(k);
        double n = std::pow(std::abs(xi), i) * norm_mu_t(g, D[j].row(k), xi, mu, t, p.eps0);
        s1 += n;
        s2 += n * n;
      }
      double c = (i + j == 3) ? wb : 1.0;
      y1 += c * s1;
      y2 += c * std::sqrt(g.Lx * s2);
    }
  return {y1, y2};
}

}  // namespace

YkNorm norm_Yk(const ModeField& f, const ModeField* xf, double t, const WeightParams& p) {
  YkNorm out;
  out.mu = mu_grid(t, p);
  if (out.mu.empty()) {
    out.empty_range = true;
    out.warning = "empty mu-range: t = " + std::to_string(t) + " >= mu0 / gamma = " + std::to_string(p.mu0 / p.gamma) +
                  "; Y norms set to 0";
    return out;
  }
  auto D = conormal_family(f);
  std::vector<ModeField> Dx;
  if (xf) Dx = conormal_family(*xf);
  out.Y1_mu.resize(out.mu.size());
  out.Y2_mu.resize(out.mu.size());
  parallel_for(out.mu.size(), [&](std::size_t q) {
    auto [a1, a2] = tiered(D, out.mu[q], t, p);
    if (xf) {
      auto [b1, b2] = tiered(Dx, out.mu[q], t, p);
      a1 += b1;
      a2 += b2;
    }
    out.Y1_mu[q] = a1;
    out.Y2_mu[q] = a2;
  });
  out.Y1 = *std::max_element(out.Y1_mu.begin(), out.Y1_mu.end());
  out.Y2 = *std::max_element(out.Y2_mu.begin(), out.Y2_mu.end());
  out.full = out.Y1 + out.Y2;
  return out;
}

double norm_Y12_mu(const ModeField& f, double mu, double t, const WeightParams& p) {
  const auto& g = *f.grid;
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < g.Nx; ++k) {
    double n = norm_mu_t(g, f.row(k), g.xi(k), mu, t, p.eps0);
    s1 += n;
    s2 += n * n;
  }
  return s1 + std::sqrt(g.Lx * s2);
}

nlohmann::json EnergyReport::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : constituents) c[k] = num(v);
  return {{"t", t},
          {"E_vp", num(E_vp)},
          {"E_m", num(E_m)},
          {"E_b", num(E_b)},
          {"E_total", num(E_total)},
          {"log10_E_m", num(log10_E_m)},
          {"log10_E_total", num(log10_E_total)},
          {"partial", partial},
          {"warning", warning},
          {"constituents", c}};
}

namespace {

struct MiddlePieces {
  double logA = kNegInf;  // log ||e^Psi psi chi_m omega||_{L2 cap L4}
  double logB = kNegInf;  // log ||e^Psi psi grad(chi_m omega)||_{L2}^2
  double band = 0.0;      // ||(1, x) omega||_{H^4(7/8 <= y <= 4)}
};

// sum_{a+b<=4} ||d_x^a d_y^b f||^2 over the band, by Parseval in x
double band_h4_sq(const ModeField& F) {
  const auto& g = *F.grid;
  std::vector<ModeField> dy{F};
  dy.push_back(apply_dy(F, 1));
  dy.push_back(apply_dy(F, 2));
  dy.push_back(apply_dy(dy[1], 2));
  dy.push_back(apply_dy(dy[2], 2));
  const int j0 = last_node(g, 7.0 / 8.0) + (g.y[last_node(g, 7.0 / 8.0)] < 7.0 / 8.0 ? 1 : 0);
  const int j1 = last_node(g, 4.0);
  double s = 0.0;
  for (int b = 0; b <= 4; ++b)
    for (int k = 0; k < g.Nx; ++k) {
      double x2 = g.xi(k) * g.xi(k), mult = 0.0, p = 1.0;
      for (int a = 0; a + b <= 4; ++a) {
        mult += p;
        p *= x2;
      }
      double in = 0.0;
      for (int j = j0; j < j1; ++j)
        in += 0.5 * g.hy[j] * (std::norm(dy[b](k, j)) + std::norm(dy[b](k, j + 1)));
      s += g.Lx * mult * in;
    }
  return s;
}

MiddlePieces middle_pieces(const StateSnapshot& s, const WeightParams& p) {
  const GridPtr& gp = s.omega.grid;
  const auto& g = *gp;
  MiddlePieces out;
  PhysicalField w = total_vorticity_field(s);
  PhysicalField F(gp), xw(gp);
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) {
      F(i, j) = chi_m(g.x(i), g.y[j]) * w(i, j);
      xw(i, j) = g.x(i) * w(i, j);
    }
  ModeField Fm = to_modes(F);
  PhysicalField Fx = to_physical(apply_dx(Fm, DxKind::deriv)), Fy = to_physical(apply_dy(Fm, 1));
  std::vector<double> l2, l4, lg;
  l2.reserve(g.size());
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) {
      if (g.wy[j] <= 0.0) continue;
      auto [psi, Psi] = weight_psi_Psi(s.t, g.x(i), g.y[j], p);
      double lw = std::log(g.dx() * g.wy[j]);
      double a = std::abs(psi * F(i, j));
      if (a > 0.0) {
        l2.push_back(lw + 2.0 * (Psi + std::log(a)));
        l4.push_back(lw + 4.0 * (Psi + std::log(a)));
      }
      double gr = psi * psi * (Fx(i, j) * Fx(i, j) + Fy(i, j) * Fy(i, j));
      if (gr > 0.0) lg.push_back(lw + 2.0 * Psi + std::log(gr));
    }
  out.logA = logaddexp(0.5 * logsumexp(l2), 0.25 * logsumexp(l4));
  out.logB = logsumexp(lg);
  out.band = std::sqrt(band_h4_sq(to_modes(w))) + std::sqrt(band_h4_sq(to_modes(xw)));
  return out;
}

}  // namespace

EnergyTracker::EnergyTracker(EnergyConfig cfg) : cfg_(std::move(cfg)) {
  auto e = weight_problems(cfg_.weights);
  if (!e.empty()) {
    std::string m = "energy: invalid weights:";
    for (auto& s : e) m += " " + s + ";";
    throw std::invalid_argument(m);
  }
}

EnergyReport EnergyTracker::add(const StateSnapshot& s) {
  if (!hist_.empty() && !(s.t > prev_t_)) throw std::invalid_argument("energy: snapshot times must increase");
  const auto& g = *s.omega.grid;
  const auto& p = cfg_.weights;
  EnergyReport r;
  r.t = s.t;

  // near the point vortex
  double wr = 0.0, gwr = 0.0;
  if (cfg_.alpha != 0.0) {
    auto eg = make_eta_grid(cfg_.eta_L, cfg_.eta_N);
    auto ss = make_self_similar(s, eg, cfg_.alpha, cfg_.delta);
    wr = norm_L2m(ss.W_R, p.m);
    gwr = norm_grad_L2m(ss.W_R, p.m);
  }
  sup_vp_ = std::max(sup_vp_, wr + gwr);
  r.E_vp = sup_vp_;

  // middle region
  auto mp = middle_pieces(s, p);
  log_sup_m1_ = std::max(log_sup_m1_, mp.logA);
  if (!hist_.empty()) {
    double dt = s.t - prev_t_;
    log_int_m2_ = logaddexp(log_int_m2_, std::log(0.5 * dt) + logaddexp(log_prev_m2_, mp.logB));
  }
  log_prev_m2_ = mp.logB;
  sup_band_ = std::max(sup_band_, mp.band);
  const double log_pref = 5.0 * p.eps0 / s.t;
  double log_em = logaddexp(log_sup_m1_, 0.5 * log_int_m2_);
  if (sup_band_ > 0.0) log_em = logaddexp(log_em, log_pref + std::log(sup_band_));
  r.log10_E_m = log_em / std::log(10.0);
  r.E_m = log_em == kNegInf ? 0.0 : safe_exp(log_em);

  // near the boundary
  U0Source src{cfg_.alpha, cfg_.delta, true, g.Lx};
  auto c = corrector(s.t, s.omega.grid, src);
  PhysicalField w = total_vorticity_field(s);
  PhysicalField xf(s.omega.grid);
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j) {
      w(i, j) -= c.omega_c(i, j);
      xf(i, j) = g.x(i) * w(i, j);
    }
  ModeField fm = to_modes(w), xm = to_modes(xf);
  auto y = norm_Yk(fm, &xm, s.t, p);
  r.E_b = y.full;
  if (y.empty_range) r.warning = y.warning;

  double log_b = r.E_b > 0.0 ? std::log(r.E_b) : kNegInf, log_vp = r.E_vp > 0.0 ? std::log(r.E_vp) : kNegInf;
  double log_tot = logaddexp(logaddexp(log_vp, log_em), log_b);
  r.log10_E_total = log_tot / std::log(10.0);
  r.E_total = log_tot == kNegInf ? 0.0 : safe_exp(log_tot);
  if (hist_.empty()) {
    r.partial = true;
    if (!r.warning.empty()) r.warning += "; ";
    r.warning += "single snapshot: time integral in E_m is empty";
  }

  const double l10 = std::log(10.0);
  r.constituents = {{"W_R L2(m)", wr},
                    {"grad W_R L2(m)", gwr},
                    {"log10 sup e^Psi psi chi_m omega L2+L4", log_sup_m1_ / l10},
                    {"log10 e^Psi psi grad(chi_m omega) L2L2", 0.5 * log_int_m2_ / l10},
                    {"band H4 (1,x) omega (unweighted sup)", sup_band_},
                    {"log10 e^{5 eps0 / t}", log_pref / l10},
                    {"Y1", y.Y1},
                    {"Y2", y.Y2}};
  prev_t_ = s.t;
  hist_.push_back(r);
  return r;
}

EnergyReport energy_report(const std::vector<StateSnapshot>& history, const EnergyConfig& cfg) {
  if (history.empty()) {
    EnergyReport r;
    r.partial = true;
    r.warning = "missing history";
    return r;
  }
  EnergyTracker tr(cfg);
  EnergyReport r;
  for (const auto& s : history) r = tr.add(s);
  return r;
}

}  // namespace hv
