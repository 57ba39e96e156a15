#include "hv/grid_fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hv/parallel.hpp"

namespace hv {

namespace {

constexpr double kMaxRatio = 1.05;

void finish_grid(HalfPlaneGrid& g) {
  const int n = g.Ny;
  g.hy.resize(n - 1);
  for (int j = 0; j + 1 < n; ++j) g.hy[j] = g.y[j + 1] - g.y[j];
  g.wy.assign(n, 0.0);
  for (int j = 0; j + 1 < n; ++j) {
    g.wy[j] += 0.5 * g.hy[j];
    g.wy[j + 1] += 0.5 * g.hy[j];
  }
  auto& st = g.st;
  st.start1.resize(n);
  st.start2.resize(n);
  st.w1.assign(static_cast<std::size_t>(n) * st.width1, 0.0);
  st.w2.assign(static_cast<std::size_t>(n) * st.width2, 0.0);
  for (int j = 0; j < n; ++j) {
    int s1 = std::clamp(j - 1, 0, n - 3);
    st.start1[j] = s1;
    std::vector<double> xs1(g.y.begin() + s1, g.y.begin() + s1 + 3);
    auto w1 = fd_weights(g.y[j], xs1, 1);
    for (int m = 0; m < 3; ++m) st.w1[static_cast<std::size_t>(j) * st.width1 + m] = w1[m];
    int s2, len2;
    if (j == 0) {
      s2 = 0;
      len2 = 4;
    } else if (j == n - 1) {
      s2 = n - 4;
      len2 = 4;
    } else {
      s2 = j - 1;
      len2 = 3;
    }
    st.start2[j] = s2;
    std::vector<double> xs2(g.y.begin() + s2, g.y.begin() + s2 + len2);
    auto w2 = fd_weights(g.y[j], xs2, 2);
    for (int m = 0; m < len2; ++m) st.w2[static_cast<std::size_t>(j) * st.width2 + m] = w2[m];
  }
}

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

const PlanPair& plans_for(int Nx, int Ny) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  auto key = std::make_pair(Nx, Ny);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PlanPair p;
  int n[1] = {Nx};
  std::vector<double> rin(static_cast<std::size_t>(Nx) * Ny);
  std::vector<fftw_complex> cout(static_cast<std::size_t>(Nx / 2 + 1) * Ny);
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_many_dft_r2c(1, n, Ny, rin.data(), nullptr, Ny, 1, cout.data(), nullptr, Ny, 1,
                                 flags);
  p.c2r = fftw_plan_many_dft_c2r(1, n, Ny, cout.data(), nullptr, Ny, 1, rin.data(), nullptr, Ny, 1,
                                 flags);
  if (!p.r2c || !p.c2r) throw std::runtime_error("FFTW planning failed");
  return cache.emplace(key, p).first->second;
}

}  // namespace

double HalfPlaneGrid::xi(int k) const { return 2.0 * std::numbers::pi * kk(k) / Lx; }

double HalfPlaneGrid::kappa() const { return (Ny - 1) * std::log(grading_ratio); }

std::vector<std::string> grid_problems(double Lx, int Nx, double Ly, int Ny, double grading_ratio) {
  std::vector<std::string> errs;
  if (!std::isfinite(Lx) || Lx < 80.0) errs.push_back("Lx must be >= 80 (got " + std::to_string(Lx) + ")");
  if (Nx < 8 || Nx % 2 != 0) errs.push_back("Nx must be even and >= 8 (got " + std::to_string(Nx) + ")");
  if (!std::isfinite(Ly) || Ly < 40.0) errs.push_back("Ly must be >= 40 (got " + std::to_string(Ly) + ")");
  if (Ny < 5) errs.push_back("Ny must be >= 5 (got " + std::to_string(Ny) + ")");
  if (!std::isfinite(grading_ratio) || grading_ratio < 1.0 || grading_ratio > kMaxRatio + 1e-12)
    errs.push_back("grading_ratio must lie in [1, 1.05] (got " + std::to_string(grading_ratio) + ")");
  return errs;
}

static void throw_problems(const std::vector<std::string>& errs) {
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid grid:";
  for (auto& e : errs) os << "\n  - " << e;
  throw std::invalid_argument(os.str());
}

GridPtr make_grid(double Lx, int Nx, double Ly, int Ny, double grading_ratio) {
  throw_problems(grid_problems(Lx, Nx, Ly, Ny, grading_ratio));
  return make_grid_kappa(Lx, Nx, Ly, Ny, (Ny - 1) * std::log(grading_ratio));
}

GridPtr make_grid_kappa(double Lx, int Nx, double Ly, int Ny, double kappa) {
  double ratio = Ny > 1 ? std::exp(kappa / (Ny - 1)) : 1.0;
  throw_problems(grid_problems(Lx, Nx, Ly, Ny, ratio));
  auto g = std::make_shared<HalfPlaneGrid>();
  g->Lx = Lx;
  g->Nx = Nx;
  g->Ly = Ly;
  g->Ny = Ny;
  g->grading_ratio = ratio;
  g->y.resize(Ny);
  for (int j = 0; j < Ny; ++j) {
    double s = static_cast<double>(j) / (Ny - 1);
    g->y[j] = kappa < 1e-12 ? Ly * s : Ly * std::expm1(kappa * s) / std::expm1(kappa);
  }
  g->y[0] = 0.0;
  g->y[Ny - 1] = Ly;
  finish_grid(*g);
  return g;
}

GridPtr make_grid_nodes(double Lx, int Nx, std::vector<double> nodes) {
  std::vector<std::string> errs;
  if (nodes.size() < 5) errs.push_back("need at least 5 y nodes");
  if (!nodes.empty() && nodes.front() != 0.0) errs.push_back("first y node must be 0");
  double ratio = 1.0;
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    if (!(nodes[j] > nodes[j - 1])) {
      errs.push_back("y nodes must be strictly increasing");
      break;
    }
    if (j >= 2) {
      double h0 = nodes[j - 1] - nodes[j - 2], h1 = nodes[j] - nodes[j - 1];
      ratio = std::max(ratio, std::max(h1 / h0, h0 / h1));
    }
  }
  double Ly = nodes.empty() ? 0.0 : nodes.back();
  auto more = grid_problems(Lx, Nx, Ly, static_cast<int>(nodes.size()), ratio);
  errs.insert(errs.end(), more.begin(), more.end());
  throw_problems(errs);
  auto g = std::make_shared<HalfPlaneGrid>();
  g->Lx = Lx;
  g->Nx = Nx;
  g->Ly = Ly;
  g->Ny = static_cast<int>(nodes.size());
  g->grading_ratio = ratio;
  g->y = std::move(nodes);
  finish_grid(*g);
  return g;
}

nlohmann::json grid_to_json(const HalfPlaneGrid& g) {
  return {{"Lx", g.Lx}, {"Nx", g.Nx}, {"Ly", g.Ly}, {"Ny", g.Ny}, {"grading_ratio", g.grading_ratio}};
}

GridPtr grid_from_json(const nlohmann::json& j) {
  return make_grid(j.at("Lx").get<double>(), j.at("Nx").get<int>(), j.at("Ly").get<double>(),
                   j.at("Ny").get<int>(), j.value("grading_ratio", 1.02));
}

ModeField to_modes(const PhysicalField& f) {
  const auto& g = *f.grid;
  for (double x : f.v)
    if (!std::isfinite(x)) throw std::invalid_argument("to_modes: non-finite input");
  const int Nx = g.Nx, Ny = g.Ny, nh = Nx / 2 + 1;
  std::vector<double> in(f.v);
  std::vector<fftw_complex> out(static_cast<std::size_t>(nh) * Ny);
  fftw_execute_dft_r2c(plans_for(Nx, Ny).r2c, in.data(), out.data());
  ModeField F(f.grid);
  const double inv = 1.0 / Nx;
  for (int k = 0; k < nh; ++k) {
    double sgn = (k % 2 == 0) ? inv : -inv;
    for (int j = 0; j < Ny; ++j) {
      auto& o = out[static_cast<std::size_t>(k) * Ny + j];
      F(k, j) = cplx(o[0], o[1]) * sgn;
    }
  }
  for (int k = nh; k < Nx; ++k)
    for (int j = 0; j < Ny; ++j) F(k, j) = std::conj(F(Nx - k, j));
  return F;
}

double symmetry_defect(const ModeField& F) {
  const auto& g = *F.grid;
  double amax = 0.0, d = 0.0;
  for (auto& c : F.a) amax = std::max(amax, std::abs(c));
  for (int k = 1; k < g.Nx; ++k) {
    int km = g.Nx - k;
    for (int j = 0; j < g.Ny; ++j) d = std::max(d, std::abs(F(km, j) - std::conj(F(k, j))));
  }
  for (int j = 0; j < g.Ny; ++j) d = std::max(d, std::abs(F(0, j).imag()));
  return amax > 0.0 ? d / amax : 0.0;
}

PhysicalField to_physical(const ModeField& F) {
  const auto& g = *F.grid;
  if (symmetry_defect(F) > 1e-10)
    throw std::invalid_argument("to_physical: mode field breaks conjugate symmetry");
  const int Nx = g.Nx, Ny = g.Ny, nh = Nx / 2 + 1;
  std::vector<fftw_complex> in(static_cast<std::size_t>(nh) * Ny);
  for (int k = 0; k < nh; ++k) {
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < Ny; ++j) {
      cplx c = F(k, j) * sgn;
      auto& o = in[static_cast<std::size_t>(k) * Ny + j];
      o[0] = c.real();
      o[1] = (k == 0 || k == Nx / 2) ? 0.0 : c.imag();
    }
  }
  PhysicalField f(F.grid);
  fftw_execute_dft_c2r(plans_for(Nx, Ny).c2r, in.data(), f.v.data());
  return f;
}

ModeField apply_dx(const ModeField& F, DxKind kind) {
  const auto& g = *F.grid;
  ModeField out(F.grid);
  for (int k = 0; k < g.Nx; ++k) {
    double xi = g.xi(k);
    cplx m = kind == DxKind::deriv ? cplx(0.0, xi) : cplx(std::abs(xi), 0.0);
    if (kind == DxKind::deriv && k == g.Nx / 2) m = 0.0;  // odd derivative of the Nyquist mode
    for (int j = 0; j < g.Ny; ++j) out(k, j) = m * F(k, j);
  }
  return out;
}

void dealias(ModeField& F) {
  const auto& g = *F.grid;
  for (int k = 0; k < g.Nx; ++k)
    if (3 * std::abs(g.kk(k)) > g.Nx)
      for (int j = 0; j < g.Ny; ++j) F(k, j) = 0.0;
}

std::vector<double> fd_weights(double z, const std::vector<double>& xs, int order) {
  const int n = static_cast<int>(xs.size()) - 1;
  const int m = order;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = xs[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0, c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

template <class T>
static void dy_profile_impl(const HalfPlaneGrid& g, const T* in, T* out, int order) {
  const auto& st = g.st;
  if (order == 1) {
    for (int j = 0; j < g.Ny; ++j) {
      const double* w = &st.w1[static_cast<std::size_t>(j) * st.width1];
      int s = st.start1[j];
      out[j] = w[0] * in[s] + w[1] * in[s + 1] + w[2] * in[s + 2];
    }
  } else if (order == 2) {
    for (int j = 0; j < g.Ny; ++j) {
      const double* w = &st.w2[static_cast<std::size_t>(j) * st.width2];
      int s = st.start2[j];
      T acc = w[0] * in[s] + w[1] * in[s + 1] + w[2] * in[s + 2];
      if (w[3] != 0.0) acc += w[3] * in[s + 3];
      out[j] = acc;
    }
  } else {
    throw std::invalid_argument("apply_dy: order must be 1 or 2");
  }
}

void dy_profile(const HalfPlaneGrid& g, const cplx* in, cplx* out, int order) {
  dy_profile_impl(g, in, out, order);
}

void dy_profile(const HalfPlaneGrid& g, const double* in, double* out, int order) {
  dy_profile_impl(g, in, out, order);
}

ModeField apply_dy(const ModeField& F, int order) {
  const auto& g = *F.grid;
  if (g.Ny < 5) throw std::invalid_argument("apply_dy: need Ny >= 5");
  if (order != 1 && order != 2) throw std::invalid_argument("apply_dy: order must be 1 or 2");
  ModeField out(F.grid);
  parallel_for(g.Nx, [&](std::size_t k) {
    dy_profile(g, F.row(static_cast<int>(k)), out.row(static_cast<int>(k)), order);
  });
  return out;
}

void tridiag_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<cplx>& d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

cplx dirichlet_solve_profile(const HalfPlaneGrid& g, double xi, const cplx* rhs, cplx* phi) {
  const int n = g.Ny;
  const double ax = std::abs(xi), x2 = xi * xi;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
  std::vector<cplx> d(n);
  b[0] = 1.0;
  d[0] = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    double w = g.wy[j];
    a[j] = 1.0 / (g.hy[j - 1] * w);
    c[j] = 1.0 / (g.hy[j] * w);
    b[j] = -a[j] - c[j] - x2;
    d[j] = rhs[j];
  }
  {
    int j = n - 1;
    double h = g.hy[j - 1], w = g.wy[j];
    a[j] = 1.0 / (h * w);
    b[j] = -(ax + 1.0 / h) / w - x2;
    d[j] = rhs[j];
  }
  tridiag_solve(a, b, c, d);
  for (int j = 0; j < n; ++j) phi[j] = d[j];
  return phi[1] / g.hy[0] - 0.5 * g.hy[0] * rhs[0];
}

LaplaceInverse dirichlet_laplacian_inverse(const ModeField& rhs) {
  const auto& g = *rhs.grid;
  LaplaceInverse out{ModeField(rhs.grid), std::vector<cplx>(g.Nx), {}};
  double amax = 0.0, top = 0.0;
  for (int k = 0; k < g.Nx; ++k)
    for (int j = 0; j < g.Ny; ++j) {
      amax = std::max(amax, std::abs(rhs(k, j)));
      if (j == g.Ny - 1) top = std::max(top, std::abs(rhs(k, j)));
    }
  if (amax > 0.0 && top > 1e-6 * amax) {
    std::ostringstream os;
    os << "rhs does not decay at y = Ly: top-row/max = " << top / amax;
    out.warning = os.str();
  }
  parallel_for(g.Nx, [&](std::size_t kz) {
    int k = static_cast<int>(kz);
    out.trace[k] = dirichlet_solve_profile(g, g.xi(k), rhs.row(k), out.phi.row(k));
  });
  return out;
}

}  // namespace hv
