#include "hv/biot_savart.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hv/parallel.hpp"

namespace hv {

using std::numbers::pi;

namespace {

// E0(x) = int_0^1 e^{-xu} du, E1(x) = int_0^1 u e^{-xu} du
void cell_moments(double x, double& e0, double& e1) {
  if (x < 0.1) {
    double t = 1.0, s0 = 0.0, s1 = 0.0, fact = 1.0;
    for (int n = 0; n < 12; ++n) {
      if (n > 0) {
        t *= -x;
        fact *= n;
      }
      s0 += t / (fact * (n + 1));
      s1 += t / (fact * (n + 2));
    }
    e0 = s0;
    e1 = s1;
  } else {
    double ex = std::exp(-x);
    e0 = -std::expm1(-x) / x;
    e1 = (1.0 - ex * (1.0 + x)) / (x * x);
  }
}

}  // namespace

void bs_half_plane_profile(const HalfPlaneGrid& g, double xi, const cplx* w, cplx* u, cplx* v) {
  const int n = g.Ny;
  const double a = std::abs(xi);
  if (a == 0.0) {
    cplx c = 0.0;
    u[n - 1] = 0.0;
    v[n - 1] = 0.0;
    for (int j = n - 2; j >= 0; --j) {
      c += 0.5 * g.hy[j] * (w[j] + w[j + 1]);
      u[j] = c;
      v[j] = 0.0;
    }
    return;
  }
  std::vector<cplx> I1(n), C(n);
  cplx A = 0.0, B = 0.0;
  I1[0] = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    double h = g.hy[j], x = a * h, e0, e1;
    cell_moments(x, e0, e1);
    double ex = std::exp(-x);
    A = ex * A + h * (w[j] * e1 + w[j + 1] * (e0 - e1));
    B = ex * B + std::exp(-a * (g.y[j + 1] + g.y[j])) * h * (w[j] * (e0 - e1) + w[j + 1] * e1);
    I1[j + 1] = A - B;
  }
  C[n - 1] = 0.0;
  for (int j = n - 2; j >= 0; --j) {
    double h = g.hy[j], x = a * h, e0, e1;
    cell_moments(x, e0, e1);
    C[j] = std::exp(-x) * C[j + 1] + h * (w[j] * (e0 - e1) + w[j + 1] * e1);
  }
  const cplx fac = cplx(0.0, -xi / (2.0 * a));
  for (int j = 0; j < n; ++j) {
    double e2 = std::exp(-2.0 * a * g.y[j]);
    u[j] = 0.5 * (-I1[j] + (1.0 + e2) * C[j]);
    v[j] = j == 0 ? cplx(0.0) : fac * (I1[j] + (1.0 - e2) * C[j]);
  }
}

VelocityModes bs_half_plane(const ModeField& omega) {
  const auto& g = *omega.grid;
  VelocityModes U{ModeField(omega.grid), ModeField(omega.grid), {}};
  double amax = 0.0, top = 0.0;
  for (int k = 0; k < g.Nx; ++k)
    for (int j = 0; j < g.Ny; ++j) {
      double a = std::abs(omega(k, j));
      amax = std::max(amax, a);
      if (j == g.Ny - 1) top = std::max(top, a);
    }
  if (amax > 0.0 && top > 1e-6 * amax) {
    std::ostringstream os;
    os << "vorticity does not decay at y = Ly: top-row/max = " << top / amax
       << ", tail mass ~ " << top * g.hy.back();
    U.warning = os.str();
  }
  parallel_for(g.Nx, [&](std::size_t kz) {
    int k = static_cast<int>(kz);
    bs_half_plane_profile(g, g.xi(k), omega.row(k), U.u.row(k), U.v.row(k));
    if (k == g.Nx / 2)
      for (int j = 0; j < g.Ny; ++j) U.v(k, j) = 0.0;
  });
  return U;
}

ModeField divergence_modes(const VelocityModes& U) {
  auto dv = apply_dy(U.v, 1);
  auto du = apply_dx(U.u, DxKind::deriv);
  for (std::size_t i = 0; i < dv.a.size(); ++i) dv.a[i] += du.a[i];
  return dv;
}

ModeField curl_modes(const VelocityModes& U) {
  auto dv = apply_dx(U.v, DxKind::deriv);
  auto du = apply_dy(U.u, 1);
  for (std::size_t i = 0; i < dv.a.size(); ++i) dv.a[i] -= du.a[i];
  return dv;
}

namespace {

struct KernelKey {
  int N;
  double h, d1, d2;
  bool operator<(const KernelKey& o) const { return std::tie(N, h, d1, d2) < std::tie(o.N, o.h, o.d1, o.d2); }
};

struct KernelFFT {
  int M = 0;
  std::vector<fftw_complex> k1, k2;
  fftw_plan fwd = nullptr, bwd = nullptr;
  ~KernelFFT() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

std::array<double, 2> kernel(double d1, double d2) {
  double r2 = d1 * d1 + d2 * d2;
  return {-d2 / (2.0 * pi * r2), d1 / (2.0 * pi * r2)};
}

std::shared_ptr<KernelFFT> kernel_fft(int N, double h, double d1, double d2) {
  static std::map<KernelKey, std::shared_ptr<KernelFFT>> cache;
  static std::mutex cache_mutex;
  KernelKey key{N, h, d1, d2};
  std::lock_guard<std::mutex> cache_lock(cache_mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto kf = std::make_shared<KernelFFT>();
  const int M = 2 * N, mh = M / 2 + 1;
  kf->M = M;
  std::vector<double> r1(static_cast<std::size_t>(M) * M), r2(r1.size());
  for (int p = 0; p < M; ++p) {
    int pp = p < N ? p : p - M;
    for (int q = 0; q < M; ++q) {
      int qq = q < N ? q : q - M;
      double e1 = pp * h + d1, e2 = qq * h + d2;
      std::size_t idx = static_cast<std::size_t>(p) * M + q;
      if (e1 * e1 + e2 * e2 < 1e-24 * h * h) {
        r1[idx] = r2[idx] = 0.0;
        continue;
      }
      auto K = kernel(e1, e2);
      r1[idx] = K[0] * h * h;
      r2[idx] = K[1] * h * h;
    }
  }
  kf->k1 = std::vector<fftw_complex>(static_cast<std::size_t>(M) * mh);
  kf->k2 = std::vector<fftw_complex>(kf->k1.size());
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    kf->fwd = fftw_plan_dft_r2c_2d(M, M, r1.data(), kf->k1.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    kf->bwd = fftw_plan_dft_c2r_2d(M, M, kf->k1.data(), r1.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute_dft_r2c(kf->fwd, r1.data(), kf->k1.data());
  fftw_execute_dft_r2c(kf->fwd, r2.data(), kf->k2.data());
  // offsets change every call in time loops; keep only lattice-aligned kernels
  if (d1 == 0.0 && d2 == 0.0) cache.emplace(key, kf);
  return kf;
}

std::string support_warning(const EtaField& w) {
  double r = eta_edge_ratio(w, 2);
  if (r > 1e-10) {
    std::ostringstream os;
    os << "vorticity touches the eta-box edge: edge/max = " << r;
    return os.str();
  }
  return {};
}

EtaVelocity convolve(const EtaField& w, double d1, double d2) {
  const auto& g = *w.grid;
  const int N = g.N;
  auto kf = kernel_fft(N, g.h(), d1, d2);
  const int M = kf->M, mh = M / 2 + 1;
  std::vector<double> src(static_cast<std::size_t>(M) * M, 0.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) src[static_cast<std::size_t>(i) * M + j] = w(i, j);
  std::vector<fftw_complex> S(static_cast<std::size_t>(M) * mh), P(S.size());
  fftw_execute_dft_r2c(kf->fwd, src.data(), S.data());
  EtaVelocity out{EtaField(w.grid), EtaField(w.grid), support_warning(w)};
  const double inv = 1.0 / (static_cast<double>(M) * M);
  for (int c = 0; c < 2; ++c) {
    const auto& K = c == 0 ? kf->k1 : kf->k2;
    for (std::size_t i = 0; i < S.size(); ++i) {
      double ar = S[i][0], ai = S[i][1], br = K[i][0], bi = K[i][1];
      P[i][0] = (ar * br - ai * bi) * inv;
      P[i][1] = (ar * bi + ai * br) * inv;
    }
    fftw_execute_dft_c2r(kf->bwd, P.data(), src.data());
    auto& dst = c == 0 ? out.v1 : out.v2;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) dst(i, j) = src[static_cast<std::size_t>(i) * M + j];
  }
  return out;
}

void add_self_cell(const EtaField& w, EtaVelocity& V) {
  double h = w.grid->h(), c = h * h / (4.0 * pi);
  auto w1 = eta_d1(w), w2 = eta_d2(w);
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    V.v1.v[i] += c * w2.v[i];
    V.v2.v[i] -= c * w1.v[i];
  }
}

}  // namespace

EtaVelocity bs_whole_plane(const EtaField& w) {
  auto V = convolve(w, 0.0, 0.0);
  add_self_cell(w, V);
  return V;
}

EtaVelocity bs_whole_plane_offset(const EtaField& w, double d1, double d2) { return convolve(w, d1, d2); }

EtaVelocity bs_whole_plane_direct(const EtaField& w) {
  const auto& g = *w.grid;
  EtaVelocity V{EtaField(w.grid), EtaField(w.grid), support_warning(w)};
  const double h2 = g.h() * g.h();
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (int p = 0; p < g.N; ++p)
        for (int q = 0; q < g.N; ++q) {
          if ((p == i && q == j) || w(p, q) == 0.0) continue;
          auto K = kernel(g.at(i) - g.at(p), g.at(j) - g.at(q));
          s1 += K[0] * w(p, q);
          s2 += K[1] * w(p, q);
        }
      V.v1(i, j) = s1 * h2;
      V.v2(i, j) = s2 * h2;
    }
  add_self_cell(w, V);
  return V;
}

std::array<double, 2> bs_whole_plane_point(const EtaField& w, double e1, double e2) {
  const auto& g = *w.grid;
  double s1 = 0.0, s2 = 0.0, h = g.h();
  for (int p = 0; p < g.N; ++p)
    for (int q = 0; q < g.N; ++q) {
      if (w(p, q) == 0.0) continue;
      double d1 = e1 - g.at(p), d2 = e2 - g.at(q);
      if (d1 * d1 + d2 * d2 < 1e-24 * h * h) continue;
      auto K = kernel(d1, d2);
      s1 += K[0] * w(p, q);
      s2 += K[1] * w(p, q);
    }
  return {s1 * h * h, s2 * h * h};
}

EtaField reflect_eta(const EtaField& w) {
  const int N = w.grid->N;
  EtaField r(w.grid);
  for (int i = 0; i < N; ++i)
    for (int j = 1; j < N; ++j) r(i, j) = w(i, N - j);
  return r;
}

EtaVelocity self_similar_image_velocity(const EtaField& W, double tau) {
  const auto& g = *W.grid;
  const double rad = 6.0 * std::exp(-0.5 * tau);
  double outside = 0.0, mx = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      double a = std::abs(W(i, j));
      mx = std::max(mx, a);
      if (std::hypot(g.at(i), g.at(j)) > rad * (1.0 + 1e-9)) outside = std::max(outside, a);
    }
  if (outside > 0.0 && outside > 1e-12 * mx)
    throw std::invalid_argument("self_similar_image_velocity: W is not supported in |eta| <= 6 e^{-tau/2}");
  auto V = bs_whole_plane(W);
  auto Vt = bs_whole_plane_offset(reflect_eta(W), 0.0, 40.0 * std::exp(-0.5 * tau));
  for (std::size_t i = 0; i < V.v1.v.size(); ++i) {
    V.v1.v[i] -= Vt.v1.v[i];
    V.v2.v[i] -= Vt.v2.v[i];
  }
  return V;
}

}  // namespace hv
