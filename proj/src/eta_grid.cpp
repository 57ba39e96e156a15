#include "hv/eta_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hv/parallel.hpp"

namespace hv {

namespace {

struct Plans2 {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

const Plans2& eta_plans(int N) {
  static std::map<int, Plans2> cache;
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  std::vector<double> r(static_cast<std::size_t>(N) * N);
  std::vector<fftw_complex> c(static_cast<std::size_t>(N) * (N / 2 + 1));
  Plans2 p;
  p.fwd = fftw_plan_dft_r2c_2d(N, N, r.data(), c.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_c2r_2d(N, N, c.data(), r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(N, p).first->second;
}

}  // namespace

double EtaGrid::wave(int k) const {
  int kk = k <= N / 2 ? k : k - N;
  return 2.0 * std::numbers::pi * kk / L;
}

EtaGridPtr make_eta_grid(double L, int N) {
  if (!(L > 0.0) || N < 8 || N % 2 != 0) throw std::invalid_argument("eta grid needs L > 0 and even N >= 8");
  auto g = std::make_shared<EtaGrid>();
  g->L = L;
  g->N = N;
  return g;
}

EtaField sample_eta(const EtaGridPtr& g, const std::function<double(double, double)>& f) {
  EtaField w(g);
  for (int i = 0; i < g->N; ++i)
    for (int j = 0; j < g->N; ++j) w(i, j) = f(g->at(i), g->at(j));
  return w;
}

EtaField eta_spectral(const EtaField& w, const std::function<std::complex<double>(double, double)>& m) {
  const auto& g = *w.grid;
  const int N = g.N, nh = N / 2 + 1;
  std::vector<double> in(w.v);
  std::vector<fftw_complex> c(static_cast<std::size_t>(N) * nh);
  const auto& p = eta_plans(N);
  fftw_execute_dft_r2c(p.fwd, in.data(), c.data());
  const double inv = 1.0 / (static_cast<double>(N) * N);
  for (int i = 0; i < N; ++i) {
    double k1 = g.wave(i);
    bool nyq1 = (i == N / 2);
    for (int j = 0; j < nh; ++j) {
      double k2 = g.wave(j);
      bool nyq2 = (j == N / 2);
      std::complex<double> f = m(nyq1 ? 0.0 : k1, nyq2 ? 0.0 : k2);
      if ((nyq1 || nyq2) && f.imag() != 0.0) f = 0.0;
      auto& z = c[static_cast<std::size_t>(i) * nh + j];
      std::complex<double> a(z[0], z[1]);
      a *= f * inv;
      z[0] = a.real();
      z[1] = a.imag();
    }
  }
  EtaField out(w.grid);
  fftw_execute_dft_c2r(p.bwd, c.data(), out.v.data());
  return out;
}

std::vector<double> eta_interpolate_spectral(const EtaField& w, const std::vector<double>& xs,
                                             const std::vector<double>& ys) {
  const auto& g = *w.grid;
  const int N = g.N, nh = N / 2 + 1;
  std::vector<double> in(w.v);
  std::vector<fftw_complex> c(static_cast<std::size_t>(N) * nh);
  fftw_execute_dft_r2c(eta_plans(N).fwd, in.data(), c.data());
  const double inv = 1.0 / (static_cast<double>(N) * N), x0 = g.at(0), half = 0.5 * g.L;
  // D(k1; b) = sum over the stored half of k2, doubled where the conjugate term is implied
  std::vector<std::complex<double>> D(static_cast<std::size_t>(ys.size()) * N);
  parallel_for(ys.size(), [&](std::size_t b) {
    for (int i = 0; i < N; ++i) {
      std::complex<double> acc(0.0, 0.0);
      if (i != N / 2)
        for (int j = 0; j < nh - 1; ++j) {
          const auto& z = c[static_cast<std::size_t>(i) * nh + j];
          double wt = j == 0 ? inv : 2.0 * inv;
          acc += wt * std::complex<double>(z[0], z[1]) * std::polar(1.0, g.wave(j) * (ys[b] - x0));
        }
      D[b * N + i] = acc;
    }
  });
  std::vector<double> out(xs.size() * ys.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t a) {
    if (std::abs(xs[a]) > half) return;
    std::vector<std::complex<double>> e(N);
    for (int i = 0; i < N; ++i) e[i] = std::polar(1.0, g.wave(i) * (xs[a] - x0));
    for (std::size_t b = 0; b < ys.size(); ++b) {
      if (std::abs(ys[b]) > half) continue;
      std::complex<double> acc(0.0, 0.0);
      for (int i = 0; i < N; ++i) acc += D[b * N + i] * e[i];
      out[a * ys.size() + b] = acc.real();
    }
  });
  return out;
}

EtaField eta_d1(const EtaField& w) {
  return eta_spectral(w, [](double k1, double) { return std::complex<double>(0.0, k1); });
}

EtaField eta_d2(const EtaField& w) {
  return eta_spectral(w, [](double, double k2) { return std::complex<double>(0.0, k2); });
}

EtaField eta_lap(const EtaField& w) {
  return eta_spectral(w, [](double k1, double k2) { return std::complex<double>(-(k1 * k1 + k2 * k2), 0.0); });
}

double eta_integral(const EtaField& w) {
  double s = 0.0;
  for (double x : w.v) s += x;
  double h = w.grid->h();
  return s * h * h;
}

double eta_norm_L2m(const EtaField& w, double m) {
  const auto& g = *w.grid;
  double s = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      double r2 = g.at(i) * g.at(i) + g.at(j) * g.at(j);
      s += w(i, j) * w(i, j) * std::pow(1.0 + r2, m);
    }
  return std::sqrt(s * g.h() * g.h());
}

double eta_edge_ratio(const EtaField& w, int band) {
  const int N = w.grid->N;
  double mx = 0.0, edge = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double a = std::abs(w(i, j));
      mx = std::max(mx, a);
      if (i < band || j < band || i >= N - band || j >= N - band) edge = std::max(edge, a);
    }
  return mx > 0.0 ? edge / mx : 0.0;
}

EtaField operator+(const EtaField& a, const EtaField& b) {
  EtaField c(a.grid);
  for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] = a.v[i] + b.v[i];
  return c;
}

EtaField operator-(const EtaField& a, const EtaField& b) {
  EtaField c(a.grid);
  for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] = a.v[i] - b.v[i];
  return c;
}

EtaField operator*(double s, const EtaField& a) {
  EtaField c(a.grid);
  for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] = s * a.v[i];
  return c;
}

EtaField hadamard(const EtaField& a, const EtaField& b) {
  EtaField c(a.grid);
  for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] = a.v[i] * b.v[i];
  return c;
}

static double catmull(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

double eta_value_at(const EtaField& w, double e1, double e2) {
  const auto& g = *w.grid;
  double s1 = (e1 + 0.5 * g.L) / g.h(), s2 = (e2 + 0.5 * g.L) / g.h();
  int i = static_cast<int>(std::floor(s1)), j = static_cast<int>(std::floor(s2));
  if (i < 1 || j < 1 || i + 2 >= g.N || j + 2 >= g.N) return 0.0;
  double t1 = s1 - i, t2 = s2 - j;
  double col[4];
  for (int a = 0; a < 4; ++a)
    col[a] = catmull(w(i - 1 + a, j - 1), w(i - 1 + a, j), w(i - 1 + a, j + 1), w(i - 1 + a, j + 2), t2);
  return catmull(col[0], col[1], col[2], col[3], t1);
}

}  // namespace hv
