#include <cmath>
#include <random>

#include "doctest.h"
#include "hv/biot_savart.hpp"
#include "hv/fields_init.hpp"
#include "hv/verify.hpp"

using namespace hv;

namespace {

ModeField blob_modes(const GridPtr& g) {
  PhysicalField w(g);
  for (int i = 0; i < g->Nx; ++i)
    for (int j = 0; j < g->Ny; ++j) {
      double x = g->x(i), y = g->y[j];
      w(i, j) = std::exp(-(x * x + (y - 3.0) * (y - 3.0)) / 2.0) * (1.0 + 0.5 * std::sin(x));
    }
  return to_modes(w);
}

}  // namespace

TEST_CASE("whole-plane law reproduces the Oseen velocity") {
  auto c = check_bs_oseen();
  CHECK(c.pass);
  CHECK(c.measured.get<double>() < 1e-5);
}

TEST_CASE("FFT convolution equals the direct sum") {
  auto eg = make_eta_grid(16.0, 24);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N01;
  EtaField w(eg);
  for (auto& v : w.v) v = N01(rng);
  auto a = bs_whole_plane(w);
  auto b = bs_whole_plane_direct(w);
  double e = 0.0, m = 0.0;
  for (std::size_t q = 0; q < w.v.size(); ++q) {
    e = std::max({e, std::abs(a.v1.v[q] - b.v1.v[q]), std::abs(a.v2.v[q] - b.v2.v[q])});
    m = std::max(m, std::abs(b.v1.v[q]));
  }
  CHECK(e < 1e-12 * m);
}

TEST_CASE("reflection is an involution") {
  auto eg = make_eta_grid(16.0, 32);
  auto w = sample_eta(eg, [](double a, double b) { return std::exp(-(a - 1) * (a - 1) - (b - 2) * (b - 2)); });
  auto r = reflect_eta(reflect_eta(w));
  // row j = 0 (eta2 = -L/2) has no mirror partner in the box
  for (int i = 0; i < eg->N; ++i)
    for (int j = 1; j < eg->N; ++j) CHECK(r(i, j) == w(i, j));
}

TEST_CASE("half-plane law: no-penetration, linearity, curl") {
  auto g = make_grid(160.0, 128, 60.0, 256, 1.02);
  auto W = blob_modes(g);
  auto U = bs_half_plane(W);
  for (int k = 0; k < g->Nx; ++k) CHECK(U.v(k, 0) == cplx(0.0, 0.0));

  ModeField W2(g);
  for (std::size_t q = 0; q < W.a.size(); ++q) W2.a[q] = 2.0 * W.a[q];
  auto U2 = bs_half_plane(W2);
  double e = 0.0;
  for (std::size_t q = 0; q < W.a.size(); ++q) e = std::max(e, std::abs(U2.u.a[q] - 2.0 * U.u.a[q]));
  CHECK(e < 1e-13);

  // d_x v - d_y u = omega away from the top; the Nyquist slot has no i xi
  auto C = curl_modes(U);
  double ce = 0.0, cm = 0.0;
  int jt = 0;
  while (g->y[jt] < 10.0) ++jt;
  for (int k = 0; k < g->Nx; ++k)
    for (int j = 1; j < jt && k != g->Nx / 2; ++j) {
      ce = std::max(ce, std::abs(C(k, j) - W(k, j)));
      cm = std::max(cm, std::abs(W(k, j)));
    }
  CHECK(ce < 2e-3 * cm);
}

TEST_CASE("half-plane divergence residual is second order") {
  auto c = check_bs_divergence_order();
  CHECK(c.pass);
}

TEST_CASE("trace of the mollified data") {
  auto c = check_boundary_trace();
  CHECK(c.pass);
  CHECK(c.measured.get<double>() < 1e-6);
}

TEST_CASE("velocity bounds") {
  auto c = check_velocity_bounds(3);
  CHECK(c.pass);
}
