#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hv/grid_fourier.hpp"

using namespace hv;

namespace {

GridPtr small_grid() { return make_grid(80.0, 64, 40.0, 128, 1.03); }

PhysicalField random_field(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  PhysicalField f(g);
  for (auto& v : f.v) v = N01(rng);
  return f;
}

}  // namespace

TEST_CASE("grid construction reports every problem") {
  auto p = grid_problems(10.0, 7, 5.0, 4, 1.2);
  CHECK(p.size() >= 4);
  CHECK_THROWS_AS(make_grid(10.0, 7, 5.0, 4, 1.2), std::invalid_argument);
  auto g = make_grid(160.0, 256, 60.0, 256, 1.02);
  CHECK(g->y.front() == 0.0);
  CHECK(g->y.back() == doctest::Approx(60.0).epsilon(1e-14));
  for (int j = 1; j + 1 < g->Ny; ++j) CHECK(g->hy[j] / g->hy[j - 1] == doctest::Approx(1.02).epsilon(1e-10));
  double w = 0.0;
  for (double v : g->wy) w += v;
  CHECK(w == doctest::Approx(60.0).epsilon(1e-13));
  CHECK(g->x(g->Nx / 2) == 0.0);
}

TEST_CASE("grid JSON round trip") {
  auto g = small_grid();
  auto h = grid_from_json(grid_to_json(*g));
  CHECK(h->Nx == g->Nx);
  CHECK(h->Ny == g->Ny);
  for (int j = 0; j < g->Ny; ++j) CHECK(h->y[j] == doctest::Approx(g->y[j]).epsilon(1e-15));
}

TEST_CASE("x-transform round trip and conjugate symmetry") {
  auto g = small_grid();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto f = random_field(g, seed);
    auto F = to_modes(f);
    CHECK(symmetry_defect(F) < 1e-14);
    auto b = to_physical(F);
    double e = 0.0;
    for (std::size_t q = 0; q < f.v.size(); ++q) e = std::max(e, std::abs(b.v[q] - f.v[q]));
    CHECK(e < 1e-12);
  }
}

TEST_CASE("spectral x-derivative of a resolved wave is exact") {
  auto g = small_grid();
  const double k = 2.0 * std::numbers::pi * 3.0 / g->Lx;
  PhysicalField f(g);
  for (int i = 0; i < g->Nx; ++i)
    for (int j = 0; j < g->Ny; ++j) f(i, j) = std::sin(k * g->x(i)) * std::exp(-g->y[j]);
  auto d = to_physical(apply_dx(to_modes(f), DxKind::deriv));
  double e = 0.0;
  for (int i = 0; i < g->Nx; ++i)
    for (int j = 0; j < g->Ny; ++j) e = std::max(e, std::abs(d(i, j) - k * std::cos(k * g->x(i)) * std::exp(-g->y[j])));
  CHECK(e < 1e-12);
}

TEST_CASE("dealias removes the top third") {
  auto g = small_grid();
  auto F = to_modes(random_field(g, 4));
  dealias(F);
  for (int k = 0; k < g->Nx; ++k)
    if (std::abs(g->kk(k)) > g->Nx / 3)
      for (int j = 0; j < g->Ny; ++j) CHECK(F(k, j) == cplx(0.0, 0.0));
}

TEST_CASE("finite-difference weights") {
  auto w = fd_weights(0.0, {-1.0, 0.0, 1.0}, 1);
  CHECK(w[0] == doctest::Approx(-0.5));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(0.5));
  auto w2 = fd_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
}

TEST_CASE("y-derivatives are exact on quadratics over graded nodes") {
  auto g = make_grid(160.0, 256, 60.0, 256, 1.02);
  std::vector<double> f(g->Ny), d1(g->Ny), d2(g->Ny);
  for (int j = 0; j < g->Ny; ++j) f[j] = 1.0 + 2.0 * g->y[j] - 0.5 * g->y[j] * g->y[j];
  dy_profile(*g, f.data(), d1.data(), 1);
  dy_profile(*g, f.data(), d2.data(), 2);
  for (int j = 0; j < g->Ny; ++j) {
    CHECK(d1[j] == doctest::Approx(2.0 - g->y[j]).epsilon(1e-8).scale(1.0));
    CHECK(d2[j] == doctest::Approx(-1.0).epsilon(1e-7));
  }
}

TEST_CASE("tridiagonal solve") {
  std::vector<double> a{0.0, 1.0, 1.0}, b{4.0, 4.0, 4.0}, c{1.0, 1.0, 0.0};
  std::vector<cplx> x{{1.0, 0.0}, {2.0, 1.0}, {3.0, -1.0}}, d(3);
  d[0] = b[0] * x[0] + c[0] * x[1];
  d[1] = a[1] * x[0] + b[1] * x[1] + c[1] * x[2];
  d[2] = a[2] * x[1] + b[2] * x[2];
  tridiag_solve(a, b, c, d);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(d[i] - x[i]) < 1e-14);
}

TEST_CASE("Dirichlet Laplacian inverse converges at second order") {
  // phi = y e^{-y}, phi'' - xi^2 phi = (y - 2 - xi^2 y) e^{-y}; tail closure error is e^{-60}
  const double kappa = 255.0 * std::log(1.02), xi = 0.7;
  std::vector<double> errs;
  for (int Ny : {128, 256, 512}) {
    auto g = make_grid_kappa(160.0, 8, 60.0, Ny, kappa);
    std::vector<cplx> rhs(Ny), phi(Ny);
    for (int j = 0; j < Ny; ++j) {
      double y = g->y[j];
      rhs[j] = (y - 2.0 - xi * xi * y) * std::exp(-y);
    }
    cplx tr = dirichlet_solve_profile(*g, xi, rhs.data(), phi.data());
    double e = std::abs(tr - 1.0);
    for (int j = 0; j < Ny; ++j) e = std::max(e, std::abs(phi[j] - g->y[j] * std::exp(-g->y[j])));
    errs.push_back(e);
  }
  for (int l = 0; l + 1 < 2; ++l) {
    double o = std::log2(errs[l] / errs[l + 1]);
    CHECK(o > 1.7);
    CHECK(o < 2.3);
  }
}
