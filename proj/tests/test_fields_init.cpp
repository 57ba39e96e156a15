#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hv/eta_grid.hpp"
#include "hv/fields_init.hpp"

using namespace hv;
using std::numbers::pi;

TEST_CASE("Oseen profile has unit mass and 1 / (2 pi r) far velocity") {
  auto eg = make_eta_grid(60.0, 240);
  auto G = sample_eta(eg, [](double a, double b) { return oseen_profile(a, b); });
  CHECK(eta_integral(G) == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : {20.0, 40.0}) {
    auto v = oseen_velocity(r, 0.0);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(1.0 / (2.0 * pi * r)).epsilon(1e-12));
  }
  auto v = oseen_velocity(0.0, 1.0);
  CHECK(v[0] < 0.0);  // counter-clockwise for positive circulation
}

TEST_CASE("boundary slip of the point vortex") {
  CHECK(u0_closed(1.0, 0.0) == doctest::Approx(1.0 / (20.0 * pi)));
  CHECK(u0_closed(2.0, 5.0) == doctest::Approx(2.0 * u0_closed(1.0, 5.0)));
  // one period of the periodized slip carries the full circulation
  double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) { return u0_periodic(1.0, x, 160.0); }, -80.0, 80.0, 15, 1e-13);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(u0_periodic(1.0, 3.0, 1e6) == doctest::Approx(u0_closed(1.0, 3.0)).epsilon(1e-6));
  CHECK(u0_periodic(1.0, 3.0, 160.0) == doctest::Approx(u0_periodic(1.0, 163.0, 160.0)).epsilon(1e-12));
}

TEST_CASE("mollified trace approaches the point-vortex slip") {
  for (double x : {0.0, 5.0, 20.0}) {
    double v = boundary_trace_u0(x, {1.0, 0.01});
    CHECK(v == doctest::Approx(u0_closed(1.0, x)).epsilon(1e-6));
  }
}

TEST_CASE("mollified data validation") {
  CHECK(vortex_problems({1.0, 0.02}).empty());
  CHECK_FALSE(vortex_problems({1.0, -1.0}).empty());
  // desk grids cannot resolve sqrt(delta) at y = 20
  auto g = make_grid(160.0, 256, 60.0, 256, 1.02);
  CHECK_THROWS(mollified_vorticity({1.0, 0.02}, g));
  CHECK(mollified_value({1.0, 0.02}, 0.0, 20.0) == doctest::Approx(1.0 / (0.02 * 4.0 * pi)));
  CHECK(mollified_value({1.0, 0.02}, 0.0, 26.01) == 0.0);  // support radius 6
}

TEST_CASE("smoothstep is C2 and monotone") {
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(2.0) == 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    double s = i / 100.0, h = 1e-5;
    CHECK(smoothstep(s) >= prev);
    prev = smoothstep(s);
    if (i < 100) {
      CHECK(smoothstep_d1(s) == doctest::Approx((smoothstep(s + h) - smoothstep(s - h)) / (2 * h)).epsilon(1e-6));
      CHECK(smoothstep_d2(s) == doctest::Approx((smoothstep_d1(s + h) - smoothstep_d1(s - h)) / (2 * h)).epsilon(1e-5));
    }
  }
  CHECK(smoothstep_d1(0.0) == 0.0);
  CHECK(smoothstep_d2(1.0) == doctest::Approx(0.0));
}

TEST_CASE("cutoffs take values in [0, 1]") {
  for (double x = -60.0; x <= 60.0; x += 3.7)
    for (double y = 0.0; y <= 40.0; y += 0.9) {
      for (double v : {chi_vp(x, y), chi_b(y), chi_m(x, y), zeta1(y), zeta2(x, y)}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  CHECK(chi_vp(0.0, 20.0) == 1.0);
  CHECK(chi_b(0.0) == 1.0);
  auto csv = cutoff_table_csv(-10.0, 10.0, 3, 0.0, 5.0, 2);
  CHECK(csv.rfind("x,y,chi_vp,chi_m,chi_b,zeta1,zeta2,theta", 0) == 0);
}

TEST_CASE("weight parameters") {
  WeightParams p;
  CHECK(weight_problems(p).empty());
  auto q = weights_from_json(weights_to_json(p));
  CHECK(q.gamma == p.gamma);
  CHECK(q.beta == p.beta);
  WeightParams bad;
  bad.eps0 = -1.0;
  bad.mu0 = 0.0;
  CHECK(weight_problems(bad).size() >= 2);
  // Psi vanishes once gamma t >= 1
  auto [psi, Psi] = weight_psi_Psi(1.0, 1.0, 2.0, p);
  CHECK(psi == doctest::Approx(8.0));
  CHECK(Psi == 0.0);
}
