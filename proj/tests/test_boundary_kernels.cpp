#include <cmath>
#include <random>

#include "doctest.h"
#include "hv/boundary_kernels.hpp"
#include "hv/verify.hpp"

using namespace hv;

TEST_CASE("kernel parameters are validated") {
  CHECK_THROWS_AS(check_kernel_params({1.0, 0.0, 64}), std::invalid_argument);
  CHECK_THROWS_AS(check_kernel_params({1.0, 0.01, 16}), std::invalid_argument);
  CHECK_NOTHROW(check_kernel_params({1.0, 0.01, 64}));
}

TEST_CASE("heat kernel derivatives") {
  const double t = 0.03;
  for (double x : {-0.4, 0.0, 0.1, 0.5}) {
    const double h = 1e-4;
    CHECK(kernel_g_dn(t, x, 0) == doctest::Approx(kernel_g(t, x)));
    CHECK(kernel_g_dn(t, x, 1) == doctest::Approx((kernel_g(t, x + h) - kernel_g(t, x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(kernel_G2(t, x, 0.2) == doctest::Approx(kernel_g(t, x) * kernel_g(t, 0.2)));
  }
}

TEST_CASE("H symmetry, mass, Robin wall condition") {
  CHECK(check_kernel_H().pass);
  CHECK(check_kernel_wall().pass);
}

TEST_CASE("R quadrature agrees with the closed form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int n = 0; n < 40; ++n) {
    double xi = std::pow(10.0, -1.0 + 2.0 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
    double t = std::pow(10.0, -3.0 + 2.0 * U(rng)), st = std::sqrt(t);
    double y = 3.0 * st * U(rng), z = 3.0 * st * U(rng);
    auto q = kernel_R_quad({xi, t, 64}, y, z);
    double c = kernel_R_closed(xi, t, y, z);
    CHECK(std::abs(q.value - c) <= 1e-9 * std::abs(c) + 1e-12);
  }
}

TEST_CASE("R special values") {
  CHECK(kernel_R({0.0, 0.01, 64}, 0.1, 0.2) == 0.0);
  const double xi = 2.0, t = 0.05;
  CHECK(kernel_R({xi, t, 64}, 0.0, 0.0) == doctest::Approx(xi * std::erfc(-xi * std::sqrt(t))).epsilon(1e-10));
  // symmetric in (y, z) since it depends on y + z only
  CHECK(kernel_R({xi, t, 64}, 0.1, 0.3) == doctest::Approx(kernel_R({xi, t, 64}, 0.3, 0.1)).epsilon(1e-12));
  CHECK(kernel_K(xi, t, 0.1, 0.2) == doctest::Approx(kernel_H({xi, t, 64}, 0.1, 0.2) + kernel_R({xi, t, 64}, 0.1, 0.2)));
}

TEST_CASE("d_y R = d_z R on the sampled lattice") {
  for (std::uint64_t seed : {1u, 2u}) {
    auto c = check_kernel_identity(seed);
    CHECK(c.pass);
    CHECK(c.measured.get<double>() < 1e-9);
  }
}

TEST_CASE("Gamma path agrees with the s-integral") {
  for (auto [xi, t, y, z] : {std::array{0.8, 0.01, 0.05, 0.1}, std::array{3.0, 0.002, 0.02, 0.01}}) {
    double a = kernel_R({xi, t, 64}, y, z), b = kernel_R_gamma(xi, t, y, z);
    CHECK(std::abs(a - b) < 1e-4 * std::abs(b));
  }
}
