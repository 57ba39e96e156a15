#include <cmath>

#include "doctest.h"
#include "hv/functionals.hpp"
#include "hv/lemmas.hpp"
#include "hv/verify.hpp"

using namespace hv;

TEST_CASE("L2(m) norm of G") {
  auto c = check_norm_oseen();
  CHECK(c.pass);
  CHECK(oseen_norm_L2m_radial(0.0) == doctest::Approx(std::sqrt(1.0 / (8.0 * 3.141592653589793))).epsilon(1e-12));
}

TEST_CASE("norm properties") {
  for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(check_norm_properties(seed).pass);
}

TEST_CASE("mu grid") {
  WeightParams p;
  CHECK(mu_grid(1e-3, p).empty());  // gamma t >= mu0
  p.gamma = 1.0;
  auto m = mu_grid(0.01, p);
  CHECK(m.size() == 16);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m[i] > 0.0);
    CHECK(m[i] < p.mu0 - p.gamma * 0.01);
    if (i) CHECK(m[i] > m[i - 1]);
  }
}

TEST_CASE("energy basics") { CHECK(check_energy_basics().pass); }

TEST_CASE("energy report serializes overflow as null") {
  EnergyReport r;
  r.E_m = std::numeric_limits<double>::infinity();
  r.E_total = r.E_m;
  r.log10_E_m = 400.0;
  auto j = r.to_json();
  CHECK(j["E_m"].is_null());
  CHECK(j["log10_E_m"].get<double>() == 400.0);
}

TEST_CASE("analytic recovery matches the scalar oracle") {
  auto r = verify_analytic_recovery(0.0, 0.05, 0.05, 1);
  CHECK(r.max_violation < 0.1);
  CHECK(r.fitted_constant == doctest::Approx(1.0 / (std::exp(1.0) * 0.05)).epsilon(0.1));
}

TEST_CASE("product estimate holds with constant 1") {
  auto g = make_grid(80.0, 64, 40.0, 128, 1.03);
  WeightParams p;
  p.gamma = 1.0;
  auto r = verify_product_estimate(g, 0.05, 0.01, p, 8, 2);
  CHECK(r.max_violation <= 1e-6);
  CHECK(r.fitted_constant <= 1.0 + 1e-6);
  CHECK_THROWS(verify_product_estimate(g, 0.5, 0.01, p, 4, 2));
}

TEST_CASE("integral lemma scalings are gamma-stable") {
  auto r = verify_integral_lemma(0.1, {100.0, 200.0, 400.0});
  CHECK(r.max_violation <= 0.15);
  auto a = integral_lemma_lhs(0.1, 0.0, 0.75, 0.5, 200.0, 2e-4);
  for (double v : a) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
}
