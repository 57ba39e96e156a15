#include <cmath>

#include "doctest.h"
#include "hv/corrector.hpp"
#include "hv/oseen_semigroup.hpp"
#include "hv/self_similar.hpp"
#include "hv/stepper.hpp"
#include "hv/verify.hpp"

using namespace hv;

namespace {

GridPtr default_grid() { return make_grid(160.0, 256, 60.0, 256, 1.02); }

}  // namespace

TEST_CASE("zero circulation stays zero") {
  StepperConfig c;
  c.alpha = 0.0;
  Stepper s(default_grid(), c);
  for (int n = 0; n < 5; ++n) s.step();
  for (const auto& v : s.omega().a) CHECK(v == cplx(0.0, 0.0));
  CHECK(s.total_vorticity() == 0.0);
}

TEST_CASE("default run: circulation, no-slip, determinism") {
  auto g = default_grid();
  StepperConfig c;
  Stepper a(g, c), b(g, c);
  CHECK(a.t() == doctest::Approx(default_t_start(*g)));
  for (int n = 0; n < 5; ++n) {
    auto info = a.step();
    b.step();
    CHECK_FALSE(info.diverged);
    CHECK(info.bc_residual < 1e-8);
    CHECK(std::abs(a.total_vorticity()) < 1e-4 * c.alpha);
  }
  for (std::size_t q = 0; q < a.omega().a.size(); ++q) CHECK(a.omega().a[q] == b.omega().a[q]);
  double slip = 0.0;
  for (auto v : a.slip_modes()) slip = std::max(slip, std::abs(v));
  CHECK(slip < 1e-6);
}

TEST_CASE("CFL violation suggests a smaller step") {
  StepperConfig c;
  c.dt = 5.0;
  c.t_max = 5.0;
  bool thrown = false;
  try {
    Stepper s(default_grid(), c);
    s.step();
  } catch (const CflError& e) {
    thrown = true;
    CHECK(e.suggested_dt > 0.0);
    CHECK(e.suggested_dt < c.dt);
  }
  CHECK(thrown);
}

TEST_CASE("stepper configuration problems") {
  StepperConfig c;
  c.dt = -1.0;
  CHECK_FALSE(stepper_problems(c, *default_grid()).empty());
}

TEST_CASE("corrector: heat equation, wall value, zero mass, scaling") {
  auto c = check_corrector();
  CHECK(c.pass);
  CHECK(corrector_Pu(0.01, 0.0) == 0.0);
  // u_c -> u0 above the layer
  CHECK(corrector_Pu(1e-3, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(corrector(1e-8, default_grid(), U0Source{}));
}

TEST_CASE("mean-value property of the mollified slip") {
  U0Source a{1.0, 0.0, false, 160.0}, b{1.0, 0.02, false, 160.0};
  for (double x : {0.0, 7.0, 30.0}) CHECK(b.value(x) == doctest::Approx(a.value(x)).epsilon(1e-12));
}

TEST_CASE("linearized Oseen flow keeps G and conserves mass") {
  auto eg = make_eta_grid(60.0, 128);
  auto G = sample_eta(eg, [](double a, double b) { return oseen_profile(a, b); });
  auto T = linearized_oseen_evolve(G, 0.5, 2.0);
  CHECK(eta_norm_L2m(T - G, 3.0) < 1e-3 * eta_norm_L2m(G, 3.0));
  auto w = sample_eta(eg, [](double a, double b) { return std::exp(-((a - 1) * (a - 1) + b * b) / 2.0); });
  auto Tw = linearized_oseen_evolve(w, 0.5, 2.0);
  CHECK(eta_integral(Tw) == doctest::Approx(eta_integral(w)).epsilon(1e-4));
}

TEST_CASE("self-similar state rejects unresolved eta grids") {
  StepperConfig c;
  Stepper s(default_grid(), c);
  CHECK_THROWS(make_self_similar(s.snapshot(), make_eta_grid(40.0, 40), 1.0, 0.02));
  CHECK_THROWS(make_self_similar(s.snapshot(), make_eta_grid(20.0, 128), 1.0, 0.02));
  auto st = make_self_similar(s.snapshot(), make_eta_grid(40.0, 128), 1.0, 0.02);
  CHECK(st.s == doctest::Approx(s.t() + 0.02));
  CHECK(eta_integral(st.W) == doctest::Approx(1.0).epsilon(1e-3));
}
