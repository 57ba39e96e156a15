#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hv {

// One verification result: {name, paper_ref, status, measured, tolerance}.
struct Check {
  std::string name;
  std::string ref;  // the identity or estimate being checked
  bool pass = false;
  nlohmann::json measured;
  nlohmann::json tolerance;
  nlohmann::json details;
  double seconds = 0.0;
  nlohmann::json to_json() const;
};

// kernels | biot-savart | corrector | functionals | semigroup | lemmas
const std::vector<std::string>& suite_names();
// "all" runs every suite in order. Throws std::invalid_argument on an unknown name.
std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed);
nlohmann::json suite_report(const std::string& suite, std::uint64_t seed, const std::vector<Check>& checks);

// Individual checks, shared by the suites and the acceptance binary.
Check check_kernel_identity(std::uint64_t seed);   // d_y R = d_z R on a 200-point lattice
Check check_kernel_cross_path(std::uint64_t seed);  // s-integral vs Gamma(t) - Gamma(0)
Check check_kernel_H();                             // H symmetry and mass
Check check_kernel_wall();                          // (d_y + |xi|)(H + R) = 0 at y = 0
Check check_bs_oseen();                             // whole-plane law on G vs V^G
Check check_bs_no_penetration();
Check check_bs_divergence_order();
Check check_boundary_trace();                       // trace of the mollified data vs the closed form
Check check_velocity_bounds(std::uint64_t seed);    // L-infinity and far-field bounds
Check check_corrector();                            // heat residual, wall value, mass, t^{1/2} scaling
Check check_norm_oseen();
Check check_norm_properties(std::uint64_t seed);
Check check_energy_basics();
Check check_semigroup(const std::vector<double>& alphas);
Check check_lemmas(std::uint64_t seed);

// Solver-level checks (acceptance only).
Check check_duhamel_cross();
// Runs the default configuration into work_dir through simulate().
Check check_conservation(const std::string& work_dir);
Check check_weak_star();
Check check_self_similar_residual();
Check check_energy_trend();

}  // namespace hv
