#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hv/fields_init.hpp"
#include "hv/stepper.hpp"
#include "json.hpp"

namespace hv {

struct RunConfig {
  double alpha = 1.0;
  double delta = 0.02;
  double Lx = 160.0;
  int Nx = 256;
  double Ly = 60.0;
  int Ny = 256;
  double grading_ratio = 1.02;
  double dt = 1e-3;
  double T = 0.05;
  double t_start = 0.0;  // <= 0 picks the default start time of the grid
  double eps0 = 0.05;
  double eps1 = 0.05;
  double gamma = 200.0;
  double mu0 = 0.1;
  double m = 3.0;
  double beta = 0.75;
  int output_every = 10;
  std::string run_id = "run";
  std::string output_dir = "run";
  std::uint64_t seed = 0;
};

// Every problem found, one entry each.
struct ConfigError : std::invalid_argument {
  std::vector<std::string> problems;
  explicit ConfigError(std::vector<std::string> p);
};

// Parses and validates; unknown keys and wrong types are reported together
// with every module precondition. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& c);
std::vector<std::string> config_problems(const RunConfig& c);

WeightParams weights_of(const RunConfig& c);
StepperConfig stepper_config_of(const RunConfig& c);
GridPtr grid_of(const RunConfig& c);

}  // namespace hv
