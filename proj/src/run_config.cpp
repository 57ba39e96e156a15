#include "hv/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>

namespace hv {

namespace {

std::string joined(const std::vector<std::string>& p) {
  std::string m = "invalid run config:";
  for (const auto& s : p) m += "\n  - " + s;
  return m;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> p) : std::invalid_argument(joined(p)), problems(std::move(p)) {}

nlohmann::json config_to_json(const RunConfig& c) {
  return {{"alpha", c.alpha},   {"delta", c.delta},     {"Lx", c.Lx},
          {"Nx", c.Nx},         {"Ly", c.Ly},           {"Ny", c.Ny},
          {"grading_ratio", c.grading_ratio},           {"dt", c.dt},
          {"T", c.T},           {"t_start", c.t_start}, {"eps0", c.eps0},
          {"eps1", c.eps1},     {"gamma", c.gamma},     {"mu0", c.mu0},
          {"m", c.m},           {"beta", c.beta},       {"output_every", c.output_every},
          {"run_id", c.run_id}, {"output_dir", c.output_dir}, {"seed", c.seed}};
}

WeightParams weights_of(const RunConfig& c) {
  WeightParams p;
  p.eps0 = c.eps0;
  p.eps1 = c.eps1;
  p.gamma = c.gamma;
  p.mu0 = c.mu0;
  p.beta = c.beta;
  p.m = c.m;
  return p;
}

StepperConfig stepper_config_of(const RunConfig& c) {
  StepperConfig s;
  s.alpha = c.alpha;
  s.delta = c.delta;
  s.dt = c.dt;
  s.t_start = c.t_start;
  s.t_max = std::max(c.T, 1e-3);
  return s;
}

GridPtr grid_of(const RunConfig& c) { return make_grid(c.Lx, c.Nx, c.Ly, c.Ny, c.grading_ratio); }

std::vector<std::string> config_problems(const RunConfig& c) {
  std::vector<std::string> p = grid_problems(c.Lx, c.Nx, c.Ly, c.Ny, c.grading_ratio);
  for (auto& s : weight_problems(weights_of(c))) p.push_back(s);
  if (!(c.T > 0.0)) p.push_back("T must be > 0");
  if (c.output_every < 1) p.push_back("output_every must be >= 1");
  if (c.run_id.empty()) p.push_back("run_id must be non-empty");
  if (c.output_dir.empty()) p.push_back("output_dir must be non-empty");
  const bool grid_ok = grid_problems(c.Lx, c.Nx, c.Ly, c.Ny, c.grading_ratio).empty();
  if (!grid_ok) {
    // grid-independent stepper checks only
    StepperConfig s = stepper_config_of(c);
    s.t_start = 0.0;
    auto g = make_grid(160.0, 256, 60.0, 256, 1.02);
    for (auto& q : stepper_problems(s, *g)) p.push_back(q);
    if (c.t_start < 0.0) p.push_back("t_start must be >= 0");
    return p;
  }
  auto g = grid_of(c);
  for (auto& s : stepper_problems(stepper_config_of(c), *g)) p.push_back(s);
  double t0 = c.t_start > 0.0 ? c.t_start : default_t_start(*g);
  if (c.T <= t0) p.push_back("T must exceed the start time " + std::to_string(t0));
  return p;
}

RunConfig config_from_json(const nlohmann::json& j) {
  std::vector<std::string> p;
  RunConfig c;
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  static const std::set<std::string> known{"alpha", "delta", "Lx",   "Nx",    "Ly",   "Ny",           "grading_ratio",
                                           "dt",    "T",     "t_start", "eps0", "eps1", "gamma",      "mu0",
                                           "m",     "beta",  "output_every", "run_id", "output_dir", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) p.push_back("unknown key '" + it.key() + "'");
  auto num = [&](const char* k, double& v) {
    if (!j.contains(k)) return;
    if (!j[k].is_number()) {
      p.push_back(std::string(k) + " must be a number");
      return;
    }
    v = j[k].get<double>();
    if (!std::isfinite(v)) p.push_back(std::string(k) + " must be finite");
  };
  auto integer = [&](const char* k, auto& v) {
    if (!j.contains(k)) return;
    if (!j[k].is_number_integer()) {
      p.push_back(std::string(k) + " must be an integer");
      return;
    }
    using T = std::decay_t<decltype(v)>;
    if (std::is_unsigned_v<T> && !j[k].is_number_unsigned())
      p.push_back(std::string(k) + " must be >= 0");
    else
      v = j[k].get<T>();
  };
  auto str = [&](const char* k, std::string& v) {
    if (!j.contains(k)) return;
    if (!j[k].is_string())
      p.push_back(std::string(k) + " must be a string");
    else
      v = j[k].get<std::string>();
  };
  num("alpha", c.alpha);
  num("delta", c.delta);
  num("Lx", c.Lx);
  integer("Nx", c.Nx);
  num("Ly", c.Ly);
  integer("Ny", c.Ny);
  num("grading_ratio", c.grading_ratio);
  num("dt", c.dt);
  num("T", c.T);
  num("t_start", c.t_start);
  num("eps0", c.eps0);
  num("eps1", c.eps1);
  num("gamma", c.gamma);
  num("mu0", c.mu0);
  num("m", c.m);
  num("beta", c.beta);
  integer("output_every", c.output_every);
  str("run_id", c.run_id);
  str("output_dir", c.output_dir);
  integer("seed", c.seed);
  for (auto& s : config_problems(c)) p.push_back(s);
  if (!p.empty()) throw ConfigError(p);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

}  // namespace hv
