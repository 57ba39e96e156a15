#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hv/run_config.hpp"
#include "hv/stepper.hpp"
#include "json.hpp"

namespace hv {

inline constexpr const char* kToolVersion = "hvort 1.0.0";

// Snapshot file: one line of JSON header, then the grid part omega_g as
// little-endian float64 (re, im) pairs in row-major (k, y) order, then the
// core's strain-response box (N * N float64, i-major) when the header says so.
void write_snapshot(const std::string& path, const StateSnapshot& s, const nlohmann::json& extra = {});
struct LoadedSnapshot {
  StateSnapshot snap;
  nlohmann::json header;
};
LoadedSnapshot read_snapshot(const std::string& path);

std::string sha256_file(const std::string& path);
std::string sha256_string(const std::string& s);

struct SimulateResult {
  std::string run_dir;
  int steps = 0;
  int snapshots = 0;
  double wall_seconds = 0.0;
  double max_total_vorticity = 0.0;  // over stored t > t_start
  double max_bc_residual = 0.0;
  std::vector<std::string> warnings;
};

// Runs the solver to T. Writes config.json, snapshots/, energy.csv,
// bc_residual.csv and finally manifest.json. Config problems throw
// ConfigError before anything is written; a CflError or any later failure
// writes a manifest with complete = false and rethrows. The callback sees
// every stored snapshot.
SimulateResult simulate(const RunConfig& cfg, const std::function<void(const StateSnapshot&)>& on_snapshot = {});

// Manifest of a run directory; throws when it is missing (incomplete run).
nlohmann::json read_manifest(const std::string& run_dir);

// CSV writers, each requiring a manifest.
// energies: t, E_vp, E_m, E_b, E (plus log10_E_m, log10_E)
void export_energies(const std::string& run_dir, std::ostream& out);
// nearest stored snapshot to t: x, y, omega (total), omega_g; the header notes both times
void export_snapshot(const std::string& run_dir, double t, std::ostream& out);
// t, x, u(x, 0) of the total field from the half-plane law (no-slip residual)
void export_boundary_trace(const std::string& run_dir, std::ostream& out);

}  // namespace hv
