#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hv/run_io.hpp"
#include "hv/verify.hpp"

namespace fs = std::filesystem;

namespace {

int run_simulate(const std::string& config, const std::string& out) {
  hv::RunConfig cfg = hv::load_config(config);
  if (!out.empty()) cfg.output_dir = out;
  auto r = hv::simulate(cfg);
  std::cout << "run " << r.run_dir << ": " << r.steps << " steps, " << r.snapshots << " snapshots, max |int omega| "
            << r.max_total_vorticity << ", max bc residual " << r.max_bc_residual << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  auto checks = hv::run_suite(suite, seed);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << suite << ": " << c.name << "  measured " << c.measured.dump()
              << "  tolerance " << c.tolerance.dump() << "\n";
    ok = ok && c.pass;
  }
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream f(fs::path(out) / ("verify_" + suite + ".json"));
    f << hv::suite_report(suite, seed, checks).dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int run_export(const std::string& run_dir, const std::string& what, double t, const std::string& out) {
  std::ofstream file;
  if (!out.empty()) {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    file.open(out);
    if (!file) throw std::runtime_error("cannot write '" + out + "'");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  if (what == "energies")
    hv::export_energies(run_dir, os);
  else if (what == "snapshot")
    hv::export_snapshot(run_dir, t, os);
  else
    hv::export_boundary_trace(run_dir, os);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-plane Navier-Stokes with point-vortex data"};
  app.set_version_flag("--version", hv::kToolVersion);
  app.require_subcommand(1);

  std::string config, sim_out;
  auto* sim = app.add_subcommand("simulate", "Run the solver and write a run directory");
  sim->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Output directory (overrides output_dir)");

  std::string suite = "all", ver_out;
  std::uint64_t seed = 0;
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", suite, "kernels|biot-savart|corrector|functionals|semigroup|lemmas|all")
      ->check(CLI::IsMember([] {
        auto s = hv::suite_names();
        s.push_back("all");
        return s;
      }()));
  ver->add_option("--seed", seed, "Seed for sampled lattices");
  ver->add_option("--out", ver_out, "Directory for the JSON report");

  std::string run_dir, what, exp_out;
  double t = 0.0;
  auto* exp = app.add_subcommand("export", "Write plot-ready CSV from a complete run directory");
  exp->add_option("run_dir", run_dir, "Run directory")->required();
  exp->add_option("what", what, "energies|snapshot|boundary-trace")
      ->required()
      ->check(CLI::IsMember({"energies", "snapshot", "boundary-trace"}));
  exp->add_option("--t", t, "Time for the snapshot export (nearest stored snapshot is used)");
  exp->add_option("--out", exp_out, "CSV file (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return run_simulate(config, sim_out);
    if (*ver) return run_verify(suite, seed, ver_out);
    return run_export(run_dir, what, t, exp_out);
  } catch (const hv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hv::CflError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
