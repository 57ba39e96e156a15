#include <filesystem>
#include <fstream>
#include <iostream>

#include "hv/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  double max_seconds;
  std::vector<hv::Check> checks;
};

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = 1;
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hvort_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  auto one = [](hv::Check c) { return std::vector<hv::Check>{std::move(c)}; };
  std::vector<Criterion> cs;
  auto run = [&](int id, std::string title, double max_seconds, auto make) {
    cs.push_back({id, std::move(title), max_seconds, make()});
    const auto& c = cs.back();
    bool ok = true;
    double secs = 0.0;
    nlohmann::json measured = nlohmann::json::array();
    for (const auto& k : c.checks) {
      ok = ok && k.pass;
      secs += k.seconds;
      measured.push_back({{k.name, k.measured}});
    }
    bool in_time = secs <= c.max_seconds;
    std::cout << ((ok && in_time) ? "PASS" : "FAIL") << " " << id << " " << c.title << "  " << measured.dump()
              << "  (" << secs << " s, limit " << c.max_seconds << " s)\n"
              << std::flush;
    return ok && in_time;
  };

  bool all = true;
  all &= run(1, "kernel identity d_y R = d_z R", 10, [&] { return one(hv::check_kernel_identity(seed)); });
  all &= run(2, "kernel cross-path", 60, [&] { return one(hv::check_kernel_cross_path(seed)); });
  all &= run(3, "Biot-Savart oracle, no-penetration, divergence order", 120, [&] {
    return std::vector<hv::Check>{hv::check_bs_oseen(), hv::check_bs_no_penetration(), hv::check_bs_divergence_order()};
  });
  all &= run(4, "boundary trace", 30, [&] { return one(hv::check_boundary_trace()); });
  all &= run(5, "corrector", 60, [&] { return one(hv::check_corrector()); });
  all &= run(6, "solver vs Duhamel cross-validation", 1800, [&] { return one(hv::check_duhamel_cross()); });
  all &= run(7, "circulation conservation", 1800, [&] { return one(hv::check_conservation((work / "default_run").string())); });
  all &= run(8, "weak-* initial trace", 2700, [&] { return one(hv::check_weak_star()); });
  all &= run(9, "Oseen steadiness and semigroup shapes", 1200, [&] { return one(hv::check_semigroup({0.5, 2.0, 8.0})); });
  all &= run(10, "recovery, product and integral estimates", 300, [&] { return one(hv::check_lemmas(seed)); });
  all &= run(11, "self-similar residual", 1200, [&] { return one(hv::check_self_similar_residual()); });
  all &= run(12, "energy trend along the delta-ladder", 1e9, [&] { return one(hv::check_energy_trend()); });

  nlohmann::json report = nlohmann::json::array();
  for (const auto& c : cs) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& k : c.checks) checks.push_back(k.to_json());
    report.push_back({{"criterion", c.id}, {"title", c.title}, {"checks", checks}});
  }
  std::ofstream(work / "acceptance_report.json") << report.dump(2) << "\n";
  std::cout << "report: " << (work / "acceptance_report.json").string() << "\n";
  return all ? 0 : 1;
}
