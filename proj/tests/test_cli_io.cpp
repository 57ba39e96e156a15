#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hv/run_io.hpp"
#include "hv/verify.hpp"

using namespace hv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hvort_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config validation lists every problem") {
  nlohmann::json j = {{"Nx", 7}, {"dt", -1.0}, {"bogus", 1}, {"alpha", "one"}};
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems.size() >= 4);
    std::string all = e.what();
    CHECK(all.find("bogus") != std::string::npos);
    CHECK(all.find("alpha") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config JSON round trip") {
  RunConfig c;
  c.alpha = 0.5;
  c.run_id = "x";
  auto d = config_from_json(config_to_json(c));
  CHECK(config_to_json(d) == config_to_json(c));
}

TEST_CASE("sha256") {
  CHECK(sha256_string("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("snapshot files round trip") {
  auto dir = scratch("snap");
  fs::create_directories(dir);
  StepperConfig c;
  Stepper s(make_grid(160.0, 256, 60.0, 256, 1.02), c);
  s.step();
  auto snap = s.snapshot();
  write_snapshot((dir / "s.bin").string(), snap);
  auto back = read_snapshot((dir / "s.bin").string());
  CHECK(back.snap.t == snap.t);
  CHECK(back.snap.core.xc == snap.core.xc);
  for (std::size_t q = 0; q < snap.omega.a.size(); ++q) CHECK(back.snap.omega.a[q] == snap.omega.a[q]);
  REQUIRE(snap.core.pert);
  REQUIRE(back.snap.core.pert);
  CHECK(back.snap.core.pert->v == snap.core.pert->v);
}

TEST_CASE("simulate, manifest, exports, reproducibility") {
  auto dir = scratch("run");
  RunConfig c;
  c.alpha = 0.0;
  c.T = 0.01;
  c.output_every = 3;
  c.output_dir = dir.string();
  auto r = simulate(c);
  CHECK(r.steps > 0);
  auto m = read_manifest(dir.string());
  CHECK(m["complete"].get<bool>());
  CHECK(m["config_hash"].get<std::string>().size() == 64);

  std::ostringstream e;
  export_energies(dir.string(), e);
  std::istringstream in(e.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("t,E_vp,E_m,E_b,E", 0) == 0);
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    for (int k = 0; k < 4; ++k) {
      std::getline(ls, cell, ',');
      CHECK(std::stod(cell) == 0.0);
    }
  }
  std::ostringstream snap;
  export_snapshot(dir.string(), 1.0, snap);
  CHECK(snap.str().rfind("#", 0) == 0);
  std::ostringstream trace;
  export_boundary_trace(dir.string(), trace);
  CHECK(trace.str().rfind("t,x,u_wall", 0) == 0);

  // a re-run reproduces every file checksum
  fs::remove_all(dir);
  simulate(c);
  auto m2 = read_manifest(dir.string());
  CHECK(m2["files"] == m["files"]);
  CHECK(m2["config_hash"] == m["config_hash"]);
}

TEST_CASE("incomplete and invalid runs") {
  auto dir = scratch("empty");
  fs::create_directories(dir);
  CHECK_THROWS(read_manifest(dir.string()));
  std::ostringstream o;
  CHECK_THROWS(export_energies(dir.string(), o));

  auto bad = scratch("bad");
  RunConfig c;
  c.Nx = 7;
  c.output_dir = bad.string();
  CHECK_THROWS_AS(simulate(c), ConfigError);
  CHECK_FALSE(fs::exists(bad));
}

TEST_CASE("verify suites: dispatch and determinism") {
  CHECK_THROWS_AS(run_suite("nope", 0), std::invalid_argument);
  auto a = suite_report("lemmas", 4, run_suite("lemmas", 4));
  auto b = suite_report("lemmas", 4, run_suite("lemmas", 4));
  CHECK(a.dump() == b.dump());
  CHECK(a["status"] == "pass");
  for (const auto& c : a["checks"]) {
    CHECK(c.contains("paper_ref"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("tolerance"));
  }
}
