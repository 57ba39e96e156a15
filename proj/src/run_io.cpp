#include "hv/run_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "hv/biot_savart.hpp"
#include "hv/functionals.hpp"

namespace hv {

namespace fs = std::filesystem;

namespace {

void put_f64(std::ostream& out, double v) {
  unsigned char b[8];
  std::memcpy(b, &v, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("snapshot: truncated binary payload");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
  double v;
  std::memcpy(&v, b, 8);
  return v;
}

std::string hex(const unsigned char* d, unsigned n) {
  std::ostringstream os;
  for (unsigned i = 0; i < n; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(d[i]);
  return os.str();
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void write_snapshot(const std::string& path, const StateSnapshot& s, const nlohmann::json& extra) {
  const auto& g = *s.omega.grid;
  nlohmann::json h = {{"format", "hvort-snapshot"},
                      {"version", 1},
                      {"t", s.t},
                      {"grid", grid_to_json(g)},
                      {"layout", "omega_g modes, row-major (k, y), (re, im) pairs, little-endian float64"},
                      {"count", g.size()},
                      {"core",
                       {{"alpha", s.core.alpha},
                        {"delta", s.core.delta},
                        {"xc", s.core.xc},
                        {"yc", s.core.yc},
                        {"Lx", s.core.Lx}}},
                      {"strain_box", nullptr}};
  if (s.core.pert) h["strain_box"] = {{"L", s.core.pert->grid->L}, {"N", s.core.pert->grid->N}};
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot '" + path + "'");
  out << h.dump() << '\n';
  for (const cplx& c : s.omega.a) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  if (s.core.pert)
    for (double v : s.core.pert->v) put_f64(out, v);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

LoadedSnapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
  std::string line;
  std::getline(in, line);
  auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != "hvort-snapshot") throw std::runtime_error("not a snapshot file: " + path);
  GridPtr g = grid_from_json(header["grid"]);
  LoadedSnapshot L{StateSnapshot{header["t"].get<double>(), ModeField(g), VortexCore{}}, header};
  for (auto& c : L.snap.omega.a) {
    double re = get_f64(in), im = get_f64(in);
    c = cplx(re, im);
  }
  const auto& c = L.header["core"];
  L.snap.core.alpha = c["alpha"];
  L.snap.core.delta = c["delta"];
  L.snap.core.xc = c["xc"];
  L.snap.core.yc = c["yc"];
  L.snap.core.Lx = c["Lx"];
  if (!L.header["strain_box"].is_null()) {
    EtaField w(make_eta_grid(L.header["strain_box"]["L"], L.header["strain_box"]["N"]));
    for (double& v : w.v) v = get_f64(in);
    L.snap.core.pert = std::make_shared<const EtaField>(std::move(w));
  }
  return L;
}

std::string sha256_string(const std::string& s) {
  unsigned char d[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  EVP_Digest(s.data(), s.size(), d, &n, EVP_sha256(), nullptr);
  return hex(d, n);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), in.gcount());
  unsigned char d[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  EVP_DigestFinal_ex(ctx, d, &n);
  EVP_MD_CTX_free(ctx);
  return hex(d, n);
}

SimulateResult simulate(const RunConfig& cfg, const std::function<void(const StateSnapshot&)>& on_snapshot) {
  auto problems = config_problems(cfg);
  if (!problems.empty()) throw ConfigError(problems);
  const auto t0 = std::chrono::steady_clock::now();
  SimulateResult res;
  res.run_dir = cfg.output_dir;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir / "snapshots");
  fs::remove(dir / "manifest.json");

  std::vector<std::string> files;
  nlohmann::json snaps = nlohmann::json::array();
  auto finish = [&](bool complete, const std::string& error) {
    nlohmann::json sums = nlohmann::json::object();
    for (const auto& f : files)
      if (fs::exists(dir / f)) sums[f] = sha256_file((dir / f).string());
    const auto cj = config_to_json(cfg);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json m = {{"run_id", cfg.run_id},
                        {"tool_version", kToolVersion},
                        {"config", cj},
                        {"config_hash", sha256_string(cj.dump())},
                        {"files", sums},
                        {"snapshots", snaps},
                        {"steps", res.steps},
                        {"wall_clock_seconds", res.wall_seconds},
                        {"complete", complete},
                        {"partial_files", complete ? nlohmann::json::array() : nlohmann::json(files)},
                        {"error", error},
                        {"warnings", res.warnings}};
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << '\n';
  };

  std::ofstream ecsv, bcsv;
  try {
    {
      std::ofstream c(dir / "config.json");
      c << config_to_json(cfg).dump(2) << '\n';
      files.push_back("config.json");
    }
    ecsv.open(dir / "energy.csv");
    bcsv.open(dir / "bc_residual.csv");
    files.push_back("energy.csv");
    files.push_back("bc_residual.csv");
    ecsv << "t,total_vorticity,bc_residual,E_vp,E_m,E_b,log10_E_m\n";
    bcsv << "step,t,bc_residual,iterations,diverged,cfl\n";

    auto grid = grid_of(cfg);
    Stepper st(grid, stepper_config_of(cfg));
    EnergyConfig ec;
    ec.alpha = cfg.alpha;
    ec.delta = cfg.delta;
    ec.weights = weights_of(cfg);
    EnergyTracker tracker(ec);
    const double t_first = st.t();
    double last_res = 0.0;

    auto store = [&] {
      auto s = st.snapshot();
      std::ostringstream name;
      name << "snapshots/snap_" << std::setw(6) << std::setfill('0') << res.steps << ".bin";
      write_snapshot((dir / name.str()).string(), s, {{"step", res.steps}, {"run_id", cfg.run_id}});
      files.push_back(name.str());
      snaps.push_back({{"file", name.str()}, {"t", s.t}, {"step", res.steps}});
      ++res.snapshots;
      auto e = tracker.add(s);
      double tv = st.total_vorticity();
      ecsv << fmt(s.t) << ',' << fmt(tv) << ',' << fmt(last_res) << ',' << fmt(e.E_vp) << ',' << fmt(e.E_m) << ','
           << fmt(e.E_b) << ',' << fmt(e.log10_E_m) << '\n';
      if (s.t > t_first) res.max_total_vorticity = std::max(res.max_total_vorticity, std::abs(tv));
      if (!st.core_warning().empty() &&
          std::find(res.warnings.begin(), res.warnings.end(), st.core_warning()) == res.warnings.end())
        res.warnings.push_back(st.core_warning());
      if (on_snapshot) on_snapshot(s);
    };

    store();
    const int nsteps = static_cast<int>(std::ceil((cfg.T - t_first) / cfg.dt - 1e-9));
    for (int n = 1; n <= nsteps; ++n) {
      auto info = st.step();
      res.steps = n;
      last_res = info.bc_residual;
      res.max_bc_residual = std::max(res.max_bc_residual, info.bc_residual);
      bcsv << n << ',' << fmt(info.t) << ',' << fmt(info.bc_residual) << ',' << info.iterations << ','
           << (info.diverged ? 1 : 0) << ',' << fmt(info.cfl) << '\n';
      if (info.diverged) {
        std::string w = "boundary-condition iteration diverged at t = " + fmt(info.t);
        if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) res.warnings.push_back(w);
      }
      if (n % cfg.output_every == 0 || n == nsteps) store();
    }
    ecsv.close();
    bcsv.close();
    finish(true, "");
  } catch (const std::exception& e) {
    ecsv.close();
    bcsv.close();
    finish(false, e.what());
    throw;
  }
  return res;
}

nlohmann::json read_manifest(const std::string& run_dir) {
  fs::path p = fs::path(run_dir) / "manifest.json";
  if (!fs::exists(p)) throw std::runtime_error("'" + run_dir + "' has no manifest.json: incomplete run directory");
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, ',')) out.push_back(x);
  return out;
}

double log10_of(double v) { return v > 0.0 ? std::log10(v) : -std::numeric_limits<double>::infinity(); }

}  // namespace

void export_energies(const std::string& run_dir, std::ostream& out) {
  read_manifest(run_dir);
  std::ifstream in(fs::path(run_dir) / "energy.csv");
  if (!in) throw std::runtime_error("missing energy.csv in '" + run_dir + "'");
  std::string line;
  std::getline(in, line);
  out << "t,E_vp,E_m,E_b,E,log10_E_m,log10_E\n";
  while (std::getline(in, line)) {
    auto f = split(line);
    if (f.size() < 7) continue;
    double t = std::strtod(f[0].c_str(), nullptr), vp = std::strtod(f[3].c_str(), nullptr),
           em = std::strtod(f[4].c_str(), nullptr), eb = std::strtod(f[5].c_str(), nullptr),
           lem = std::strtod(f[6].c_str(), nullptr);
    double E = vp + em + eb;
    // log10(E) stays finite when E_m overflows
    double a = log10_of(vp), b = lem, c = log10_of(eb), m = std::max({a, b, c}), lE = m;
    if (std::isfinite(m)) lE = m + std::log10(std::pow(10.0, a - m) + std::pow(10.0, b - m) + std::pow(10.0, c - m));
    out << fmt(t) << ',' << fmt(vp) << ',' << fmt(em) << ',' << fmt(eb) << ',' << fmt(E) << ',' << fmt(lem) << ','
        << fmt(lE) << '\n';
  }
}

void export_snapshot(const std::string& run_dir, double t, std::ostream& out) {
  auto m = read_manifest(run_dir);
  const auto& snaps = m["snapshots"];
  if (snaps.empty()) throw std::runtime_error("no stored snapshots in '" + run_dir + "'");
  std::size_t best = 0;
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (std::abs(snaps[i]["t"].get<double>() - t) < std::abs(snaps[best]["t"].get<double>() - t)) best = i;
  auto L = read_snapshot((fs::path(run_dir) / snaps[best]["file"].get<std::string>()).string());
  const auto& g = *L.snap.omega.grid;
  PhysicalField tot = total_vorticity_field(L.snap), og = to_physical(L.snap.omega);
  out << "# requested t = " << fmt(t) << ", stored t = " << fmt(L.snap.t)
      << (L.snap.t == t ? "" : " (nearest stored snapshot)") << '\n';
  out << "x,y,omega,omega_g\n";
  for (int i = 0; i < g.Nx; ++i)
    for (int j = 0; j < g.Ny; ++j)
      out << fmt(g.x(i)) << ',' << fmt(g.y[j]) << ',' << fmt(tot(i, j)) << ',' << fmt(og(i, j)) << '\n';
}

void export_boundary_trace(const std::string& run_dir, std::ostream& out) {
  auto m = read_manifest(run_dir);
  out << "t,x,u_wall\n";
  for (const auto& s : m["snapshots"]) {
    auto L = read_snapshot((fs::path(run_dir) / s["file"].get<std::string>()).string());
    const auto& g = *L.snap.omega.grid;
    auto U = bs_half_plane(L.snap.omega);
    std::vector<cplx> c(g.Nx);
    for (int k = 0; k < g.Nx; ++k) {
      c[k] = U.u(k, 0);
      bool nyq = g.Nx % 2 == 0 && k == g.Nx / 2;
      if (L.snap.core.alpha != 0.0 && !nyq) c[k] += L.snap.core.wall_mode(g.xi(k));
    }
    for (int i = 0; i < g.Nx; ++i) {
      double x = g.x(i), u = 0.0;
      for (int k = 0; k < g.Nx; ++k) u += (c[k] * std::exp(cplx(0.0, g.xi(k) * x))).real();
      out << fmt(L.snap.t) << ',' << fmt(x) << ',' << fmt(u) << '\n';
    }
  }
}

}  // namespace hv
