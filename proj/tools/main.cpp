// electroconvect command-line driver: run, eig, verify, sweep.

#include "electroconvect/config.hpp"
#include "electroconvect/dynamics.hpp"
#include "electroconvect/eigen_cache.hpp"
#include "electroconvect/measurements.hpp"
#include "electroconvect/output.hpp"
#include "electroconvect/verify.hpp"
#include "electroconvect/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ec = electroconvect;
namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kVerifyFailed = 2, kBlowup = 3 };

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::string mesh;
  std::string cache_dir;
  long long seed = -1;
  int m = 0;
  int n = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ec::ConfigError("", "cannot read config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ec::RunConfig load_config(const Overrides& o) {
  ec::RunConfig c = o.config_path.empty() ? ec::parse_config("{}") : ec::parse_config(read_file(o.config_path));
  if (!o.mesh.empty()) c.mesh = ec::parse_mesh_spec(o.mesh);
  if (!o.out_dir.empty()) c.output.directory = o.out_dir;
  if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (o.m > 0) c.modes.m_velocity = o.m;
  if (o.n > 0) c.modes.n_charge = o.n;
  ec::validate(c);
  return c;
}

std::string snapshot_name(const ec::Snapshot& s, std::size_t index) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_%03zu_t%.6f.csv", s.field_name.c_str(), index / 2, s.time);
  return buf;
}

void write_outputs(const ec::RunConfig& config, const ec::Trajectory& traj) {
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << ec::config_to_json(config) << '\n';
  if (config.output.wants("csv")) ec::write_diagnostics(traj.records, dir / "diagnostics.csv");
  if (config.output.wants("snapshots"))
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
      ec::write_snapshot(traj.snapshots[i].values, *traj.bases.mesh, dir / "snapshots" / snapshot_name(traj.snapshots[i], i),
                         traj.snapshots[i].time, traj.snapshots[i].field_name);
}

int cmd_run(const Overrides& o) {
  const ec::RunConfig config = load_config(o);
  try {
    const ec::Trajectory traj = ec::run(config);
    write_outputs(config, traj);
    const auto& last = traj.records.back();
    std::printf("t = %.6g  |u|_H = %.6e  |q|_L2 = %.6e  energy residual = %.3e  (%zu records)\n", last.t, last.u_H,
                last.q_L2, last.energy_residual, traj.records.size());
    return kSuccess;
  } catch (const ec::BlowupError& e) {
    std::fprintf(stderr, "blow-up: %s\nlast good record at t = %.6g: |u|_H = %.6e, |Au|_H = %.6e, |q|_L2 = %.6e\n",
                 e.what(), e.last_good().t, e.last_good().u_H, e.last_good().Au_H, e.last_good().q_L2);
    return kBlowup;
  } catch (const ec::CflError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kUsage;
  }
}

int cmd_eig(const Overrides& o, const std::string& kind, int count) {
  const ec::MeshParams params = ec::parse_mesh_spec(o.mesh.empty() ? "square" : o.mesh);
  auto mesh = std::make_shared<const ec::Mesh>(ec::build_mesh(params));
  ec::EigenOptions options;
  if (o.seed >= 0) options.seed = static_cast<std::uint64_t>(o.seed);
  Eigen::VectorXd values;
  if (kind == "stokes") {
    values = ec::cached_stokes_basis(mesh, count, options, o.cache_dir)->values();
  } else {
    values = ec::cached_dirichlet_basis(*mesh, count, options, o.cache_dir)->values();
  }
  std::printf("# %s eigenvalues, %s mesh %dx%d\n", kind.c_str(), ec::to_string(params.kind).c_str(), params.n1,
              params.n2);
  for (Eigen::Index j = 0; j < values.size(); ++j) std::printf("%ld %s\n", static_cast<long>(j + 1), ec::format_double(values[j]).c_str());
  return kSuccess;
}

int cmd_verify(const Overrides& o) {
  const ec::MeshParams params = ec::parse_mesh_spec(o.mesh.empty() ? "square:32" : o.mesh);
  const ec::VerifyReport report = ec::run_verify(params, o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 0);
  std::fputs(report.table().c_str(), stdout);
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return !c.passed; });
  std::printf("%zu checks, %ld failed\n", report.checks.size(), static_cast<long>(failed));
  return failed ? kVerifyFailed : kSuccess;
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ELECTROCONVECT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) cap = static_cast<unsigned>(v);
  }
  return cap;
}

int cmd_sweep(const Overrides& o, const std::vector<std::string>& meshes, int samples, int modes) {
  const std::vector<std::string> specs = meshes.empty() ? std::vector<std::string>{"square:32", "square:64"} : meshes;
  const fs::path dir = o.out_dir.empty() ? fs::path("sweep") : fs::path(o.out_dir);
  const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 0;
  const int m = o.m > 0 ? o.m : 16;
  const int n = o.n > 0 ? o.n : 64;

  std::vector<std::string> summaries(specs.size());
  std::vector<std::string> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        auto mesh = std::make_shared<const ec::Mesh>(ec::build_mesh(ec::parse_mesh_spec(specs[i])));
        ec::EigenOptions options;
        options.seed = seed;
        ec::GalerkinBases bases{mesh, ec::cached_stokes_basis(mesh, m, options, o.cache_dir),
                                ec::cached_dirichlet_basis(*mesh, n, options, o.cache_dir)};
        const auto comm = ec::commutator_ratios(bases, samples, seed, modes, modes);
        const auto l4 = ec::lfour_ratios(bases.charge, *mesh, samples, seed, modes);
        const auto st = ec::stokes_inequality_ratios(*bases.velocity, samples, seed, modes);
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < samples; ++k) {
          const auto s = static_cast<std::size_t>(k);
          rows.push_back({double(k), comm.values[s], l4.values[s], st.ulfour.values[s], st.naulfour.values[s],
                          st.buuau.values[s], st.abuu.values[s]});
        }
        std::string stem = specs[i];
        std::replace_if(stem.begin(), stem.end(), [](char c) { return c == ':' || c == ','; }, '_');
        ec::write_table(dir / ("sweep_" + stem + ".csv"),
                        {"sample", "commutator", "lfour", "ulfour", "naulfour", "buuau", "abuu"}, rows);
        char line[256];
        std::snprintf(line, sizeof line, "%-24s %12.5e %12.5e %12.5e %12.5e %12.5e %12.5e", specs[i].c_str(),
                      comm.max(), l4.max(), st.ulfour.max(), st.naulfour.max(), st.buuau.max(), st.abuu.max());
        summaries[i] = line;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned count = std::min<unsigned>(thread_cap(), static_cast<unsigned>(specs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::printf("%-24s %12s %12s %12s %12s %12s %12s\n", "mesh (max ratio)", "commutator", "lfour", "ulfour", "naulfour",
              "buuau", "abuu");
  int status = kSuccess;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!errors[i].empty()) {
      std::fprintf(stderr, "%s: %s\n", specs[i].c_str(), errors[i].c_str());
      status = kUsage;
    } else {
      std::printf("%s\n", summaries[i].c_str());
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin electroconvection simulator"};
  app.set_version_flag("--version", std::string(ec::kCodeVersion));
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mesh", o.mesh, "square | square:N | rectangle:nx,ny,lx,ly | annulus:nr,ntheta,ri,ro");
    sub->add_option("--seed", o.seed, "Seed for eigensolver start vectors and sampling")->check(CLI::NonNegativeNumber);
    sub->add_option("--cache", o.cache_dir, "Eigenpair cache directory");
  };

  CLI::App* run = app.add_subcommand("run", "Integrate the Galerkin system");
  add_common(run);
  run->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  run->add_option("--out", o.out_dir, "Output directory (overrides output.directory)");
  run->add_option("--m", o.m, "Velocity modes")->check(CLI::PositiveNumber);
  run->add_option("--n", o.n, "Charge modes")->check(CLI::PositiveNumber);

  std::string eig_kind = "dirichlet";
  CLI::App* eig = app.add_subcommand("eig", "Compute, cache and print eigenvalues");
  add_common(eig);
  eig->add_option("--m", o.m, "Number of eigenpairs")->check(CLI::PositiveNumber)->required();
  eig->add_option("--kind", eig_kind, "dirichlet or stokes")->check(CLI::IsMember({"dirichlet", "stokes"}));

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite and print a pass/fail table");
  add_common(verify);

  std::vector<std::string> sweep_meshes;
  int samples = 200;
  int sweep_modes = 10;
  CLI::App* sweep = app.add_subcommand("sweep", "Measure inequality constants over random samples");
  sweep->add_option("--mesh", sweep_meshes, "Meshes to sweep; one concurrent job each")->expected(1, -1);
  sweep->add_option("--seed", o.seed, "Sampling seed")->check(CLI::NonNegativeNumber);
  sweep->add_option("--cache", o.cache_dir, "Eigenpair cache directory");
  sweep->add_option("--out", o.out_dir, "Output directory");
  sweep->add_option("--samples", samples, "Random samples per mesh")->check(CLI::PositiveNumber);
  sweep->add_option("--modes", sweep_modes, "Modes populated by random fields")->check(CLI::PositiveNumber);
  sweep->add_option("--m", o.m, "Velocity basis size")->check(CLI::PositiveNumber);
  sweep->add_option("--n", o.n, "Charge basis size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*eig) return cmd_eig(o, eig_kind, o.m);
    if (*verify) return cmd_verify(o);
    if (*sweep) return cmd_sweep(o, sweep_meshes, samples, sweep_modes);
  } catch (const ec::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kUsage;
  } catch (const ec::InvalidArgument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kVerifyFailed;
  }
  return kUsage;
}
