// Acceptance suite: one PASS/FAIL line per primary criterion, followed by the
// measured quantities. Exit status is nonzero when any criterion fails.

#include "electroconvect/config.hpp"
#include "electroconvect/dynamics.hpp"
#include "electroconvect/measurements.hpp"
#include "electroconvect/spectral_ops.hpp"
#include "electroconvect/stokes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace ec = electroconvect;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::shared_ptr<const ec::Mesh> make_mesh(const ec::MeshParams& p) {
  return std::make_shared<const ec::Mesh>(ec::build_mesh(p));
}

ec::GalerkinBases make_bases(const ec::MeshParams& p, Eigen::Index m, Eigen::Index n) {
  auto mesh = make_mesh(p);
  return {mesh, std::make_shared<const ec::StokesBasis>(ec::stokes_basis(mesh, m)),
          std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, n))};
}

ec::RunConfig base_config(const ec::MeshParams& p, int m, int n, double dt, double t_end) {
  ec::RunConfig c;
  c.mesh = p;
  c.modes = {m, n};
  c.time.dt = dt;
  c.time.t_end = t_end;
  c.time.diag_every = 1;
  c.output.formats.clear();
  return c;
}

// Closed-form 5-point spectrum of the unit square with n cells per side.
std::vector<double> square_spectrum(int n, std::size_t count) {
  const double h = 1.0 / n;
  std::vector<double> values;
  for (int k = 1; k < n; ++k)
    for (int l = 1; l < n; ++l) {
      const double sk = std::sin(k * kPi * h / 2.0), sl = std::sin(l * kPi * h / 2.0);
      values.push_back(4.0 / (h * h) * (sk * sk + sl * sl));
    }
  std::sort(values.begin(), values.end());
  values.resize(count);
  return values;
}

Outcome eigenbasis_exactness() {
  const auto start = std::chrono::steady_clock::now();
  const auto mesh = make_mesh({ec::MeshKind::rectangle, 64, 64, 1.0, 1.0});
  const ec::EigenBasis basis = ec::dirichlet_basis(*mesh, 10);
  const double elapsed = seconds_since(start);
  const auto exact = square_spectrum(64, 10);
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(basis.value(j) - exact[j]) / exact[j]);
  const double continuum = std::abs(basis.value(0) - 2.0 * kPi * kPi) / (2.0 * kPi * kPi);
  return {worst <= 1e-10 && continuum <= 0.01 && elapsed < 30.0,
          fmt("max rel err %.2e (<= 1e-10), |mu1 - 2pi^2|/2pi^2 = %.4f (<= 0.01), %.2f s (< 30 s)", worst, continuum,
              elapsed)};
}

Outcome semigroup_exactness() {
  const ec::MeshParams p{ec::MeshKind::rectangle, 32, 32, 1.0, 1.0};
  const ec::GalerkinBases bases = make_bases(p, 8, 8);
  ec::RunConfig c = base_config(p, 8, 8, 1e-3, 1.0);
  c.time.diag_every = 100;
  c.initial.u0 = ec::parse_preset("random(1,0)");
  c.initial.q0 = ec::parse_preset("random(2,0)");
  c.toggles = {false, false, false, false};
  const ec::SimState s0 = ec::initial_state(c, bases);
  const ec::Trajectory traj = ec::run(c, bases);
  const double t = traj.final_state.t;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < 8; ++j) {
    const double a = s0.a[j] * std::exp(-bases.velocity->value(j) * t);
    const double b = s0.b[j] * std::exp(-std::sqrt(bases.charge->value(j)) * t);
    worst = std::max({worst, std::abs(traj.final_state.a[j] - a) / std::abs(a),
                      std::abs(traj.final_state.b[j] - b) / std::abs(b)});
  }
  return {worst <= 1e-12 && std::abs(t - 1.0) < 1e-15, fmt("max rel coefficient error at t = %.3f: %.2e (<= 1e-12)", t, worst)};
}

ec::MaxPrincipleTolerances max_principle_run(int cells, int modes, double& l2_growth) {
  const ec::MeshParams p{ec::MeshKind::annulus, cells, cells, 1.0, 2.0};
  ec::RunConfig c = base_config(p, modes, modes, 1e-3, 2.0);
  c.initial.q0 = ec::parse_preset("gaussian-blob(1.5,0,0.25,1)");
  c.initial.u0 = ec::parse_preset("gaussian-blob(0,1.5,0.3,1)");
  const ec::Trajectory traj = ec::run(c);
  l2_growth = 0.0;
  for (std::size_t k = 1; k < traj.records.size(); ++k)
    l2_growth = std::max(l2_growth, (traj.records[k].q_L2 - traj.records[k - 1].q_L2) / traj.records[0].q_L2);
  return ec::max_principle_tolerances(traj.records);
}

Outcome maximum_principle() {
  double growth_coarse = 0.0, growth_fine = 0.0;
  const auto coarse = max_principle_run(32, 16, growth_coarse);
  const auto fine = max_principle_run(64, 32, growth_fine);
  // Zero at both resolutions means no increase was observed at all.
  auto shrinks = [](double f, double c) { return f < c || (f == 0.0 && c == 0.0); };
  const bool ok = growth_fine <= 1e-10 && growth_coarse <= 1e-10 && shrinks(fine.l1, coarse.l1) &&
                  shrinks(fine.l4, coarse.l4) && shrinks(fine.linf, coarse.linf);
  return {ok, fmt("L2 growth %.1e/%.1e (<= 1e-10); zero tau means no increase observed; tau_L1 %.3e -> %.3e, tau_L4 %.3e -> %.3e, tau_Linf %.3e -> %.3e "
                  "(32x32,m=n=16 -> 64x64,m=n=32)",
                  growth_coarse, growth_fine, coarse.l1, fine.l1, coarse.l4, fine.l4, coarse.linf, fine.linf)};
}

Outcome energy_ledger() {
  const ec::MeshParams p{ec::MeshKind::rectangle, 32, 32, 1.0, 1.0};
  const ec::GalerkinBases bases = make_bases(p, 16, 16);
  std::vector<double> steps, residuals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    ec::RunConfig c = base_config(p, 16, 16, dt, 0.5);
    c.initial.u0 = ec::parse_preset("random(5,0.2)");
    c.initial.q0 = ec::parse_preset("random(6,0.2)");
    c.initial.q0_scale = 3.0;
    const ec::Trajectory traj = ec::run(c, bases);
    double worst = 0.0;
    for (const auto& r : traj.records) worst = std::max(worst, std::abs(r.energy_residual));
    steps.push_back(dt);
    residuals.push_back(worst);
  }
  const double lo = ec::min_pairwise_order(steps, residuals);
  const double hi = -ec::min_pairwise_order({steps[0], steps[1]}, {1.0 / residuals[0], 1.0 / residuals[1]});
  const double hi2 = std::log(residuals[1] / residuals[2]) / std::log(2.0);
  const double top = std::max(hi, hi2);
  return {lo >= 1.8 && top <= 2.2,
          fmt("max |residual| %.3e, %.3e, %.3e at dt = 4e-3, 2e-3, 1e-3; orders %.3f, %.3f (in [1.8, 2.2])",
              residuals[0], residuals[1], residuals[2], std::log(residuals[0] / residuals[1]) / std::log(2.0), hi2)};
}

Outcome advection_neutrality() {
  const ec::MeshParams p{ec::MeshKind::rectangle, 32, 32, 1.0, 1.0};
  const ec::GalerkinBases bases = make_bases(p, 16, 16);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  auto random = [&](Eigen::Index n) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v / v.norm();
  };
  double velocity = 0.0, charge = 0.0;
  for (int k = 0; k < 100; ++k) {
    const VectorXd a = random(16);
    const VectorXd b = random(16);
    velocity = std::max(velocity, std::abs(ec::nonlinear_term(*bases.velocity, a).dot(a)));
    const ec::SpectralField q{bases.charge, b};
    charge = std::max(charge, std::abs(ec::transport_term(q, a, bases).coeffs.dot(b)));
  }
  return {velocity <= 1e-12 && charge <= 1e-12,
          fmt("max |<P_m B(u,u), u>| = %.2e, max |<P_n(u.grad q), q>| = %.2e over 100 unit states (<= 1e-12)", velocity,
              charge)};
}

Outcome jump_condition() {
  const auto mesh = make_mesh({ec::MeshKind::rectangle, 64, 64, 1.0, 1.0});
  auto basis = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, 16));
  const ec::SpectralField q{basis, ec::random_span_coeffs(16, 10, 23)};
  const ec::JumpConvergence j = ec::jump_condition(q, {0.02, 0.01, 0.005});
  return {j.order >= 1.8, fmt("errors %.3e, %.3e, %.3e at dz = 0.02, 0.01, 0.005; order %.3f (>= 1.8)", j.errors[0],
                              j.errors[1], j.errors[2], j.order)};
}

Outcome cordoba() {
  double tau[2] = {0.0, 0.0};
  const int cells[2] = {32, 64};
  for (int i = 0; i < 2; ++i) {
    const auto mesh = make_mesh({ec::MeshKind::rectangle, cells[i], cells[i], 1.0, 1.0});
    const Eigen::Index n = mesh->size() / 16;
    auto basis = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, n));
    tau[i] = ec::cordoba_tolerance(basis, *mesh, 50, 31);
  }
  return {tau[1] < tau[0], fmt("tau(32^2) = %.3e, tau(64^2) = %.3e with n = N/16 modes (tau(64^2) < tau(32^2))", tau[0], tau[1])};
}

struct RegularitySups {
  double au = 0.0, lam_q = 0.0;
  double seconds = 0.0;
  bool blowup = false;
  std::string error;
};

RegularitySups regularity_run(int modes, double u_scale, double q_scale) {
  RegularitySups out;
  const auto start = std::chrono::steady_clock::now();
  const ec::MeshParams p{ec::MeshKind::rectangle, 128, 128, 1.0, 1.0};
  ec::RunConfig c = base_config(p, modes, modes, 2e-3, 5.0);
  c.time.diag_every = 5;
  c.initial.u0 = ec::parse_preset("gaussian-blob(0.4,0.5,0.15,1)");
  c.initial.q0 = ec::parse_preset("gaussian-blob(0.6,0.45,0.15,1)");
  c.initial.u0_scale = u_scale;
  c.initial.q0_scale = q_scale;
  try {
    const ec::Trajectory traj = ec::run(c);
    for (const auto& r : traj.records) {
      out.au = std::max(out.au, r.Au_H);
      out.lam_q = std::max(out.lam_q, r.lam_q_L4);
    }
  } catch (const ec::BlowupError& e) {
    out.blowup = true;
    out.error = e.what();
  } catch (const ec::Error& e) {
    out.blowup = true;
    out.error = e.what();
  }
  out.seconds = seconds_since(start);
  return out;
}

Outcome global_regularity() {
  // Scale unit-amplitude blobs so that ||A u0|| = 5 and ||q0||_{2,D} = 5 on the
  // m = n = 64 bases; the same scales are used for the doubled run.
  const ec::MeshParams p{ec::MeshKind::rectangle, 128, 128, 1.0, 1.0};
  const ec::GalerkinBases bases = make_bases(p, 64, 64);
  ec::RunConfig probe = base_config(p, 64, 64, 2e-3, 5.0);
  probe.initial.u0 = ec::parse_preset("gaussian-blob(0.4,0.5,0.15,1)");
  probe.initial.q0 = ec::parse_preset("gaussian-blob(0.6,0.45,0.15,1)");
  const ec::SimState s = ec::initial_state(probe, bases);
  const double u_scale = 5.0 / s.a.cwiseProduct(bases.velocity->values()).norm();
  const double q_scale = 5.0 / s.b.cwiseProduct(bases.charge->values()).norm();

  const RegularitySups coarse = regularity_run(64, u_scale, q_scale);
  const RegularitySups fine = regularity_run(128, u_scale, q_scale);
  if (coarse.blowup || fine.blowup)
    return {false, "run aborted: " + (coarse.blowup ? coarse.error : fine.error)};
  const double d_au = std::abs(fine.au - coarse.au) / coarse.au;
  const double d_lq = std::abs(fine.lam_q - coarse.lam_q) / coarse.lam_q;
  const double total = coarse.seconds + fine.seconds;
  return {d_au < 0.10 && d_lq < 0.10 && total < 600.0,
          fmt("sup|Au| %.4f -> %.4f (%.2f%%), sup|Lambda q|_L4 %.4f -> %.4f (%.2f%%) (< 10%%); no blow-up; %.0f s + %.0f s "
              "(< 600 s)",
              coarse.au, fine.au, 100 * d_au, coarse.lam_q, fine.lam_q, 100 * d_lq, coarse.seconds, fine.seconds)};
}

Outcome commutator_sweep() {
  double max_ratio[2] = {0.0, 0.0};
  const int cells[2] = {32, 64};
  for (int i = 0; i < 2; ++i) {
    const ec::GalerkinBases bases = make_bases({ec::MeshKind::rectangle, cells[i], cells[i], 1.0, 1.0}, 16, 64);
    max_ratio[i] = ec::commutator_ratios(bases, 200, 41).max();
  }
  const double change = std::max(max_ratio[0], max_ratio[1]) / std::min(max_ratio[0], max_ratio[1]);
  return {std::isfinite(change) && change < 2.0,
          fmt("max ratio %.4e (32^2), %.4e (64^2); factor %.3f (< 2)", max_ratio[0], max_ratio[1], change)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"eigenbasis exactness", eigenbasis_exactness},
      {"semigroup exactness", semigroup_exactness},
      {"maximum principle", maximum_principle},
      {"energy ledger", energy_ledger},
      {"advection neutrality", advection_neutrality},
      {"jump condition", jump_condition},
      {"cordoba defect", cordoba},
      {"global regularity proxy", global_regularity},
      {"commutator sweep", commutator_sweep},
  };
  std::string only = argc > 1 ? argv[1] : "";
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && name.find(only) == std::string::npos) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("[%s] %-26s %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
