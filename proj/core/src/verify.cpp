#include "electroconvect/verify.hpp"

#include "electroconvect/config.hpp"
#include "electroconvect/dynamics.hpp"
#include "electroconvect/measurements.hpp"
#include "electroconvect/spectral_ops.hpp"
#include "electroconvect/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace electroconvect {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  // Records value <= threshold.
  void at_most(const std::string& module, const std::string& name, double value, double threshold) {
    report_.checks.push_back({module, name, value, threshold, std::isfinite(value) && value <= threshold});
  }
  // Records value >= threshold.
  void at_least(const std::string& module, const std::string& name, double value, double threshold) {
    report_.checks.push_back({module, name, value, threshold, std::isfinite(value) && value >= threshold});
  }

 private:
  VerifyReport& report_;
};

VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

std::vector<double> rectangle_spectrum(const MeshParams& p, std::size_t count) {
  const double hx = p.a / p.n1;
  const double hy = p.b / p.n2;
  std::vector<double> values;
  for (int k = 1; k < p.n1; ++k)
    for (int l = 1; l < p.n2; ++l) {
      const double sx = std::sin(k * kPi * hx / (2.0 * p.a));
      const double sy = std::sin(l * kPi * hy / (2.0 * p.b));
      values.push_back(4.0 / (hx * hx) * sx * sx + 4.0 / (hy * hy) * sy * sy);
    }
  std::sort(values.begin(), values.end());
  values.resize(std::min(count, values.size()));
  return values;
}

double max_relative(const VectorXd& got, const VectorXd& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < want.size(); ++i)
    if (want[i] != 0.0) worst = std::max(worst, std::abs(got[i] - want[i]) / std::abs(want[i]));
  return worst;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::table() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-44s %12s %12s  %s\n", "module", "check", "value", "threshold", "result");
  out += line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-12s %-44s %12.4e %12.4e  %s\n", c.module.c_str(), c.name.c_str(), c.value,
                  c.threshold, c.passed ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

VerifyReport run_verify(const MeshParams& params, std::uint64_t seed) {
  VerifyReport report;
  Suite suite(report);
  std::mt19937_64 rng(seed);

  auto mesh = std::make_shared<const Mesh>(build_mesh(params));
  const Eigen::Index nodes = mesh->size();
  EigenOptions options;
  options.seed = seed;

  // mesh
  {
    const auto lap = assemble_laplacian(*mesh);
    const Eigen::SparseMatrix<double> k = lap.stiffness();
    const double asym = Eigen::SparseMatrix<double>(k - Eigen::SparseMatrix<double>(k.transpose())).norm() / k.norm();
    suite.at_most("mesh", "stiffness symmetry", asym, 1e-14);

    const VectorXd f = random_vector(nodes, rng);
    const VectorField v{random_vector(nodes, rng), random_vector(nodes, rng)};
    const VectorField g = gradient(*mesh, f);
    const double adj = std::abs(inner(*mesh, g, v) + inner(*mesh, f, divergence(*mesh, v)));
    suite.at_most("mesh", "divergence = -gradient^T (weighted)", adj / (l2_norm(*mesh, g) * l2_norm(*mesh, v)),
                  1e-12);
  }

  // eigensolver
  const Eigen::Index n_modes = std::min<Eigen::Index>(16, nodes / 4);
  auto charge = std::make_shared<const EigenBasis>(dirichlet_basis(*mesh, n_modes, options));
  {
    if (params.kind == MeshKind::rectangle) {
      const auto exact = rectangle_spectrum(params, 5);
      const VectorXd want = Eigen::Map<const VectorXd>(exact.data(), static_cast<Eigen::Index>(exact.size()));
      suite.at_most("eigensolver", "first 5 eigenvalues vs closed form (rel)", max_relative(charge->values().head(5), want),
                    1e-10);
    }
    const MatrixXd& phi = charge->vectors();
    const MatrixXd gram = phi.transpose() * mesh->weights().asDiagonal() * phi;
    suite.at_most("eigensolver", "weighted orthonormality", (gram - MatrixXd::Identity(n_modes, n_modes)).cwiseAbs().maxCoeff(),
                  1e-10);
    const auto lap = assemble_laplacian(*mesh);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n_modes; ++j) {
      const VectorXd r = lap.apply(phi.col(j)) - charge->value(j) * phi.col(j);
      worst = std::max(worst, std::sqrt(inner(*mesh, r, r)) / charge->value(j));
    }
    suite.at_most("eigensolver", "residual ||L phi - mu phi|| / mu", worst, 1e-8);
    bool ascending = charge->value(0) > 0.0;
    for (Eigen::Index j = 1; j < n_modes; ++j) ascending = ascending && charge->value(j) >= charge->value(j - 1);
    suite.at_least("eigensolver", "0 < mu_1 <= mu_2 <= ...", ascending ? 1.0 : 0.0, 1.0);
  }

  // spectral_ops
  {
    const VectorXd c = random_vector(n_modes, rng);
    const SpectralField sf{charge, c};
    const ScalarField grid = from_coeffs(sf);
    suite.at_most("spectral_ops", "to_coeffs o from_coeffs round trip", (to_coeffs(charge, grid).coeffs - c).norm() / c.norm(),
                  1e-12);
    suite.at_most("spectral_ops", "Parseval", std::abs(inner(*mesh, grid, grid) - c.squaredNorm()) / c.squaredNorm(), 1e-10);
    const VectorXd added = apply_fractional(apply_fractional(sf, 1.5), -0.5).coeffs;
    suite.at_most("spectral_ops", "exponent additivity", (added - apply_fractional(sf, 1.0).coeffs).norm() / c.norm(), 1e-12);
    const VectorXd composed =
        poisson_extension(poisson_extension(sf, 0.03, PoissonVariant::semigroup), 0.05).coeffs;
    const VectorXd direct = poisson_extension(sf, 0.08).coeffs;
    suite.at_most("spectral_ops", "Poisson semigroup property", (composed - direct).norm() / direct.norm(), 1e-12);

    const SpectralField smooth{charge, random_span_coeffs(n_modes, 10, seed + 7)};
    const JumpConvergence jump = jump_condition(smooth, {0.02, 0.01, 0.005});
    suite.at_least("spectral_ops", "jump condition order in dz", jump.order, 1.8);

    const VectorField r = riesz(*charge, *mesh, SpectralField{charge, VectorXd::Unit(n_modes, 0)});
    suite.at_most("spectral_ops", "| ||R phi_1|| - 1 |", std::abs(l2_norm(*mesh, r) - 1.0), 0.05);

    if (nodes <= 1500) {
      EigenOptions dense = options;
      dense.method = EigenMethod::dense;
      auto full = std::make_shared<const EigenBasis>(dirichlet_basis(*mesh, nodes, dense));
      const double tau = cordoba_tolerance(full, *mesh, 5, seed + 11);
      suite.at_most("spectral_ops", "Cordoba defect >= -tau (full basis)", tau, 1e-6);
    }
  }

  // stokes
  const Eigen::Index m_modes = std::min<Eigen::Index>(8, nodes / 4);
  auto velocity = std::make_shared<const StokesBasis>(stokes_basis(mesh, m_modes, options));
  {
    MatrixXd gram(m_modes, m_modes);
    double div = 0.0;
    for (Eigen::Index i = 0; i < m_modes; ++i) {
      div = std::max(div, divergence(*mesh, velocity->velocity(i)).cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < m_modes; ++j) gram(i, j) = inner(*mesh, velocity->velocity(i), velocity->velocity(j));
    }
    suite.at_most("stokes", "velocity orthonormality", (gram - MatrixXd::Identity(m_modes, m_modes)).cwiseAbs().maxCoeff(),
                  1e-8);
    suite.at_most("stokes", "max |div w_j|", div, 1e-10);
    suite.at_least("stokes", "lambda_1 - mu_1", velocity->value(0) - charge->value(0), 0.0);

    const VectorField g = gradient(*mesh, charge->vector(0));
    suite.at_most("stokes", "Leray projection of grad phi_1", leray_project(*velocity, g).cwiseAbs().maxCoeff() / l2_norm(*mesh, g),
                  1e-8);

    const StokesPencil pencil = assemble_stokes_pencil(*mesh);
    double pencil_res = 0.0;
    for (Eigen::Index j = 0; j < m_modes; ++j) {
      const VectorXd kpsi = pencil.biharmonic * velocity->stream().col(j);
      const VectorXd r = kpsi - velocity->value(j) * (pencil.velocity_mass * velocity->stream().col(j));
      pencil_res = std::max(pencil_res, r.norm() / kpsi.norm());
    }
    suite.at_most("stokes", "discrete A residual (pencil)", pencil_res, 1e-6);

    const VelocityCoeffs a = random_vector(m_modes, rng);
    const VectorField u = velocity->reconstruct(a);
    const ScalarField f = random_vector(nodes, rng);
    const ScalarField adv = advect(*mesh, u, f);
    suite.at_most("stokes", "<advect(u,f), f> (rel)", std::abs(inner(*mesh, adv, f)) / (std::sqrt(inner(*mesh, adv, adv)) * std::sqrt(inner(*mesh, f, f))),
                  1e-12);
    const VelocityCoeffs b = nonlinear_term(*velocity, a);
    suite.at_most("stokes", "<P_m B(u,u), u> (rel)", std::abs(b.dot(a)) / (b.norm() * a.norm()), 1e-12);

    const StokesBasis single(mesh, velocity->values().head(1), velocity->stream().leftCols(1));
    const VelocityCoeffs one = nonlinear_term(single, VectorXd::Ones(1));
    suite.at_most("stokes", "m = 1 nonlinear term (rel)", std::abs(one[0]) / l2_norm(*mesh, advect(*mesh, single.velocity(0), single.velocity(0))),
                  1e-12);
  }

  // dynamics
  {
    GalerkinBases bases{mesh, velocity, charge};
    RunConfig config;
    config.mesh = params;
    config.modes = {static_cast<int>(m_modes), static_cast<int>(n_modes)};
    config.time.dt = 1e-3;
    config.time.t_end = 0.1;
    config.time.diag_every = 10;
    config.initial.u0 = parse_preset("random(3,0.3)");
    config.initial.q0 = parse_preset("random(4,0.3)");
    config.toggles.coupling_on = false;
    config.toggles.transport_on = false;
    config.toggles.nonlinear_on = false;
    config.output.formats.clear();

    const SimState s0 = initial_state(config, bases);
    const Trajectory decoupled = run(config, bases);
    const double t = decoupled.final_state.t;
    const VectorXd a_exact = s0.a.cwiseProduct((-t * velocity->values().array()).exp().matrix());
    const VectorXd b_exact = s0.b.cwiseProduct((-t * charge->values().cwiseSqrt().array()).exp().matrix());
    suite.at_most("dynamics", "decoupled semigroup exactness (rel)",
                  std::max(max_relative(decoupled.final_state.a, a_exact), max_relative(decoupled.final_state.b, b_exact)),
                  1e-12);

    config.toggles = Toggles{};
    const Trajectory coupled = run(config, bases);
    double growth = 0.0;
    for (std::size_t k = 1; k < coupled.records.size(); ++k)
      growth = std::max(growth, (coupled.records[k].q_L2 - coupled.records[k - 1].q_L2) / coupled.records[0].q_L2);
    suite.at_most("dynamics", "||q||_L2 nonincreasing (rel growth)", growth, 1e-10);
    // Charge and velocity ledgers close at second order in dt.
    std::vector<double> steps, charge_res, energy_res;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      RunConfig refined = config;
      refined.time.dt = dt;
      const Trajectory t = run(refined, bases);
      steps.push_back(dt);
      charge_res.push_back(std::abs(t.records.back().charge_residual));
      energy_res.push_back(std::abs(t.records.back().energy_residual));
    }
    suite.at_least("dynamics", "charge L2 ledger order in dt", min_pairwise_order(steps, charge_res), 1.8);
    suite.at_least("dynamics", "energy ledger order in dt", min_pairwise_order(steps, energy_res), 1.8);

    const SpectralField q{charge, s0.b};
    const VectorXd plus = force_term(q, *velocity);
    const VectorXd minus = force_term(SpectralField{charge, -s0.b}, *velocity);
    suite.at_most("dynamics", "force(q) = force(-q)", (plus - minus).norm() / plus.norm(), 1e-14);
    const SpectralField tq = transport_term(q, s0.a, bases);
    suite.at_most("dynamics", "<P_n(u.grad q), q> (rel)", std::abs(tq.coeffs.dot(s0.b)) / (tq.coeffs.norm() * s0.b.norm()),
                  1e-12);

    config.initial.u0 = InitialPreset{};
    config.initial.q0 = InitialPreset{};
    const Trajectory zero = run(config, bases);
    double largest = 0.0;
    for (const auto& r : zero.records) largest = std::max({largest, r.u_H, r.Au_H, r.q_L1, r.q_Linf, r.lam_q_L4});
    suite.at_most("dynamics", "zero data stays zero", largest, 0.0);
  }

  // cli_io
  {
    RunConfig config;
    config.mesh = params;
    const RunConfig echoed = parse_config(config_to_json(config));
    suite.at_most("cli_io", "config echo round trip", config_to_json(echoed) == config_to_json(config) ? 0.0 : 1.0, 0.0);
  }
  return report;
}

}  // namespace electroconvect
