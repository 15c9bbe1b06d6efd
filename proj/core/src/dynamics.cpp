#include "electroconvect/dynamics.hpp"

#include "electroconvect/eigen_cache.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace electroconvect {

namespace {

using Eigen::VectorXd;

// Largest grid on which the full-grid charge basis is computed densely.
constexpr Eigen::Index kFullGridLimit = 2500;

VelocityCoeffs force_from_grid(const ScalarField& q, const VectorField& rq, const StokesBasis& sbasis) {
  const VectorField product{-q.cwiseProduct(rq.c0), -q.cwiseProduct(rq.c1)};
  return leray_project(sbasis, product);
}

VectorXd random_coeffs(Eigen::Index count, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorXd c(count);
  for (Eigen::Index j = 0; j < count; ++j) c[j] = normal(rng) * std::exp(-decay * static_cast<double>(j));
  return c;
}

ScalarField gaussian_blob(const Mesh& mesh, const InitialPreset& p) {
  const auto dx = (mesh.x().array() - p.x0).square();
  const auto dy = (mesh.y().array() - p.y0).square();
  return (p.amplitude * (-(dx + dy) / (2.0 * p.sigma * p.sigma)).exp()).matrix();
}

void require_mode(const InitialPreset& p, Eigen::Index available, const std::string& path) {
  if (p.mode > available)
    throw ConfigError(path, "eigen:" + std::to_string(p.mode) + " exceeds the " + std::to_string(available) +
                                " computed modes");
}

// Tracked norms for the blow-up guard, all available from coefficients.
struct CoefficientNorms {
  double u_H, Au_H, q_L2, q_D2;
  double composite() const { return u_H + Au_H + q_L2 + q_D2; }
  double largest() const { return std::max({u_H, Au_H, q_L2, q_D2}); }
};

CoefficientNorms coefficient_norms(const SimState& s, const GalerkinBases& bases) {
  return {s.a.norm(), s.a.cwiseProduct(bases.velocity->values()).norm(), s.b.norm(),
          s.b.cwiseProduct(bases.charge->values()).norm()};
}

double velocity_dissipation_density(const SimState& s, const GalerkinBases& bases) {
  return s.a.cwiseProduct(s.a).dot(bases.velocity->values());
}

double charge_dissipation_density(const SimState& s, const GalerkinBases& bases) {
  return s.b.cwiseProduct(s.b).dot(bases.charge->values().cwiseSqrt());
}

}  // namespace

void GalerkinBases::check() const {
  if (!mesh || !velocity || !charge) throw InvalidArgument("GalerkinBases: missing mesh or basis");
  if (&velocity->mesh() != mesh.get() && !(velocity->mesh().params() == mesh->params()))
    throw MismatchError("velocity basis lives on a different mesh");
  if (charge->dimension() != mesh->size()) throw MismatchError("charge basis lives on a different mesh");
}

StepParams StepParams::from(const Toggles& toggles) {
  StepParams p;
  p.coupling_on = toggles.coupling_on;
  p.transport_on = toggles.transport_on;
  p.nonlinear_on = toggles.nonlinear_on;
  return p;
}

VelocityCoeffs force_term(const SpectralField& q, const StokesBasis& sbasis) {
  const ScalarField grid = from_coeffs(q);
  return force_from_grid(grid, riesz(*q.basis, sbasis.mesh(), q), sbasis);
}

SpectralField transport_term(const SpectralField& q, const VelocityCoeffs& a, const GalerkinBases& bases) {
  const VectorField u = bases.velocity->reconstruct(a);
  return to_coeffs(q.basis, advect(*bases.mesh, u, from_coeffs(q)));
}

Rates nonlinear_rates(const SimState& state, const GalerkinBases& bases, const StepParams& params) {
  const Mesh& mesh = *bases.mesh;
  const StokesBasis& sb = *bases.velocity;
  const VectorField u = sb.reconstruct(state.a);

  Rates r;
  r.da = VectorXd::Zero(sb.size());
  r.db = VectorXd::Zero(bases.charge->size());
  r.force = VectorXd::Zero(sb.size());
  r.u_max = magnitude(u).maxCoeff();

  if (params.nonlinear_on) r.da -= leray_project(sb, advect(mesh, u, u));
  if (params.coupling_on || params.transport_on) {
    const SpectralField q{bases.charge, state.b};
    const ScalarField grid = from_coeffs(q);
    if (params.coupling_on) {
      r.force = force_from_grid(grid, riesz(*bases.charge, mesh, q), sb);
      r.da += r.force;
    }
    if (params.transport_on) r.db = -to_coeffs(bases.charge, advect(mesh, u, grid)).coeffs;
  }
  return r;
}

SimState step(const SimState& state, double dt, const GalerkinBases& bases, const StepParams& params,
              const Rates* k1_in) {
  if (!(dt > 0.0)) throw InvalidArgument("step needs dt > 0");
  if (state.a.size() != bases.velocity->size() || state.b.size() != bases.charge->size())
    throw MismatchError("state does not match the bases");

  const Rates k1 = k1_in ? *k1_in : nonlinear_rates(state, bases, params);
  const double h = bases.mesh->min_spacing();
  if (dt * k1.u_max / h > params.cfl_limit) {
    const double suggested = 0.8 * params.cfl_limit * h / k1.u_max;
    std::ostringstream msg;
    msg.precision(6);
    msg << "CFL guard violated at t = " << state.t << ": dt |u|_inf / h = " << dt * k1.u_max / h << " > "
        << params.cfl_limit << "; try dt <= " << suggested;
    throw CflError(msg.str(), suggested);
  }

  const VectorXd lam = bases.velocity->values();
  const VectorXd root_mu = bases.charge->values().cwiseSqrt();
  const VectorXd ev_half = (-0.5 * dt * lam.array()).exp().matrix();
  const VectorXd ec_half = (-0.5 * dt * root_mu.array()).exp().matrix();

  SimState mid{state.t + 0.5 * dt, ev_half.cwiseProduct(state.a + 0.5 * dt * k1.da),
               ec_half.cwiseProduct(state.b + 0.5 * dt * k1.db)};
  const Rates k2 = nonlinear_rates(mid, bases, params);

  // e^{-D dt} = (e^{-D dt/2})^2 would round differently from the direct form;
  // the direct exponential keeps the decoupled solution exact.
  const VectorXd ev = (-dt * lam.array()).exp().matrix();
  const VectorXd ec = (-dt * root_mu.array()).exp().matrix();
  SimState next{state.t + dt, ev.cwiseProduct(state.a) + dt * ev_half.cwiseProduct(k2.da),
                ec.cwiseProduct(state.b) + dt * ec_half.cwiseProduct(k2.db)};
  if (!next.a.allFinite() || !next.b.allFinite())
    throw BlowupError("non-finite state after the step from t = " + std::to_string(state.t), DiagnosticsRecord{});
  return next;
}

DiagnosticsRecord diagnostics(const SimState& state, const GalerkinBases& bases) {
  bases.check();
  if (!state.a.allFinite() || !state.b.allFinite()) throw InvalidArgument("diagnostics needs a finite state");
  const Mesh& mesh = *bases.mesh;
  const VectorXd& lam = bases.velocity->values();

  DiagnosticsRecord r;
  r.t = state.t;
  r.u_H = state.a.norm();
  r.grad_u_L2 = std::sqrt(state.a.cwiseProduct(state.a).dot(lam));
  r.Au_H = state.a.cwiseProduct(lam).norm();

  const SpectralField q{bases.charge, state.b};
  const ScalarField grid = from_coeffs(q);
  r.q_L1 = lp_norm(mesh, grid, 1.0);
  r.q_L2 = lp_norm(mesh, grid, 2.0);
  r.q_L4 = lp_norm(mesh, grid, 4.0);
  r.q_Linf = grid.size() ? grid.cwiseAbs().maxCoeff() : 0.0;
  r.q_D05 = dnorm(q, 0.5);
  r.q_D1 = dnorm(q, 1.0);
  r.q_D15 = dnorm(q, 1.5);
  r.q_D2 = dnorm(q, 2.0);
  r.lam_q_L4 = lp_norm(mesh, from_coeffs(apply_fractional(q, 1.0)), 4.0);
  r.u_b_proxy = b_norm_proxy(mesh, bases.velocity->reconstruct(state.a));
  return r;
}

GalerkinBases build_bases(const RunConfig& config) {
  validate(config);
  auto mesh = std::make_shared<const Mesh>(build_mesh(config.mesh));
  EigenOptions options;
  options.seed = config.seed;
  const std::filesystem::path cache = config.cache_dir;

  GalerkinBases bases;
  bases.mesh = mesh;
  bases.velocity = cached_stokes_basis(mesh, config.modes.m_velocity, options, cache);
  if (config.toggles.full_grid_charge) {
    if (mesh->size() > kFullGridLimit)
      throw ConfigError("toggles.full_grid_charge",
                        "supported up to " + std::to_string(kFullGridLimit) + " grid unknowns");
    EigenOptions dense = options;
    dense.method = EigenMethod::dense;
    bases.charge = cached_dirichlet_basis(*mesh, mesh->size(), dense, cache);
  } else {
    bases.charge = cached_dirichlet_basis(*mesh, config.modes.n_charge, options, cache);
  }
  return bases;
}

SimState initial_state(const RunConfig& config, const GalerkinBases& bases) {
  bases.check();
  const Mesh& mesh = *bases.mesh;
  const Eigen::Index m = bases.velocity->size();
  const Eigen::Index n = bases.charge->size();
  SimState s{0.0, VectorXd::Zero(m), VectorXd::Zero(n)};

  const InitialPreset& u0 = config.initial.u0;
  switch (u0.kind) {
    case InitialPreset::Kind::zero:
      break;
    case InitialPreset::Kind::eigen:
      require_mode(u0, m, "initial_data.u0");
      s.a[u0.mode - 1] = 1.0;
      break;
    case InitialPreset::Kind::gaussian_blob:
      s.a = leray_project(*bases.velocity, perp_gradient(mesh, gaussian_blob(mesh, u0)));
      break;
    case InitialPreset::Kind::random:
      s.a = random_coeffs(m, u0.seed, u0.decay_rate);
      break;
  }
  s.a *= config.initial.u0_scale;

  const InitialPreset& q0 = config.initial.q0;
  switch (q0.kind) {
    case InitialPreset::Kind::zero:
      break;
    case InitialPreset::Kind::eigen:
      require_mode(q0, n, "initial_data.q0");
      s.b[q0.mode - 1] = 1.0;
      break;
    case InitialPreset::Kind::gaussian_blob:
      s.b = to_coeffs(bases.charge, gaussian_blob(mesh, q0)).coeffs;
      break;
    case InitialPreset::Kind::random:
      s.b = random_coeffs(n, q0.seed, q0.decay_rate);
      break;
  }
  s.b *= config.initial.q0_scale;
  return s;
}

Trajectory run(const RunConfig& config) { return run(config, build_bases(config)); }

Trajectory run(const RunConfig& config, const GalerkinBases& bases, double blowup_factor) {
  validate(config);
  bases.check();
  const StepParams params = StepParams::from(config.toggles);
  const double dt = config.time.dt;
  const long steps = config.time.steps();

  Trajectory out;
  out.bases = bases;
  SimState state = initial_state(config, bases);

  std::vector<long> snapshot_steps;
  for (double t : config.time.snapshot_times)
    snapshot_steps.push_back(std::clamp(std::lround(t / dt), 0L, steps));
  auto take_snapshots = [&](long k) {
    for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
      if (snapshot_steps[i] != k) continue;
      const double time = state.t;
      out.snapshots.push_back({time, "charge", from_coeffs(SpectralField{bases.charge, state.b})});
      out.snapshots.push_back({time, "vorticity", curl(*bases.mesh, bases.velocity->reconstruct(state.a))});
    }
  };

  const double energy0 = state.a.squaredNorm();
  const double charge0 = state.b.squaredNorm();
  const double threshold = blowup_factor * coefficient_norms(state, bases).composite();
  double int_grad = 0.0, int_work = 0.0, int_q = 0.0;

  auto record = [&]() {
    DiagnosticsRecord r = diagnostics(state, bases);
    r.dissipation_u = int_grad;
    r.dissipation_q = int_q;
    r.force_work = int_work;
    r.energy_residual = state.a.squaredNorm() - energy0 + 2.0 * int_grad - 2.0 * int_work;
    r.charge_residual = state.b.squaredNorm() - charge0 + 2.0 * int_q;
    out.records.push_back(r);
  };

  record();
  take_snapshots(0);
  Rates k1 = nonlinear_rates(state, bases, params);
  for (long k = 1; k <= steps; ++k) {
    SimState next;
    try {
      next = step(state, dt, bases, params, &k1);
    } catch (const BlowupError& e) {
      throw BlowupError(e.what(), out.records.back());
    }
    Rates k1_next = nonlinear_rates(next, bases, params);

    int_grad += 0.5 * dt * (velocity_dissipation_density(state, bases) + velocity_dissipation_density(next, bases));
    int_work += 0.5 * dt * (k1.force.dot(state.a) + k1_next.force.dot(next.a));
    int_q += 0.5 * dt * (charge_dissipation_density(state, bases) + charge_dissipation_density(next, bases));

    // Re-anchor the clock to avoid drift from repeated addition.
    next.t = static_cast<double>(k) * dt;
    state = std::move(next);
    k1 = std::move(k1_next);

    const CoefficientNorms norms = coefficient_norms(state, bases);
    if (norms.largest() > threshold) {
      std::ostringstream msg;
      msg << "blow-up at t = " << state.t << ": tracked norm " << norms.largest() << " exceeds " << blowup_factor
          << " x initial composite bound";
      throw BlowupError(msg.str(), out.records.back());
    }
    if (k % config.time.diag_every == 0 || k == steps) record();
    take_snapshots(k);
  }
  out.final_state = state;
  return out;
}

}  // namespace electroconvect
