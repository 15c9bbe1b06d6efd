#pragma once

#include "electroconvect/config.hpp"
#include "electroconvect/error.hpp"
#include "electroconvect/spectral_ops.hpp"
#include "electroconvect/stokes.hpp"

#include <memory>
#include <string>
#include <vector>

namespace electroconvect {

/// Galerkin state: velocity coefficients a (Stokes basis) and charge
/// coefficients b (Dirichlet basis) at time t.
struct SimState {
  double t = 0.0;
  VelocityCoeffs a;
  Eigen::VectorXd b;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double u_H = 0.0;
  double grad_u_L2 = 0.0;
  double Au_H = 0.0;
  double q_L1 = 0.0;
  double q_L2 = 0.0;
  double q_L4 = 0.0;
  double q_Linf = 0.0;
  double q_D05 = 0.0;
  double q_D1 = 0.0;
  double q_D15 = 0.0;
  double q_D2 = 0.0;
  double lam_q_L4 = 0.0;
  /// ||u||^2 - ||u0||^2 + 2 int ||grad u||^2 - 2 int <F, u>.
  double energy_residual = 0.0;
  /// int_0^t ||grad u||^2 dt.
  double dissipation_u = 0.0;
  /// int_0^t ||Lambda^{1/2} q||^2 dt.
  double dissipation_q = 0.0;

  // Not part of the CSV.
  /// ||q||^2 - ||q0||^2 + 2 int ||Lambda^{1/2} q||^2.
  double charge_residual = 0.0;
  /// int_0^t <F, u> dt.
  double force_work = 0.0;
  double u_b_proxy = 0.0;
};

/// Both bases on one mesh.
struct GalerkinBases {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const StokesBasis> velocity;
  std::shared_ptr<const EigenBasis> charge;

  void check() const;
};

struct StepParams {
  bool coupling_on = true;
  bool transport_on = true;
  bool nonlinear_on = true;
  /// Upper bound on dt ||u||_inf / h.
  double cfl_limit = 0.5;

  static StepParams from(const Toggles& toggles);
};

/// dt violates the CFL guard. suggested_dt() satisfies it with a 20% margin.
class CflError : public Error {
 public:
  CflError(const std::string& message, double suggested_dt) : Error(message), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Non-finite state, or a tracked norm beyond the blow-up threshold.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& message, DiagnosticsRecord last_good)
      : Error(message), last_good_(last_good) {}
  const DiagnosticsRecord& last_good() const { return last_good_; }

 private:
  DiagnosticsRecord last_good_;
};

/// P_m(-q R q).
VelocityCoeffs force_term(const SpectralField& q, const StokesBasis& sbasis);

/// P_n(u . grad q) in skew form, as Dirichlet-basis coefficients.
SpectralField transport_term(const SpectralField& q, const VelocityCoeffs& a, const GalerkinBases& bases);

/// Right-hand side without the diagonal dissipation.
struct Rates {
  VelocityCoeffs da;
  Eigen::VectorXd db;
  /// P_m(-q R q), kept separately for the work ledger.
  VelocityCoeffs force;
  double u_max = 0.0;
};

Rates nonlinear_rates(const SimState& state, const GalerkinBases& bases, const StepParams& params);

/// Integrating-factor midpoint step. `k1` may carry the rates at `state` to
/// avoid recomputing them.
SimState step(const SimState& state, double dt, const GalerkinBases& bases, const StepParams& params,
              const Rates* k1 = nullptr);

DiagnosticsRecord diagnostics(const SimState& state, const GalerkinBases& bases);

/// Field snapshot taken during a run.
struct Snapshot {
  double time = 0.0;
  std::string field_name;
  ScalarField values;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  SimState final_state;
  GalerkinBases bases;
};

/// Builds the mesh and bases of a configuration (through the eigen cache when
/// config.cache_dir is set).
GalerkinBases build_bases(const RunConfig& config);

/// Initial state (P_m u0, P_n q0) of a configuration.
SimState initial_state(const RunConfig& config, const GalerkinBases& bases);

/// Integrates from initial_state to t_end. Diagnostics are recorded at step 0,
/// every diag_every steps, and at the final step. Snapshots ("charge",
/// "vorticity") are taken at the step closest to each requested time.
/// Blow-up triggers when any norm exceeds `blowup_factor` times its initial
/// composite bound.
Trajectory run(const RunConfig& config);
Trajectory run(const RunConfig& config, const GalerkinBases& bases, double blowup_factor = 1e8);

}  // namespace electroconvect
