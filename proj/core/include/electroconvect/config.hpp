#pragma once

#include "electroconvect/error.hpp"
#include "electroconvect/mesh.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace electroconvect {

/// Malformed or invalid run configuration. `path()` names the offending
/// field, e.g. "time.dt" or "mesh.viscosty".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Named initial-data preset:
///   "zero", "eigen:j" (1-based), "gaussian-blob(x0,y0,sigma,amplitude)",
///   "random(seed,decay_rate)".
/// For the velocity, blobs and eigenmodes describe the stream function.
struct InitialPreset {
  enum class Kind { zero, eigen, gaussian_blob, random };
  Kind kind = Kind::zero;
  int mode = 1;
  double x0 = 0.0, y0 = 0.0, sigma = 1.0, amplitude = 1.0;
  std::uint64_t seed = 0;
  double decay_rate = 0.0;

  std::string to_string() const;
};

/// Throws ConfigError (with an empty path) on an unknown or malformed preset.
InitialPreset parse_preset(std::string_view text);

struct ModesConfig {
  int m_velocity = 16;
  int n_charge = 16;
};

struct TimeConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int diag_every = 10;
  std::vector<double> snapshot_times;

  /// Number of steps, t_end / dt rounded to the nearest integer.
  long steps() const;
};

struct InitialData {
  InitialPreset u0;
  InitialPreset q0;
  double u0_scale = 1.0;
  double q0_scale = 1.0;
};

struct Toggles {
  /// Charge forcing -q R q in the momentum equation.
  bool coupling_on = true;
  /// Advection of the charge by the flow.
  bool transport_on = true;
  /// Velocity self-advection P_m B(u, u).
  bool nonlinear_on = true;
  /// Charge evolved on every grid degree of freedom instead of n modes.
  bool full_grid_charge = false;
};

struct OutputConfig {
  std::string directory = "out";
  /// Subset of {"csv", "snapshots"}.
  std::vector<std::string> formats = {"csv", "snapshots"};

  bool wants(std::string_view format) const;
};

struct RunConfig {
  MeshParams mesh{MeshKind::rectangle, 32, 32, 1.0, 1.0};
  ModesConfig modes;
  TimeConfig time;
  InitialData initial;
  Toggles toggles;
  OutputConfig output;
  /// Seed of the eigensolver start vectors.
  std::uint64_t seed = 0;
  /// Eigenpair cache directory; empty disables caching.
  std::string cache_dir;
};

/// Command-line mesh shorthand: "square" (64x64 unit square), "square:N",
/// "rectangle:nx,ny,lx,ly" or "annulus:nr,ntheta,r_inner,r_outer".
MeshParams parse_mesh_spec(std::string_view spec);

/// Parses a JSON run configuration. Unknown keys are rejected; missing keys
/// take the defaults above.
RunConfig parse_config(std::string_view json_text);

/// Echo of every effective value as pretty-printed JSON; parse_config of the
/// result reproduces the configuration.
std::string config_to_json(const RunConfig& config);

/// Checks the cross-field invariants (positive counts, dt consistent with t_end).
void validate(const RunConfig& config);

}  // namespace electroconvect
