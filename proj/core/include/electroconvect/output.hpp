#pragma once

#include "electroconvect/dynamics.hpp"
#include "electroconvect/mesh.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace electroconvect {

inline constexpr const char* kDiagnosticsHeader =
    "t,u_H,grad_u_L2,Au_H,q_L1,q_L2,q_L4,q_Linf,q_D05,q_D1,q_D15,q_D2,lam_q_L4,energy_residual,dissipation_u,"
    "dissipation_q";

/// printf "%.17g": round-trips every double.
std::string format_double(double v);

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);

/// Throws InvalidArgument on an empty record list and Error on I/O failure.
void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);

/// Reads the CSV columns back; the extra ledger fields stay zero.
std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

/// Sidecar of a snapshot CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes "x,y,value" rows in node order plus the JSON sidecar
/// {time, field_name, mesh_params, code_version}.
void write_snapshot(const ScalarField& field, const Mesh& mesh, const std::filesystem::path& path, double time,
                    const std::string& field_name);

struct SnapshotFile {
  Eigen::VectorXd x, y, value;
  double time = 0.0;
  std::string field_name;
  MeshParams mesh;
  std::string code_version;
};

SnapshotFile read_snapshot(const std::filesystem::path& path);

/// Generic numeric table with a header row, used for sweeps.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

}  // namespace electroconvect
