#include "electroconvect/output.hpp"

#include "electroconvect/error.hpp"
#include "electroconvect/version.hpp"

#include "json_support.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace electroconvect {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr std::array<double DiagnosticsRecord::*, 16> kColumns = {
    &DiagnosticsRecord::t,        &DiagnosticsRecord::u_H,       &DiagnosticsRecord::grad_u_L2,
    &DiagnosticsRecord::Au_H,     &DiagnosticsRecord::q_L1,      &DiagnosticsRecord::q_L2,
    &DiagnosticsRecord::q_L4,     &DiagnosticsRecord::q_Linf,    &DiagnosticsRecord::q_D05,
    &DiagnosticsRecord::q_D1,     &DiagnosticsRecord::q_D15,     &DiagnosticsRecord::q_D2,
    &DiagnosticsRecord::lam_q_L4, &DiagnosticsRecord::energy_residual, &DiagnosticsRecord::dissipation_u,
    &DiagnosticsRecord::dissipation_q};

void ensure_parent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, const fs::path& path) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw Error("non-numeric cell '" + cell + "' in " + path.string());
    values.push_back(v);
  }
  if (values.size() != expected) throw Error("wrong column count in " + path.string());
  return values;
}

MeshParams mesh_params_from_json(const json& j) {
  MeshParams p;
  if (j.at("kind") == "rectangle") {
    p = {MeshKind::rectangle, j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("lx").get<double>(),
         j.at("ly").get<double>()};
  } else {
    p = {MeshKind::annulus, j.at("nr").get<int>(), j.at("ntheta").get<int>(), j.at("r_inner").get<double>(),
         j.at("r_outer").get<double>()};
  }
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string text = kDiagnosticsHeader;
  text += '\n';
  for (const auto& r : records) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (c) text += ',';
      text += format_double(r.*kColumns[c]);
    }
    text += '\n';
  }
  return text;
}

void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const fs::path& path) {
  if (records.empty()) throw InvalidArgument("write_diagnostics: no records");
  write_text(path, diagnostics_csv(records));
}

std::vector<DiagnosticsRecord> read_diagnostics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) throw Error("unexpected header in " + path.string());
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto values = parse_row(line, kColumns.size(), path);
    DiagnosticsRecord r;
    for (std::size_t c = 0; c < kColumns.size(); ++c) r.*kColumns[c] = values[c];
    out.push_back(r);
  }
  return out;
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  return p.replace_extension(".json");
}

void write_snapshot(const ScalarField& field, const Mesh& mesh, const fs::path& path, double time,
                    const std::string& field_name) {
  if (field.size() != mesh.size()) throw MismatchError("snapshot field does not match the mesh");
  std::string text = "x,y,value\n";
  text.reserve(static_cast<std::size_t>(mesh.size()) * 72);
  for (Eigen::Index k = 0; k < mesh.size(); ++k) {
    text += format_double(mesh.x()[k]);
    text += ',';
    text += format_double(mesh.y()[k]);
    text += ',';
    text += format_double(field[k]);
    text += '\n';
  }
  write_text(path, text);

  const json meta = {{"time", time},
                     {"field_name", field_name},
                     {"mesh_params", detail::mesh_params_json(mesh.params())},
                     {"code_version", kCodeVersion}};
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

SnapshotFile read_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value") throw Error("unexpected header in " + path.string());
  std::vector<double> x, y, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = parse_row(line, 3, path);
    x.push_back(row[0]);
    y.push_back(row[1]);
    v.push_back(row[2]);
  }
  SnapshotFile out;
  const auto n = static_cast<Eigen::Index>(v.size());
  out.x = Eigen::Map<Eigen::VectorXd>(x.data(), n);
  out.y = Eigen::Map<Eigen::VectorXd>(y.data(), n);
  out.value = Eigen::Map<Eigen::VectorXd>(v.data(), n);

  std::ifstream side(sidecar_path(path));
  if (!side) throw Error("missing sidecar for " + path.string());
  try {
    const json meta = json::parse(side);
    out.time = meta.at("time").get<double>();
    out.field_name = meta.at("field_name").get<std::string>();
    out.mesh = mesh_params_from_json(meta.at("mesh_params"));
    out.code_version = meta.at("code_version").get<std::string>();
  } catch (const json::exception& e) {
    throw Error("malformed sidecar for " + path.string() + ": " + e.what());
  }
  return out;
}

void write_table(const fs::path& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t c = 0; c < columns.size(); ++c) text += (c ? "," : "") + columns[c];
  text += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw InvalidArgument("write_table: row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) text += ',';
      text += format_double(row[c]);
    }
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace electroconvect
