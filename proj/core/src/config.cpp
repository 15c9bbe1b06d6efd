#include "electroconvect/config.hpp"

#include "json_support.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace electroconvect {

namespace {

using json = nlohmann::json;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& node, const std::string& path, std::initializer_list<const char*> known) {
  for (const auto& item : node.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; });
    if (!ok) throw ConfigError(join(path, item.key()), "unknown key '" + item.key() + "'");
  }
}

double read_number(const json& node, const std::string& key, const std::string& path, double fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

long read_integer(const json& node, const std::string& key, const std::string& path, long fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<long>();
}

bool read_bool(const json& node, const std::string& key, const std::string& path, bool fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string read_string(const json& node, const std::string& key, const std::string& path, std::string fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

int positive_int(long value, const std::string& path) {
  if (value <= 0 || value > 1'000'000) throw ConfigError(path, "must be a positive integer");
  return static_cast<int>(value);
}

double positive(double value, const std::string& path) {
  if (!(value > 0.0)) throw ConfigError(path, "must be positive");
  return value;
}

std::vector<double> split_numbers(std::string_view body, std::size_t expected, const std::string& name) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(body)};
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("", "empty argument in " + name);
    const std::string trimmed = item.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(trimmed.c_str(), &end);
    if (end != trimmed.c_str() + trimmed.size() || !std::isfinite(v))
      throw ConfigError("", "bad number '" + trimmed + "' in " + name);
    out.push_back(v);
  }
  if (out.size() != expected)
    throw ConfigError("", name + " takes " + std::to_string(expected) + " arguments");
  return out;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

MeshParams parse_mesh(const json& node, const std::string& path) {
  require_object(node, path);
  const std::string kind = read_string(node, "kind", path, "rectangle");
  MeshParams p;
  if (kind == "rectangle" || kind == "square") {
    reject_unknown(node, path, {"kind", "nx", "ny", "lx", "ly"});
    p.kind = MeshKind::rectangle;
    p.n1 = positive_int(read_integer(node, "nx", path, 32), join(path, "nx"));
    p.n2 = positive_int(read_integer(node, "ny", path, p.n1), join(path, "ny"));
    p.a = positive(read_number(node, "lx", path, 1.0), join(path, "lx"));
    p.b = positive(read_number(node, "ly", path, p.a), join(path, "ly"));
  } else if (kind == "annulus") {
    reject_unknown(node, path, {"kind", "nr", "ntheta", "r_inner", "r_outer"});
    p.kind = MeshKind::annulus;
    p.n1 = positive_int(read_integer(node, "nr", path, 32), join(path, "nr"));
    p.n2 = positive_int(read_integer(node, "ntheta", path, 64), join(path, "ntheta"));
    p.a = positive(read_number(node, "r_inner", path, 1.0), join(path, "r_inner"));
    p.b = read_number(node, "r_outer", path, 2.0);
    if (!(p.b > p.a)) throw ConfigError(join(path, "r_outer"), "must exceed r_inner");
    if (p.n2 < 8) throw ConfigError(join(path, "ntheta"), "must be at least 8");
  } else {
    throw ConfigError(join(path, "kind"), "unknown mesh kind '" + kind + "'");
  }
  if (p.n1 < 3 || (p.kind == MeshKind::rectangle && p.n2 < 3))
    throw ConfigError(path, "at least 3 cells per direction are required");
  return p;
}

InitialPreset read_preset(const json& node, const std::string& key, const std::string& path) {
  if (!node.contains(key)) return {};
  const json& v = node.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a preset string");
  try {
    return parse_preset(v.get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(join(path, key), e.what());
  }
}

}  // namespace

InitialPreset parse_preset(std::string_view text) {
  const std::string s(text);
  InitialPreset p;
  if (s.empty()) throw ConfigError("", "empty preset");
  if (s == "zero") return p;
  if (s.rfind("eigen:", 0) == 0) {
    const std::string digits = s.substr(6);
    int mode = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), mode);
    if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size() || mode < 1)
      throw ConfigError("", "eigen:j needs a mode index j >= 1, got '" + s + "'");
    p.kind = InitialPreset::Kind::eigen;
    p.mode = mode;
    return p;
  }
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw ConfigError("", "unknown preset '" + s + "'");
  const std::string name = s.substr(0, open);
  const std::string_view body = std::string_view(s).substr(open + 1, s.size() - open - 2);
  if (name == "gaussian-blob") {
    const auto v = split_numbers(body, 4, name);
    p.kind = InitialPreset::Kind::gaussian_blob;
    p.x0 = v[0];
    p.y0 = v[1];
    p.sigma = v[2];
    p.amplitude = v[3];
    if (!(p.sigma > 0.0)) throw ConfigError("", "gaussian-blob sigma must be positive");
    return p;
  }
  if (name == "random") {
    const auto v = split_numbers(body, 2, name);
    if (v[0] < 0.0 || v[0] != std::floor(v[0]) || v[0] > 9.0e15)
      throw ConfigError("", "random seed must be a non-negative integer");
    if (v[1] < 0.0) throw ConfigError("", "random decay_rate must be non-negative");
    p.kind = InitialPreset::Kind::random;
    p.seed = static_cast<std::uint64_t>(v[0]);
    p.decay_rate = v[1];
    return p;
  }
  throw ConfigError("", "unknown preset '" + s + "'");
}

std::string InitialPreset::to_string() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::eigen:
      return "eigen:" + std::to_string(mode);
    case Kind::gaussian_blob:
      return "gaussian-blob(" + format_number(x0) + "," + format_number(y0) + "," + format_number(sigma) + "," +
             format_number(amplitude) + ")";
    case Kind::random:
      return "random(" + std::to_string(seed) + "," + format_number(decay_rate) + ")";
  }
  return "zero";
}

MeshParams parse_mesh_spec(std::string_view spec) {
  const std::string s(spec);
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto count = [&](double v) {
    if (v != std::floor(v) || v < 3 || v > 100000) throw ConfigError("mesh", "bad grid count in '" + s + "'");
    return static_cast<int>(v);
  };
  MeshParams p;
  if (kind == "square") {
    const int n = args.empty() ? 64 : count(split_numbers(args, 1, kind)[0]);
    p = {MeshKind::rectangle, n, n, 1.0, 1.0};
  } else if (kind == "rectangle") {
    const auto v = split_numbers(args, 4, kind);
    p = {MeshKind::rectangle, count(v[0]), count(v[1]), v[2], v[3]};
    if (!(p.a > 0.0 && p.b > 0.0)) throw ConfigError("mesh", "rectangle sides must be positive");
  } else if (kind == "annulus") {
    const auto v = split_numbers(args, 4, kind);
    p = {MeshKind::annulus, count(v[0]), count(v[1]), v[2], v[3]};
    if (!(p.a > 0.0 && p.b > p.a)) throw ConfigError("mesh", "annulus needs 0 < r_inner < r_outer");
    if (p.n2 < 8) throw ConfigError("mesh", "annulus needs ntheta >= 8");
  } else {
    throw ConfigError("mesh", "unknown mesh '" + s + "'");
  }
  return p;
}

long TimeConfig::steps() const { return std::lround(t_end / dt); }

bool OutputConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void validate(const RunConfig& c) {
  if (c.modes.m_velocity < 1) throw ConfigError("modes.m_velocity", "must be positive");
  if (c.modes.n_charge < 1) throw ConfigError("modes.n_charge", "must be positive");
  if (!(c.time.dt > 0.0) || !std::isfinite(c.time.dt)) throw ConfigError("time.dt", "must be positive");
  if (!(c.time.t_end > 0.0) || !std::isfinite(c.time.t_end)) throw ConfigError("time.t_end", "must be positive");
  const double ratio = c.time.t_end / c.time.dt;
  if (ratio < 0.5 || std::abs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio))
    throw ConfigError("time.dt", "t_end must be an integer multiple of dt");
  if (c.time.diag_every < 1) throw ConfigError("time.diag_every", "must be positive");
  for (std::size_t i = 0; i < c.time.snapshot_times.size(); ++i) {
    const double t = c.time.snapshot_times[i];
    if (!(t >= 0.0) || t > c.time.t_end * (1.0 + 1e-12))
      throw ConfigError("time.snapshot_times[" + std::to_string(i) + "]", "must lie in [0, t_end]");
  }
  if (!(c.initial.u0_scale >= 0.0)) throw ConfigError("initial_data.u0_scale", "must be non-negative");
  if (!(c.initial.q0_scale >= 0.0)) throw ConfigError("initial_data.q0_scale", "must be non-negative");
  const long nodes = c.mesh.kind == MeshKind::rectangle ? long(c.mesh.n1 - 1) * (c.mesh.n2 - 1)
                                                        : long(c.mesh.n1 - 1) * c.mesh.n2;
  if (4L * c.modes.m_velocity > nodes)
    throw ConfigError("modes.m_velocity", "exceeds a quarter of the " + std::to_string(nodes) + " grid unknowns");
  if (c.modes.n_charge > nodes)
    throw ConfigError("modes.n_charge", "exceeds the " + std::to_string(nodes) + " grid unknowns");
  for (std::size_t i = 0; i < c.output.formats.size(); ++i) {
    const auto& f = c.output.formats[i];
    if (f != "csv" && f != "snapshots")
      throw ConfigError("output.formats[" + std::to_string(i) + "]", "unknown format '" + f + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  require_object(root, "<root>");
  reject_unknown(root, "", {"mesh", "modes", "time", "initial_data", "toggles", "output", "seed", "cache_dir"});

  RunConfig c;
  if (root.contains("mesh")) c.mesh = parse_mesh(root.at("mesh"), "mesh");

  if (root.contains("modes")) {
    const json& n = root.at("modes");
    require_object(n, "modes");
    reject_unknown(n, "modes", {"m_velocity", "n_charge"});
    c.modes.m_velocity = positive_int(read_integer(n, "m_velocity", "modes", c.modes.m_velocity), "modes.m_velocity");
    c.modes.n_charge = positive_int(read_integer(n, "n_charge", "modes", c.modes.n_charge), "modes.n_charge");
  }

  if (root.contains("time")) {
    const json& n = root.at("time");
    require_object(n, "time");
    reject_unknown(n, "time", {"dt", "t_end", "diag_every", "snapshot_times"});
    c.time.dt = positive(read_number(n, "dt", "time", c.time.dt), "time.dt");
    c.time.t_end = positive(read_number(n, "t_end", "time", c.time.t_end), "time.t_end");
    c.time.diag_every = positive_int(read_integer(n, "diag_every", "time", c.time.diag_every), "time.diag_every");
    if (n.contains("snapshot_times")) {
      const json& list = n.at("snapshot_times");
      if (!list.is_array()) throw ConfigError("time.snapshot_times", "expected an array of numbers");
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_number()) throw ConfigError("time.snapshot_times[" + std::to_string(i) + "]", "expected a number");
        c.time.snapshot_times.push_back(list[i].get<double>());
      }
    }
  }

  if (root.contains("initial_data")) {
    const json& n = root.at("initial_data");
    require_object(n, "initial_data");
    reject_unknown(n, "initial_data", {"u0", "q0", "u0_scale", "q0_scale"});
    c.initial.u0 = read_preset(n, "u0", "initial_data");
    c.initial.q0 = read_preset(n, "q0", "initial_data");
    c.initial.u0_scale = read_number(n, "u0_scale", "initial_data", 1.0);
    c.initial.q0_scale = read_number(n, "q0_scale", "initial_data", 1.0);
  }

  if (root.contains("toggles")) {
    const json& n = root.at("toggles");
    require_object(n, "toggles");
    reject_unknown(n, "toggles", {"coupling_on", "transport_on", "nonlinear_on", "full_grid_charge"});
    c.toggles.coupling_on = read_bool(n, "coupling_on", "toggles", c.toggles.coupling_on);
    c.toggles.transport_on = read_bool(n, "transport_on", "toggles", c.toggles.transport_on);
    c.toggles.nonlinear_on = read_bool(n, "nonlinear_on", "toggles", c.toggles.nonlinear_on);
    c.toggles.full_grid_charge = read_bool(n, "full_grid_charge", "toggles", c.toggles.full_grid_charge);
  }

  if (root.contains("output")) {
    const json& n = root.at("output");
    require_object(n, "output");
    reject_unknown(n, "output", {"directory", "formats"});
    c.output.directory = read_string(n, "directory", "output", c.output.directory);
    if (n.contains("formats")) {
      const json& list = n.at("formats");
      if (!list.is_array()) throw ConfigError("output.formats", "expected an array of strings");
      c.output.formats.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_string()) throw ConfigError("output.formats[" + std::to_string(i) + "]", "expected a string");
        c.output.formats.push_back(list[i].get<std::string>());
      }
    }
  }

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  c.cache_dir = read_string(root, "cache_dir", "", c.cache_dir);

  validate(c);
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["mesh"] = detail::mesh_params_json(c.mesh);
  root["modes"] = {{"m_velocity", c.modes.m_velocity}, {"n_charge", c.modes.n_charge}};
  root["time"] = {{"dt", c.time.dt},
                  {"t_end", c.time.t_end},
                  {"diag_every", c.time.diag_every},
                  {"snapshot_times", c.time.snapshot_times}};
  root["initial_data"] = {{"u0", c.initial.u0.to_string()},
                          {"q0", c.initial.q0.to_string()},
                          {"u0_scale", c.initial.u0_scale},
                          {"q0_scale", c.initial.q0_scale}};
  root["toggles"] = {{"coupling_on", c.toggles.coupling_on},
                     {"transport_on", c.toggles.transport_on},
                     {"nonlinear_on", c.toggles.nonlinear_on},
                     {"full_grid_charge", c.toggles.full_grid_charge}};
  root["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  root["seed"] = c.seed;
  root["cache_dir"] = c.cache_dir;
  return root.dump(2);
}

}  // namespace electroconvect
