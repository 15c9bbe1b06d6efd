#include "electroconvect/eigen_cache.hpp"

#include "electroconvect/error.hpp"
#include "electroconvect/version.hpp"

#include "json_support.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace electroconvect {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string kind_name(BasisKind kind) { return kind == BasisKind::dirichlet ? "dirichlet" : "stokes"; }

std::uint64_t to_le(double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return bits;
}

double from_le(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

void write_doubles(std::ofstream& out, const double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    const std::uint64_t bits = to_le(data[i]);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

void read_doubles(std::ifstream& in, double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    data[i] = from_le(bits);
  }
}

json key_json(const CacheKey& key) {
  return {{"kind", kind_name(key.kind)}, {"mesh", detail::mesh_params_json(key.mesh)}, {"m", key.m}};
}

}  // namespace

std::string cache_stem(const CacheKey& key) {
  std::ostringstream s;
  s.precision(17);
  s << kind_name(key.kind) << '_' << to_string(key.mesh.kind) << '_' << key.mesh.n1 << 'x' << key.mesh.n2 << '_'
    << key.mesh.a << '_' << key.mesh.b << "_m" << key.m;
  return s.str();
}

void save_pairs(const fs::path& dir, const CacheKey& key, const GeneralizedEigenpairs& pairs) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create cache directory " + dir.string() + ": " + ec.message());

  const fs::path stem = dir / cache_stem(key);
  json meta = key_json(key);
  meta["rows"] = pairs.vectors.rows();
  meta["cols"] = pairs.vectors.cols();
  meta["layout"] = "values then column-major vectors, float64 little-endian";
  meta["code_version"] = kCodeVersion;

  std::ofstream bin(fs::path(stem).concat(".bin"), std::ios::binary | std::ios::trunc);
  if (!bin) throw Error("cannot write " + stem.string() + ".bin");
  write_doubles(bin, pairs.values.data(), pairs.values.size());
  write_doubles(bin, pairs.vectors.data(), pairs.vectors.size());
  if (!bin) throw Error("write failed for " + stem.string() + ".bin");
  bin.close();

  // Metadata last, so a present .json implies a complete payload.
  std::ofstream js(fs::path(stem).concat(".json"), std::ios::trunc);
  if (!js) throw Error("cannot write " + stem.string() + ".json");
  js << meta.dump(2) << '\n';
}

std::optional<GeneralizedEigenpairs> load_pairs(const fs::path& dir, const CacheKey& key) {
  const fs::path stem = dir / cache_stem(key);
  std::ifstream js(fs::path(stem).concat(".json"));
  if (!js) return std::nullopt;
  json meta;
  try {
    meta = json::parse(js);
  } catch (const json::exception&) {
    return std::nullopt;
  }
  const json expected = key_json(key);
  for (const auto& item : expected.items())
    if (!meta.contains(item.key()) || meta.at(item.key()) != item.value()) return std::nullopt;

  const auto rows = meta.value("rows", Eigen::Index{0});
  const auto cols = meta.value("cols", Eigen::Index{0});
  if (cols != key.m || rows <= 0) return std::nullopt;

  std::ifstream bin(fs::path(stem).concat(".bin"), std::ios::binary);
  if (!bin) throw Error("cache payload missing for " + stem.string());
  GeneralizedEigenpairs pairs{Eigen::VectorXd(cols), Eigen::MatrixXd(rows, cols)};
  read_doubles(bin, pairs.values.data(), cols);
  read_doubles(bin, pairs.vectors.data(), rows * cols);
  if (!bin) throw Error("cache payload truncated: " + stem.string() + ".bin");
  return pairs;
}

std::shared_ptr<const EigenBasis> cached_dirichlet_basis(const Mesh& mesh, Eigen::Index m,
                                                         const EigenOptions& options, const fs::path& dir) {
  const CacheKey key{BasisKind::dirichlet, mesh.params(), m};
  std::optional<GeneralizedEigenpairs> pairs;
  if (!dir.empty()) pairs = load_pairs(dir, key);
  if (!pairs || pairs->vectors.rows() != mesh.size()) {
    const EigenBasis fresh = dirichlet_basis(mesh, m, options);
    pairs = GeneralizedEigenpairs{fresh.values(), fresh.vectors()};
    if (!dir.empty()) save_pairs(dir, key, *pairs);
  }
  return std::make_shared<const EigenBasis>(std::move(pairs->values), std::move(pairs->vectors), mesh.weights());
}

std::shared_ptr<const StokesBasis> cached_stokes_basis(std::shared_ptr<const Mesh> mesh, Eigen::Index m,
                                                       const EigenOptions& options, const fs::path& dir) {
  if (!mesh) throw InvalidArgument("cached_stokes_basis: null mesh");
  const CacheKey key{BasisKind::stokes, mesh->params(), m};
  if (!dir.empty()) {
    if (auto pairs = load_pairs(dir, key); pairs && pairs->vectors.rows() == mesh->size())
      return std::make_shared<const StokesBasis>(std::move(mesh), std::move(pairs->values), std::move(pairs->vectors));
  }
  auto basis = std::make_shared<const StokesBasis>(stokes_basis(mesh, m, options));
  if (!dir.empty()) save_pairs(dir, key, GeneralizedEigenpairs{basis->values(), basis->stream()});
  return basis;
}

}  // namespace electroconvect
