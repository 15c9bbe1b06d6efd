#pragma once

#include "electroconvect/eigensolver.hpp"
#include "electroconvect/mesh.hpp"
#include "electroconvect/stokes.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace electroconvect {

enum class BasisKind { dirichlet, stokes };

struct CacheKey {
  BasisKind kind;
  MeshParams mesh;
  Eigen::Index m;
};

/// File stem shared by the metadata (.json) and payload (.bin) files.
std::string cache_stem(const CacheKey& key);

/// Writes values then column-major vectors as little-endian float64, plus a
/// JSON metadata file. Overwrites existing entries.
void save_pairs(const std::filesystem::path& dir, const CacheKey& key, const GeneralizedEigenpairs& pairs);

/// Returns nothing when the entry is missing or its metadata does not match
/// `key`; throws Error when the payload is truncated.
std::optional<GeneralizedEigenpairs> load_pairs(const std::filesystem::path& dir, const CacheKey& key);

/// Solve-or-load wrappers; an empty `dir` disables the cache.
std::shared_ptr<const EigenBasis> cached_dirichlet_basis(const Mesh& mesh, Eigen::Index m,
                                                         const EigenOptions& options,
                                                         const std::filesystem::path& dir);
std::shared_ptr<const StokesBasis> cached_stokes_basis(std::shared_ptr<const Mesh> mesh, Eigen::Index m,
                                                       const EigenOptions& options,
                                                       const std::filesystem::path& dir);

}  // namespace electroconvect
