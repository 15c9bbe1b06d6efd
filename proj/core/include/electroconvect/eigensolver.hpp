#pragma once

#include "electroconvect/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>

namespace electroconvect {

enum class EigenMethod {
  /// Dense below `dense_threshold` unknowns, block Lanczos above.
  automatic,
  dense,
  lanczos,
};

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  Eigen::Index dense_threshold = 1500;
  /// Block width of the Lanczos iteration. Must exceed the largest eigenvalue
  /// multiplicity among the requested pairs.
  int block_size = 4;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Relative residual ||K x - lambda M x|| / ||K x|| required for convergence.
  double tolerance = 1e-10;
  /// Krylov dimension budget; 0 picks min(n, 4m + 160).
  Eigen::Index max_subspace = 0;
};

/// Lowest eigenpairs of the pencil K x = lambda M x, K symmetric positive
/// definite, M symmetric positive semidefinite. Vectors are M-orthonormal.
struct GeneralizedEigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Computes the m smallest eigenvalues in nondecreasing order. Vectors inside
/// a cluster of numerically equal eigenvalues are re-orthonormalized in a fixed
/// order, and each vector is signed so that its largest-magnitude entry is
/// positive. Throws ConvergenceError when the Lanczos budget runs out.
GeneralizedEigenpairs lowest_generalized_eigenpairs(const Eigen::SparseMatrix<double>& stiffness,
                                                    const Eigen::SparseMatrix<double>& mass, Eigen::Index m,
                                                    const EigenOptions& options = {});

/// L^2-orthonormal Dirichlet eigenpairs (mu_j, phi_j) of the discrete -Laplacian,
/// orthonormal in the weighted inner product.
class EigenBasis {
 public:
  EigenBasis(Eigen::VectorXd values, Eigen::MatrixXd vectors, Eigen::VectorXd weights);

  Eigen::Index size() const { return values_.size(); }
  Eigen::Index dimension() const { return weights_.size(); }
  const Eigen::VectorXd& values() const { return values_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double value(Eigen::Index j) const { return values_[j]; }
  auto vector(Eigen::Index j) const { return vectors_.col(j); }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd weights_;
};

EigenBasis lowest_eigenpairs(const SparseSymmetricOperator& op, const Eigen::VectorXd& weights, Eigen::Index m,
                             const EigenOptions& options = {});

/// Convenience: assemble the Laplacian of `mesh` and solve for m pairs.
EigenBasis dirichlet_basis(const Mesh& mesh, Eigen::Index m, const EigenOptions& options = {});

}  // namespace electroconvect
