#include "electroconvect/eigensolver.hpp"

#include "electroconvect/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace electroconvect {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Relative eigenvalue gap below which two pairs are treated as one cluster.
constexpr double kClusterGap = 1e-9;
constexpr double kBackwardFloor = 100.0 * std::numeric_limits<double>::epsilon();

double inf_norm(const SpMat& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (Index c = 0; c < a.outerSize(); ++c)
    for (SpMat::InnerIterator it(a, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

void normalize_and_sign(GeneralizedEigenpairs& pairs, const SpMat& mass) {
  MatrixXd& x = pairs.vectors;
  const Index m = pairs.values.size();

  Index start = 0;
  while (start < m) {
    Index end = start + 1;
    while (end < m && pairs.values[end] - pairs.values[end - 1] <= kClusterGap * std::abs(pairs.values[end - 1]))
      ++end;
    // Modified Gram-Schmidt in the M inner product, in index order.
    for (Index j = start; j < end; ++j) {
      for (int pass = 0; pass < 2; ++pass) {
        const VectorXd mx = mass * x.col(j);
        for (Index i = start; i < j; ++i) x.col(j) -= x.col(i).dot(mx) * x.col(i);
      }
      const double norm = std::sqrt(x.col(j).dot(mass * x.col(j)));
      x.col(j) /= norm;
    }
    start = end;
  }

  for (Index j = 0; j < m; ++j) {
    Index at = 0;
    x.col(j).cwiseAbs().maxCoeff(&at);
    if (x(at, j) < 0.0) x.col(j) = -x.col(j);
  }
}

GeneralizedEigenpairs dense_pairs(const SpMat& stiffness, const SpMat& mass, Index m) {
  const MatrixXd k = MatrixXd(stiffness);
  const MatrixXd mm = MatrixXd(mass);
  // M x = nu K x with K positive definite; the largest nu give the smallest lambda.
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> solver(mm, k, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed");

  const Index n = k.rows();
  GeneralizedEigenpairs out{VectorXd(m), MatrixXd(n, m)};
  for (Index j = 0; j < m; ++j) {
    const Index src = n - 1 - j;
    const double nu = solver.eigenvalues()[src];
    if (!(nu > 0.0)) throw ConvergenceError("pencil has fewer finite eigenvalues than requested");
    out.values[j] = 1.0 / nu;
    out.vectors.col(j) = solver.eigenvectors().col(src);
  }
  return out;
}

class BlockLanczos {
 public:
  BlockLanczos(const SpMat& stiffness, const SpMat& mass, Index m, const EigenOptions& options)
      : k_(stiffness), m_(mass), wanted_(m), options_(options), rng_(options.seed) {
    n_ = k_.rows();
    block_ = std::max(1, options.block_size);
    budget_ = options.max_subspace > 0 ? options.max_subspace : 4 * m + 160;
    budget_ = std::min(budget_, n_);
    k_norm_ = inf_norm(k_);
    m_norm_ = inf_norm(m_);
    factor_.compute(k_);
    if (factor_.info() != Eigen::Success) throw ConvergenceError("stiffness factorization failed");
    q_.resize(n_, budget_);
    kq_.resize(n_, budget_);
  }

  GeneralizedEigenpairs solve() {
    MatrixXd block = random_block(std::min<Index>(block_, budget_));
    Index next_check = std::min<Index>(budget_, wanted_ + block_);

    while (true) {
      for (Index c = 0; c < block.cols() && cols_ < budget_; ++c) append(block.col(c));

      if (cols_ >= next_check || cols_ >= budget_) {
        GeneralizedEigenpairs result;
        if (ritz(result) || cols_ >= n_) return result;
        if (cols_ >= budget_)
          throw ConvergenceError("Lanczos did not converge " + std::to_string(wanted_) +
                                 " eigenpairs within a subspace of dimension " + std::to_string(budget_));
        next_check = std::min(budget_, cols_ + std::max<Index>(block_, cols_ / 8));
      }

      // Next block: shift-invert operator K^{-1} M applied to the newest vectors.
      const Index width = std::min<Index>(block_, cols_);
      const MatrixXd rhs = m_ * q_.middleCols(cols_ - width, width);
      block = factor_.solve(rhs);
    }
  }

 private:
  MatrixXd random_block(Index cols) {
    std::normal_distribution<double> normal;
    MatrixXd b(n_, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < n_; ++i) b(i, j) = normal(rng_);
    return b;
  }

  // Orthogonalizes v against the basis in the K inner product and appends it.
  void append(VectorXd v) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = std::sqrt(std::max(0.0, v.dot(k_ * v)));
      for (int pass = 0; pass < 2 && cols_ > 0; ++pass) {
        const VectorXd coeffs = kq_.leftCols(cols_).transpose() * v;
        v.noalias() -= q_.leftCols(cols_) * coeffs;
      }
      const VectorXd kv = k_ * v;
      const double after = std::sqrt(std::max(0.0, v.dot(kv)));
      if (after > 1e-10 * before && after > 0.0) {
        q_.col(cols_) = v / after;
        kq_.col(cols_) = kv / after;
        ++cols_;
        return;
      }
      // The Krylov space became invariant; continue from a fresh direction.
      v = random_block(1).col(0);
    }
    throw ConvergenceError("Lanczos could not extend the Krylov basis");
  }

  bool ritz(GeneralizedEigenpairs& result) {
    const Index k = cols_;
    const MatrixXd mq = m_ * q_.leftCols(k);
    MatrixXd t = q_.leftCols(k).transpose() * mq;
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> small(t);
    if (small.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz eigensolver failed");

    const Index m = std::min(wanted_, k);
    MatrixXd y(k, m);
    VectorXd nu(m);
    for (Index j = 0; j < m; ++j) {
      nu[j] = small.eigenvalues()[k - 1 - j];
      y.col(j) = small.eigenvectors().col(k - 1 - j);
    }
    if (m < wanted_) return false;

    const MatrixXd kx = kq_.leftCols(k) * y;
    const MatrixXd mx = mq * y;
    MatrixXd x = q_.leftCols(k) * y;
    bool converged = true;
    for (Index j = 0; j < m && converged; ++j) {
      if (!(nu[j] > 0.0)) {
        converged = false;
        break;
      }
      const double r = (mx.col(j) - nu[j] * kx.col(j)).norm();
      const double relative = r / (nu[j] * kx.col(j).norm());
      // Backward error; accepts pairs whose residual sits at the rounding floor
      // of a badly scaled pencil (the clamped biharmonic on fine grids).
      const double backward = r / ((nu[j] * k_norm_ + m_norm_) * x.col(j).norm());
      converged = relative <= options_.tolerance || backward <= kBackwardFloor;
    }
    if (!converged && cols_ < n_) return false;
    if (!converged) throw ConvergenceError("pencil has fewer finite eigenvalues than requested");

    result.values = nu.cwiseInverse();
    result.vectors = std::move(x);
    return true;
  }

  const SpMat& k_;
  const SpMat& m_;
  Index wanted_;
  EigenOptions options_;
  std::mt19937_64 rng_;
  Index n_ = 0;
  Index block_ = 1;
  Index budget_ = 0;
  Index cols_ = 0;
  double k_norm_ = 0.0;
  double m_norm_ = 0.0;
  Eigen::SimplicialLDLT<SpMat> factor_;
  MatrixXd q_, kq_;
};

}  // namespace

GeneralizedEigenpairs lowest_generalized_eigenpairs(const SpMat& stiffness, const SpMat& mass, Index m,
                                                    const EigenOptions& options) {
  const Index n = stiffness.rows();
  if (stiffness.cols() != n || mass.rows() != n || mass.cols() != n)
    throw MismatchError("stiffness and mass matrices must be square and equally sized");
  if (m < 1 || m > n)
    throw InvalidArgument("requested " + std::to_string(m) + " eigenpairs of a problem of dimension " +
                          std::to_string(n));

  bool dense = options.method == EigenMethod::dense;
  if (options.method == EigenMethod::automatic) dense = n <= options.dense_threshold;

  GeneralizedEigenpairs pairs = dense ? dense_pairs(stiffness, mass, m) : BlockLanczos(stiffness, mass, m, options).solve();

  // Ascending order (Ritz values already are, but keep the contract explicit).
  std::vector<Index> order(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return pairs.values[a] < pairs.values[b]; });
  GeneralizedEigenpairs sorted{VectorXd(m), MatrixXd(n, m)};
  for (Index j = 0; j < m; ++j) {
    sorted.values[j] = pairs.values[order[static_cast<std::size_t>(j)]];
    sorted.vectors.col(j) = pairs.vectors.col(order[static_cast<std::size_t>(j)]);
  }
  normalize_and_sign(sorted, mass);
  return sorted;
}

EigenBasis::EigenBasis(VectorXd values, MatrixXd vectors, VectorXd weights)
    : values_(std::move(values)), vectors_(std::move(vectors)), weights_(std::move(weights)) {
  if (vectors_.cols() != values_.size() || vectors_.rows() != weights_.size())
    throw MismatchError("eigenbasis dimensions are inconsistent");
}

EigenBasis lowest_eigenpairs(const SparseSymmetricOperator& op, const VectorXd& weights, Index m,
                             const EigenOptions& options) {
  if (weights.size() != op.dimension()) throw MismatchError("weights do not match operator dimension");
  SpMat mass(weights.size(), weights.size());
  mass.reserve(Eigen::VectorXi::Constant(weights.size(), 1));
  for (Index i = 0; i < weights.size(); ++i) mass.insert(i, i) = weights[i];
  mass.makeCompressed();
  auto pairs = lowest_generalized_eigenpairs(op.stiffness(), mass, m, options);
  return EigenBasis(std::move(pairs.values), std::move(pairs.vectors), weights);
}

EigenBasis dirichlet_basis(const Mesh& mesh, Index m, const EigenOptions& options) {
  return lowest_eigenpairs(assemble_laplacian(mesh), mesh.weights(), m, options);
}

}  // namespace electroconvect
