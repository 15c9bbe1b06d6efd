#pragma once

#include "electroconvect/eigensolver.hpp"
#include "electroconvect/mesh.hpp"

#include <memory>

namespace electroconvect {

/// Galerkin coefficients a_j = <u, w_j>_w of a velocity field.
using VelocityCoeffs = Eigen::VectorXd;

/// Matrices of the stream-function eigenproblem.
struct StokesPencil {
  /// Clamped biharmonic energy sum w (Delta_h psi)^2, boundary nodes included
  /// through the ghost closure psi_{-1} = psi_1.
  Eigen::SparseMatrix<double> biharmonic;
  /// Velocity energy ||grad_perp psi||_w^2 with centered differences.
  Eigen::SparseMatrix<double> velocity_mass;
  /// Centered first-derivative matrices (local frame, Dirichlet closure).
  Eigen::SparseMatrix<double> d0, d1;
};

StokesPencil assemble_stokes_pencil(const Mesh& mesh);

/// Divergence-free velocity eigenfields w_j = grad_perp psi_j with
/// clamped stream functions psi_j, orthonormal in the weighted L^2 product.
class StokesBasis {
 public:
  StokesBasis(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd values, Eigen::MatrixXd stream);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  Eigen::Index size() const { return values_.size(); }
  const Eigen::VectorXd& values() const { return values_; }
  double value(Eigen::Index j) const { return values_[j]; }
  const Eigen::MatrixXd& stream() const { return stream_; }
  /// Local-frame velocity components, one column per mode.
  const Eigen::MatrixXd& velocity0() const { return velocity0_; }
  const Eigen::MatrixXd& velocity1() const { return velocity1_; }

  VectorField velocity(Eigen::Index j) const;
  VectorField reconstruct(const VelocityCoeffs& a) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  Eigen::VectorXd values_;
  Eigen::MatrixXd stream_;
  Eigen::MatrixXd velocity0_, velocity1_;
};

/// Stream function to velocity: (-d_2 psi, d_1 psi) in the local frame.
VectorField perp_gradient(const Mesh& mesh, const ScalarField& psi);

/// Solves (discrete Delta^2, clamped) psi = lambda (discrete -Delta) psi.
/// Requires m <= (interior nodes) / 4.
StokesBasis stokes_basis(std::shared_ptr<const Mesh> mesh, Eigen::Index m, const EigenOptions& options = {});

/// Weighted projections a_j = <v, w_j>_w.
VelocityCoeffs leray_project(const StokesBasis& basis, const VectorField& v);

/// Skew-symmetric transport 1/2 [u.grad f + div(u f)].
ScalarField advect(const Mesh& mesh, const VectorField& u, const ScalarField& f);

/// Vector form: applied to each Cartesian component of v, result in the local frame.
VectorField advect(const Mesh& mesh, const VectorField& u, const VectorField& v);

/// P_m B(u_m, u_m) for u_m = sum a_j w_j.
VelocityCoeffs nonlinear_term(const StokesBasis& basis, const VelocityCoeffs& a);

}  // namespace electroconvect
