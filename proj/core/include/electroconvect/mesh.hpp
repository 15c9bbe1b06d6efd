#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>

namespace electroconvect {

/// Nodal values on the interior nodes of a mesh. Boundary values are zero.
using ScalarField = Eigen::VectorXd;

/// Two nodal components in the mesh's local orthonormal frame:
/// (x, y) on a rectangle, (r, theta) on an annulus.
struct VectorField {
  Eigen::VectorXd c0;
  Eigen::VectorXd c1;

  static VectorField zero(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
  Eigen::Index size() const { return c0.size(); }
};

enum class MeshKind { rectangle, annulus };

std::string to_string(MeshKind kind);

/// Construction parameters. For a rectangle, (n1, n2, a, b) = (nx, ny, Lx, Ly);
/// for an annulus, (nr, ntheta, r_inner, r_outer).
struct MeshParams {
  MeshKind kind = MeshKind::rectangle;
  int n1 = 0;
  int n2 = 0;
  double a = 0.0;
  double b = 0.0;

  bool operator==(const MeshParams&) const = default;
};

/// How derivatives treat the first and last interior nodes along a
/// non-periodic axis.
enum class BoundaryTreatment {
  /// Field is zero on the boundary; centered differences reach it.
  dirichlet,
  /// No boundary data assumed; second-order one-sided differences.
  extrapolate,
};

/// Structured grid on a rectangle [0,Lx]x[0,Ly] or an annulus
/// r_inner < r < r_outer. Only interior nodes carry unknowns. The annulus is
/// periodic in theta. Node index = i + n_first * j with i along x (or r).
class Mesh {
 public:
  const MeshParams& params() const { return params_; }
  MeshKind kind() const { return params_.kind; }

  /// Number of interior nodes.
  Eigen::Index size() const { return weights_.size(); }
  int count_first() const { return count_first_; }
  int count_second() const { return count_second_; }
  Eigen::Index index(int i, int j) const { return i + static_cast<Eigen::Index>(count_first_) * j; }

  /// Grid spacings (h_x, h_y) or (h_r, h_theta).
  double spacing_first() const { return h_first_; }
  double spacing_second() const { return h_second_; }
  /// Smallest physical distance between neighbouring nodes.
  double min_spacing() const;

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  /// Radius per node (annulus only; empty for rectangles).
  const Eigen::VectorXd& radius() const { return radius_; }
  /// Angle per node (annulus only; empty for rectangles).
  const Eigen::VectorXd& theta() const { return theta_; }
  /// Quadrature weight per interior node; includes the r dr dtheta metric.
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Exact area of the continuum domain.
  double area() const;

  friend Mesh build_rectangle_mesh(int nx, int ny, double lx, double ly);
  friend Mesh build_annulus_mesh(int nr, int ntheta, double r_inner, double r_outer);

 private:
  Mesh() = default;

  MeshParams params_;
  int count_first_ = 0;
  int count_second_ = 0;
  double h_first_ = 0.0;
  double h_second_ = 0.0;
  Eigen::VectorXd x_, y_, radius_, theta_, weights_;
};

Mesh build_rectangle_mesh(int nx, int ny, double lx, double ly);
Mesh build_annulus_mesh(int nr, int ntheta, double r_inner, double r_outer);
Mesh build_mesh(const MeshParams& params);

/// Discrete -Laplacian with homogeneous Dirichlet data, stored as the
/// symmetric stiffness K = W L so that L = W^{-1} K is self-adjoint in the
/// weighted inner product.
class SparseSymmetricOperator {
 public:
  SparseSymmetricOperator(Eigen::SparseMatrix<double> stiffness, Eigen::VectorXd weights);

  Eigen::Index dimension() const { return weights_.size(); }
  ScalarField apply(const ScalarField& f) const;

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd weights_;
};

/// 5-point stencil (rectangle) or conservative polar 5-point stencil
/// r^{-1} d_r(r d_r) + r^{-2} d_theta^2 with half-point radii (annulus).
SparseSymmetricOperator assemble_laplacian(const Mesh& mesh);

/// Centered second-order gradient in the local frame; (d_r, r^{-1} d_theta)
/// on the annulus.
VectorField gradient(const Mesh& mesh, const ScalarField& f,
                     BoundaryTreatment treatment = BoundaryTreatment::dirichlet);

/// Centered divergence of a field vanishing on the boundary. Exactly the
/// negative weighted adjoint of gradient(., dirichlet).
ScalarField divergence(const Mesh& mesh, const VectorField& v);

/// Scalar curl d_x v_y - d_y v_x of a field vanishing on the boundary.
ScalarField curl(const Mesh& mesh, const VectorField& v);

/// Rotate local-frame components to Cartesian (x, y) components and back.
VectorField to_cartesian(const Mesh& mesh, const VectorField& v);
VectorField from_cartesian(const Mesh& mesh, const VectorField& v);

/// Gradient in Cartesian components.
VectorField cartesian_gradient(const Mesh& mesh, const ScalarField& f,
                               BoundaryTreatment treatment = BoundaryTreatment::dirichlet);

double integrate(const Mesh& mesh, const ScalarField& f);
double inner(const Mesh& mesh, const ScalarField& f, const ScalarField& g);
double inner(const Mesh& mesh, const VectorField& u, const VectorField& v);

/// Pointwise Euclidean magnitude of a vector field.
Eigen::VectorXd magnitude(const VectorField& v);

/// Weighted L^p norm, p >= 1; p = infinity gives the nodal max.
double lp_norm(const Mesh& mesh, const ScalarField& f, double p);
double l2_norm(const Mesh& mesh, const VectorField& v);

}  // namespace electroconvect
