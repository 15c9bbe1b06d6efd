#include "electroconvect/stokes.hpp"

#include "electroconvect/error.hpp"

#include <string>
#include <vector>

namespace electroconvect {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

SpMat diagonal(const Eigen::VectorXd& d) {
  SpMat out(d.size(), d.size());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Centered derivative matrices matching gradient(mesh, ., dirichlet).
std::pair<SpMat, SpMat> derivative_matrices(const Mesh& mesh) {
  const int n1 = mesh.count_first();
  const int n2 = mesh.count_second();
  const double h1 = mesh.spacing_first();
  const double h2 = mesh.spacing_second();
  std::vector<Triplet> t0, t1;
  t0.reserve(static_cast<std::size_t>(mesh.size()) * 2);
  t1.reserve(static_cast<std::size_t>(mesh.size()) * 2);
  const bool polar = mesh.kind() == MeshKind::annulus;

  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      const auto row = mesh.index(i, j);
      if (i + 1 < n1) t0.emplace_back(row, mesh.index(i + 1, j), 1.0 / (2.0 * h1));
      if (i > 0) t0.emplace_back(row, mesh.index(i - 1, j), -1.0 / (2.0 * h1));
      if (polar) {
        const double scale = 1.0 / (2.0 * h2 * mesh.radius()[row]);
        t1.emplace_back(row, mesh.index(i, (j + 1) % n2), scale);
        t1.emplace_back(row, mesh.index(i, (j + n2 - 1) % n2), -scale);
      } else {
        if (j + 1 < n2) t1.emplace_back(row, mesh.index(i, j + 1), 1.0 / (2.0 * h2));
        if (j > 0) t1.emplace_back(row, mesh.index(i, j - 1), -1.0 / (2.0 * h2));
      }
    }
  }
  SpMat d0(mesh.size(), mesh.size()), d1(mesh.size(), mesh.size());
  d0.setFromTriplets(t0.begin(), t0.end());
  d1.setFromTriplets(t1.begin(), t1.end());
  return {std::move(d0), std::move(d1)};
}

}  // namespace

StokesPencil assemble_stokes_pencil(const Mesh& mesh) {
  const auto lap = assemble_laplacian(mesh);
  const Eigen::VectorXd& w = mesh.weights();
  const SpMat weight = diagonal(w);
  const SpMat laplacian = diagonal(w.cwiseInverse()) * lap.stiffness();

  // Boundary-node contributions: with psi = 0 on the wall and the ghost
  // psi_{-1} = psi_1, Delta_h psi at a wall node equals 2 psi_1 / h_n^2.
  // Each wall node carries half a cell of quadrature weight.
  Eigen::VectorXd wall = Eigen::VectorXd::Zero(mesh.size());
  const int n1 = mesh.count_first();
  const int n2 = mesh.count_second();
  const double h1 = mesh.spacing_first();
  const double h2 = mesh.spacing_second();
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      const auto k = mesh.index(i, j);
      if (mesh.kind() == MeshKind::rectangle) {
        const double side_x = 2.0 * h2 / (h1 * h1 * h1);
        const double side_y = 2.0 * h1 / (h2 * h2 * h2);
        if (i == 0) wall[k] += side_x;
        if (i == n1 - 1) wall[k] += side_x;
        if (j == 0) wall[k] += side_y;
        if (j == n2 - 1) wall[k] += side_y;
      } else {
        const double per_radius = 2.0 * h2 / (h1 * h1 * h1);
        if (i == 0) wall[k] += per_radius * mesh.params().a;
        if (i == n1 - 1) wall[k] += per_radius * mesh.params().b;
      }
    }
  }

  auto [d0, d1] = derivative_matrices(mesh);
  StokesPencil pencil;
  pencil.biharmonic = SpMat(laplacian.transpose() * weight * laplacian) + diagonal(wall);
  pencil.velocity_mass = SpMat(d0.transpose() * weight * d0) + SpMat(d1.transpose() * weight * d1);
  // Symmetrize away rounding from the products.
  pencil.biharmonic = 0.5 * (SpMat(pencil.biharmonic.transpose()) + pencil.biharmonic);
  pencil.velocity_mass = 0.5 * (SpMat(pencil.velocity_mass.transpose()) + pencil.velocity_mass);
  pencil.d0 = std::move(d0);
  pencil.d1 = std::move(d1);
  return pencil;
}

VectorField perp_gradient(const Mesh& mesh, const ScalarField& psi) {
  const VectorField g = gradient(mesh, psi);
  return {-g.c1, g.c0};
}

StokesBasis::StokesBasis(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd values, Eigen::MatrixXd stream)
    : mesh_(std::move(mesh)), values_(std::move(values)), stream_(std::move(stream)) {
  if (!mesh_) throw InvalidArgument("StokesBasis: null mesh");
  if (stream_.rows() != mesh_->size() || stream_.cols() != values_.size())
    throw MismatchError("stream functions do not match mesh or eigenvalue count");
  velocity0_.resize(mesh_->size(), size());
  velocity1_.resize(mesh_->size(), size());
  for (Eigen::Index j = 0; j < size(); ++j) {
    const VectorField w = perp_gradient(*mesh_, stream_.col(j));
    velocity0_.col(j) = w.c0;
    velocity1_.col(j) = w.c1;
  }
}

VectorField StokesBasis::velocity(Eigen::Index j) const { return {velocity0_.col(j), velocity1_.col(j)}; }

VectorField StokesBasis::reconstruct(const VelocityCoeffs& a) const {
  if (a.size() != size()) throw MismatchError("velocity coefficient count does not match the basis");
  return {velocity0_ * a, velocity1_ * a};
}

StokesBasis stokes_basis(std::shared_ptr<const Mesh> mesh, Eigen::Index m, const EigenOptions& options) {
  if (!mesh) throw InvalidArgument("stokes_basis: null mesh");
  if (m < 1 || 4 * m > mesh->size())
    throw InvalidArgument("stokes_basis needs 1 <= m <= " + std::to_string(mesh->size() / 4));
  const StokesPencil pencil = assemble_stokes_pencil(*mesh);
  auto pairs = lowest_generalized_eigenpairs(pencil.biharmonic, pencil.velocity_mass, m, options);
  return StokesBasis(std::move(mesh), std::move(pairs.values), std::move(pairs.vectors));
}

VelocityCoeffs leray_project(const StokesBasis& basis, const VectorField& v) {
  if (v.size() != basis.mesh().size()) throw MismatchError("leray_project: field does not match mesh");
  const Eigen::VectorXd& w = basis.mesh().weights();
  return basis.velocity0().transpose() * w.cwiseProduct(v.c0) + basis.velocity1().transpose() * w.cwiseProduct(v.c1);
}

ScalarField advect(const Mesh& mesh, const VectorField& u, const ScalarField& f) {
  const VectorField g = gradient(mesh, f);
  const ScalarField along = u.c0.cwiseProduct(g.c0) + u.c1.cwiseProduct(g.c1);
  const ScalarField flux_div = divergence(mesh, VectorField{u.c0.cwiseProduct(f), u.c1.cwiseProduct(f)});
  return 0.5 * (along + flux_div);
}

VectorField advect(const Mesh& mesh, const VectorField& u, const VectorField& v) {
  const VectorField cart = to_cartesian(mesh, v);
  return from_cartesian(mesh, VectorField{advect(mesh, u, cart.c0), advect(mesh, u, cart.c1)});
}

VelocityCoeffs nonlinear_term(const StokesBasis& basis, const VelocityCoeffs& a) {
  const VectorField u = basis.reconstruct(a);
  return leray_project(basis, advect(basis.mesh(), u, u));
}

}  // namespace electroconvect
