#include "doctest.h"
#include "support.hpp"

#include <electroconvect/error.hpp>

#include <Eigen/SVD>

using namespace test;

TEST_CASE("64x64 square matches the closed-form spectrum") {
  const auto mesh = square(64);
  const ec::EigenBasis basis = ec::dirichlet_basis(*mesh, 5);
  const double expected[] = {fd_eigenvalue(64, 1, 1), fd_eigenvalue(64, 1, 2), fd_eigenvalue(64, 2, 1),
                             fd_eigenvalue(64, 2, 2), fd_eigenvalue(64, 1, 3)};
  for (int j = 0; j < 5; ++j) CHECK(std::abs(basis.value(j) / expected[j] - 1.0) <= 1e-10);
  CHECK(std::abs(basis.value(0) / (2 * kPi * kPi) - 1.0) < 0.01);
}

TEST_CASE("eigenvectors are weighted-orthonormal") {
  const auto mesh = square(32);
  const ec::EigenBasis basis = ec::dirichlet_basis(*mesh, 8);
  const Eigen::MatrixXd gram = basis.vectors().transpose() * mesh->weights().asDiagonal() * basis.vectors();
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(ec::integrate(*mesh, basis.vector(0).cwiseAbs2()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(ec::integrate(*mesh, basis.vector(0).cwiseProduct(basis.vector(1)))) <= 1e-10);
}

TEST_CASE("degenerate pair spans the analytic eigenspace") {
  // Discrete sines are exact eigenvectors of the 5-point stencil; for equal
  // dimensions ||P - Q|| = ||(I - Q) V|| with V an orthonormal basis of P.
  const int n = 32;
  const auto mesh = square(n);
  const ec::EigenBasis basis = ec::dirichlet_basis(*mesh, 3, {.method = ec::EigenMethod::lanczos});
  const VectorXd sw = mesh->weights().cwiseSqrt();
  Eigen::MatrixXd computed = sw.asDiagonal() * basis.vectors().rightCols(2);
  Eigen::MatrixXd oracle(mesh->size(), 2);
  oracle.col(0) = sw.cwiseProduct(sample(*mesh, [](double x, double y) { return std::sin(kPi * x) * std::sin(2 * kPi * y); }));
  oracle.col(1) = sw.cwiseProduct(sample(*mesh, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(kPi * y); }));
  oracle.col(0).normalize();
  oracle.col(1).normalize();
  const Eigen::MatrixXd residual = computed - oracle * (oracle.transpose() * computed);
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues()[0] <= 1e-6);
}

TEST_CASE("dense and Lanczos paths agree") {
  const auto mesh = annulus(20, 24);
  const auto dense = ec::dirichlet_basis(*mesh, 10, {.method = ec::EigenMethod::dense});
  const auto krylov = ec::dirichlet_basis(*mesh, 10, {.method = ec::EigenMethod::lanczos});
  for (int j = 0; j < 10; ++j) CHECK(krylov.value(j) == doctest::Approx(dense.value(j)).epsilon(1e-10));
}

TEST_CASE("output is deterministic for a fixed seed") {
  const auto mesh = square(40);
  const auto a = ec::dirichlet_basis(*mesh, 6, {.method = ec::EigenMethod::lanczos});
  const auto b = ec::dirichlet_basis(*mesh, 6, {.method = ec::EigenMethod::lanczos});
  CHECK(a.values() == b.values());
  CHECK(a.vectors() == b.vectors());
}

TEST_CASE("requesting more pairs than unknowns is an error") {
  const auto mesh = square(6);
  CHECK_THROWS_AS(ec::dirichlet_basis(*mesh, mesh->size() + 1), ec::InvalidArgument);
  CHECK_THROWS_AS(ec::dirichlet_basis(*mesh, 0), ec::InvalidArgument);
}

TEST_CASE("first eigenvalue grows when the annulus shrinks") {
  for (int n : {16, 32}) {
    const double wide = ec::dirichlet_basis(*annulus(n, n, 1.0, 2.0), 1).value(0);
    const double narrow = ec::dirichlet_basis(*annulus(n, n, 1.0, 1.5), 1).value(0);
    CHECK(narrow > wide);
  }
}
