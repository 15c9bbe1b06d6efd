#include "doctest.h"
#include "support.hpp"

#include <electroconvect/error.hpp>
#include <electroconvect/measurements.hpp>
#include <electroconvect/spectral_ops.hpp>

using namespace test;

namespace {

struct Fixture {
  std::shared_ptr<const ec::Mesh> mesh = square(32);
  std::shared_ptr<const ec::EigenBasis> basis =
      std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, 16));

  ec::SpectralField unit(Eigen::Index j) const {
    VectorXd c = VectorXd::Zero(basis->size());
    c[j] = 1.0;
    return {basis, c};
  }
  ec::SpectralField random(std::uint64_t seed) const { return {basis, ec::random_span_coeffs(16, 16, seed)}; }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "coefficients of basis vectors and combinations") {
  const VectorXd c2 = ec::to_coeffs(basis, basis->vector(1)).coeffs;
  CHECK((c2 - unit(1).coeffs).cwiseAbs().maxCoeff() <= 1e-12);

  const VectorXd combo = ec::to_coeffs(basis, 3.0 * basis->vector(0) - basis->vector(3)).coeffs;
  VectorXd expected = VectorXd::Zero(16);
  expected[0] = 3.0;
  expected[3] = -1.0;
  CHECK((combo - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "Parseval after projection") {
  std::mt19937_64 rng(1);
  const VectorXd f = random_vector(mesh->size(), rng);
  const ec::SpectralField sf = ec::to_coeffs(basis, f);
  const VectorXd pf = ec::from_coeffs(sf);
  CHECK(std::sqrt(ec::inner(*mesh, pf, pf)) == doctest::Approx(sf.coeffs.norm()).epsilon(1e-10));
  // The residual is orthogonal to the span.
  CHECK(ec::to_coeffs(basis, ec::projection_residual(basis, f)).coeffs.norm() <= 1e-10 * sf.coeffs.norm());
}

TEST_CASE_FIXTURE(Fixture, "fractional powers") {
  const ec::SpectralField f = random(4);
  CHECK(ec::apply_fractional(f, 0.0).coeffs == f.coeffs);
  const double mu1 = ec::apply_fractional(unit(0), 2.0).coeffs[0];
  CHECK(mu1 == doctest::Approx(fd_eigenvalue(32, 1, 1)).epsilon(1e-10));
  CHECK(std::abs(mu1 / (2 * kPi * kPi) - 1.0) < 0.01);
  const VectorXd round = ec::apply_fractional(ec::apply_fractional(f, 1.0), -1.0).coeffs;
  CHECK((round - f.coeffs).cwiseAbs().maxCoeff() <= 1e-12 * f.coeffs.cwiseAbs().maxCoeff());
  const VectorXd st = ec::apply_fractional(ec::apply_fractional(f, 0.7), 1.1).coeffs;
  CHECK((st - ec::apply_fractional(f, 1.8).coeffs).norm() <= 1e-12 * st.norm());
  CHECK_THROWS_AS(ec::apply_fractional(f, 3.5), ec::InvalidArgument);
  CHECK_THROWS_AS(ec::apply_fractional(f, -2.5), ec::InvalidArgument);
}

TEST_CASE_FIXTURE(Fixture, "D-norms") {
  for (Eigen::Index j : {0, 5, 15})
    for (double s : {-1.0, 0.5, 1.0, 2.0})
      CHECK(ec::dnorm(unit(j), s) == doctest::Approx(std::pow(basis->value(j), s / 2.0)).epsilon(1e-13));
  const ec::SpectralField f = random(8);
  CHECK(ec::dnorm(f, 0.0) == doctest::Approx(std::sqrt(ec::inner(*mesh, ec::from_coeffs(f), ec::from_coeffs(f)))));
}

TEST_CASE("D-norm of order one approaches the gradient norm") {
  double previous = 1.0;
  for (int n : {16, 32, 64}) {
    const auto mesh = square(n);
    auto basis = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, 6));
    const ec::SpectralField f{basis, ec::random_span_coeffs(6, 6, 2)};
    const ec::VectorField g = ec::gradient(*mesh, ec::from_coeffs(f));
    const double rel = std::abs(ec::dnorm(f, 1.0) / std::sqrt(ec::inner(*mesh, g, g)) - 1.0);
    CHECK(rel <= 4.0 / n);
    CHECK(rel < previous);
    previous = rel;
  }
}

TEST_CASE_FIXTURE(Fixture, "Riesz transform") {
  for (Eigen::Index j : {0, 3}) {
    const ec::VectorField r = ec::riesz(*basis, *mesh, unit(j));
    const ec::VectorField g = ec::gradient(*mesh, basis->vector(j));
    const double root = std::sqrt(basis->value(j));
    CHECK((r.c0 - g.c0 / root).cwiseAbs().maxCoeff() <= 1e-12 * g.c0.cwiseAbs().maxCoeff());
    CHECK((r.c1 - g.c1 / root).cwiseAbs().maxCoeff() <= 1e-12 * g.c1.cwiseAbs().maxCoeff());
    CHECK(std::abs(ec::l2_norm(*mesh, r) - 1.0) <= 2.0 / 32);
  }
  const ec::VectorField z = ec::riesz(*basis, *mesh, {basis, VectorXd::Zero(16)});
  CHECK(z.c0.isZero(0.0));
  CHECK(z.c1.isZero(0.0));
}

TEST_CASE_FIXTURE(Fixture, "Poisson extension") {
  const ec::SpectralField q = random(12);
  CHECK((ec::poisson_extension(q, 0.0).coeffs - ec::apply_fractional(q, -1.0).coeffs).norm() <= 1e-15 * q.coeffs.norm());
  CHECK_THROWS_AS(ec::poisson_extension(q, -0.1), ec::InvalidArgument);

  // Harmonic in (x, z): d_z^2 c_j = mu_j c_j, checked with a centered difference in z.
  const double z = 0.05, dz = 1e-4;
  const VectorXd c0 = ec::poisson_extension(q, z - dz).coeffs;
  const VectorXd c1 = ec::poisson_extension(q, z).coeffs;
  const VectorXd c2 = ec::poisson_extension(q, z + dz).coeffs;
  const VectorXd dzz = (c0 - 2.0 * c1 + c2) / (dz * dz);
  CHECK((dzz - basis->values().cwiseProduct(c1)).norm() <= 1e-5 * basis->values().cwiseProduct(c1).norm());

  // Semigroup composition and monotone decay.
  const VectorXd split = ec::poisson_extension(ec::poisson_extension(q, 0.03, ec::PoissonVariant::semigroup), 0.04).coeffs;
  CHECK((split - ec::poisson_extension(q, 0.07).coeffs).norm() <= 1e-12 * split.norm());
  double last = ec::dnorm(q, 0.0);
  for (double zz : {0.01, 0.02, 0.05, 0.1, 0.5}) {
    const double now = ec::dnorm(ec::poisson_extension(q, zz, ec::PoissonVariant::semigroup), 0.0);
    CHECK(now <= last);
    last = now;
  }
}

TEST_CASE_FIXTURE(Fixture, "normal derivative of the potential recovers the charge") {
  const ec::JumpConvergence jump = ec::jump_condition(random(6), {4e-3, 2e-3, 1e-3});
  CHECK(jump.order >= 1.8);
  CHECK(jump.errors.back() < jump.errors.front());
}

TEST_CASE_FIXTURE(Fixture, "Cordoba defect") {
  const VectorXd zero = VectorXd::Zero(mesh->size());
  CHECK(ec::cordoba_defect(basis, zero, ec::ConvexFunction::square(), 1.0).isZero(0.0));

  // Full basis: the discrete defect is nonnegative up to rounding.
  const auto small = square(12);
  auto full = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*small, small->size()));
  const VectorXd phi1 = full->vector(0);
  CHECK(ec::cordoba_measure(full, *small, phi1, ec::ConvexFunction::square(), 1.0).tau <= 1e-6);
  const VectorXd f = ec::from_coeffs({full, ec::random_span_coeffs(full->size(), 8, 3)});
  for (double s : {0.5, 1.0, 1.5})
    CHECK(ec::cordoba_measure(full, *small, f, ec::ConvexFunction::even_power(4), s).tau <= 1e-6);
  CHECK_THROWS_AS(ec::ConvexFunction::even_power(3), ec::InvalidArgument);
}

TEST_CASE("commutator") {
  const auto mesh = square(16);
  auto basis = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, 8));
  std::mt19937_64 rng(2);
  const VectorXd f = random_vector(mesh->size(), rng);
  CHECK(ec::commutator(basis, *mesh, ec::VectorField::zero(mesh->size()), f).isZero(0.0));

  // A swirl commutes with the rotation-invariant Lambda on radial data.
  for (int n : {16, 32}) {
    const auto ring = annulus(n, n);
    auto rb = std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*ring, 16));
    const VectorXd g = radial(*ring);
    const VectorXd c = ec::commutator(rb, *ring, swirl(*ring), g);
    const double rel = std::sqrt(ec::inner(*ring, c, c) / ec::inner(*ring, g, g));
    CHECK(rel <= 1e-12);
  }
}
