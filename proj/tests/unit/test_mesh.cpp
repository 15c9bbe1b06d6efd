#include "doctest.h"
#include "support.hpp"

#include <electroconvect/error.hpp>
#include <electroconvect/measurements.hpp>

using namespace test;

TEST_CASE("rectangle mesh node count and weights") {
  const ec::Mesh m = ec::build_rectangle_mesh(4, 4, 1.0, 1.0);
  CHECK(m.size() == 9);
  for (Eigen::Index i = 0; i < m.size(); ++i) CHECK(m.weights()[i] == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

  const ec::Mesh big = ec::build_rectangle_mesh(64, 64, 1.0, 1.0);
  CHECK(big.weights().sum() == doctest::Approx(3969.0 / 4096.0).epsilon(1e-14));
}

TEST_CASE("mesh preconditions") {
  CHECK_THROWS_AS(ec::build_rectangle_mesh(2, 4, 1.0, 1.0), ec::InvalidArgument);
  CHECK_THROWS_AS(ec::build_rectangle_mesh(4, 4, 0.0, 1.0), ec::InvalidArgument);
  CHECK_THROWS_AS(ec::build_annulus_mesh(8, 8, 2.0, 1.0), ec::InvalidArgument);
  CHECK_THROWS_AS(ec::build_annulus_mesh(8, 6, 1.0, 2.0), ec::InvalidArgument);
  CHECK(ec::build_annulus_mesh(3, 8, 1.0, 2.0).size() == 16);
}

TEST_CASE("quadrature weight converges to the domain area") {
  std::vector<double> h, err_square, err_annulus;
  for (int n : {16, 32, 64}) {
    h.push_back(1.0 / n);
    err_square.push_back(std::abs(square(n)->weights().sum() - 1.0));
    err_annulus.push_back(std::abs(annulus(n, n)->weights().sum() - 3.0 * kPi));
  }
  // The square misses a boundary strip of area 2h - h^2, so the order
  // approaches 1 from below.
  CHECK(ec::min_pairwise_order(h, err_square) >= 0.95);
  CHECK(ec::min_pairwise_order(h, err_annulus) >= 0.95);
  CHECK(err_square.back() < err_square.front());
  CHECK(annulus(64, 64)->area() == doctest::Approx(3.0 * kPi));
}

TEST_CASE("laplacian of sin(pi x) sin(pi y) converges at second order") {
  auto s = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
  std::vector<double> h, err;
  for (int n : {16, 32, 64}) {
    const auto mesh = square(n);
    const VectorXd f = sample(*mesh, s);
    const VectorXd lf = ec::assemble_laplacian(*mesh).apply(f);
    h.push_back(1.0 / n);
    err.push_back((lf - 2.0 * kPi * kPi * f).cwiseAbs().maxCoeff() / (2.0 * kPi * kPi));
  }
  const double order = ec::fitted_order(h, err);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
  const auto mesh = square(8);
  CHECK(ec::assemble_laplacian(*mesh).apply(VectorXd::Zero(mesh->size())).isZero(0.0));
}

TEST_CASE("annulus laplacian converges at second order") {
  // -Lap of sin(pi (r - 1)) = pi^2 sin - (pi / r) cos.
  std::vector<double> h, err;
  for (int n : {16, 32, 64}) {
    const auto mesh = annulus(n, n);
    VectorXd f(mesh->size()), exact(mesh->size());
    for (Eigen::Index i = 0; i < mesh->size(); ++i) {
      const double r = mesh->radius()[i];
      f[i] = std::sin(kPi * (r - 1.0));
      exact[i] = kPi * kPi * f[i] - kPi / r * std::cos(kPi * (r - 1.0));
    }
    h.push_back(1.0 / n);
    err.push_back((ec::assemble_laplacian(*mesh).apply(f) - exact).cwiseAbs().maxCoeff());
  }
  const double order = ec::fitted_order(h, err);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
}

TEST_CASE("laplacian is symmetric and positive in the weighted product") {
  std::mt19937_64 rng(3);
  for (const auto& mesh : {square(12), annulus(10, 16)}) {
    const ec::SparseSymmetricOperator op = ec::assemble_laplacian(*mesh);
    for (int k = 0; k < 100; ++k) {
      const VectorXd f = random_vector(mesh->size(), rng);
      const VectorXd g = random_vector(mesh->size(), rng);
      const double fg = ec::inner(*mesh, op.apply(f), g);
      const double gf = ec::inner(*mesh, f, op.apply(g));
      const double scale = std::sqrt(ec::inner(*mesh, op.apply(f), op.apply(f)) * ec::inner(*mesh, g, g));
      CHECK(std::abs(fg - gf) <= 1e-13 * scale);
      CHECK(ec::inner(*mesh, op.apply(f), f) > 0.0);
    }
  }
}

TEST_CASE("gradient of sin(pi x) sin(pi y)") {
  std::vector<double> h, err;
  for (int n : {16, 32, 64}) {
    const auto mesh = square(n);
    const ec::VectorField g = ec::gradient(*mesh, sample(*mesh, [](double x, double y) {
                                             return std::sin(kPi * x) * std::sin(kPi * y);
                                           }));
    const VectorXd gx = sample(*mesh, [](double x, double y) { return kPi * std::cos(kPi * x) * std::sin(kPi * y); });
    const VectorXd gy = sample(*mesh, [](double x, double y) { return kPi * std::sin(kPi * x) * std::cos(kPi * y); });
    h.push_back(1.0 / n);
    err.push_back(std::max((g.c0 - gx).cwiseAbs().maxCoeff(), (g.c1 - gy).cwiseAbs().maxCoeff()));
  }
  CHECK(ec::fitted_order(h, err) >= 1.8);
  const auto mesh = square(8);
  const ec::VectorField z = ec::gradient(*mesh, VectorXd::Zero(mesh->size()));
  CHECK(z.c0.isZero(0.0));
  CHECK(z.c1.isZero(0.0));
}

TEST_CASE("divergence is the negative adjoint of the gradient") {
  std::mt19937_64 rng(5);
  for (const auto& mesh : {square(10), annulus(10, 12)}) {
    for (int k = 0; k < 20; ++k) {
      const VectorXd f = random_vector(mesh->size(), rng);
      const ec::VectorField v{random_vector(mesh->size(), rng), random_vector(mesh->size(), rng)};
      const double lhs = ec::inner(*mesh, ec::gradient(*mesh, f), v);
      const double rhs = -ec::inner(*mesh, f, ec::divergence(*mesh, v));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("summation by parts: grad energy matches the laplacian form") {
  auto f_of = [](double x, double y) { return x * (1 - x) * y * (1 - y) * std::exp(x); };
  double previous = 1.0;
  for (int n : {32, 64}) {
    const auto mesh = square(n);
    const VectorXd f = sample(*mesh, f_of);
    const ec::VectorField g = ec::gradient(*mesh, f);
    const double lhs = ec::inner(*mesh, g, g);
    const double rhs = ec::inner(*mesh, ec::assemble_laplacian(*mesh).apply(f), f);
    const double rel = std::abs(lhs - rhs) / rhs;
    CHECK(rel <= 10.0 / n);
    CHECK(rel < previous);
    previous = rel;
  }
}

TEST_CASE("norms and integrals") {
  const auto mesh = square(16);
  CHECK(ec::integrate(*mesh, VectorXd::Ones(mesh->size())) == doctest::Approx(mesh->weights().sum()));
  VectorXd f = VectorXd::Zero(mesh->size());
  f[10] = -3.0;
  CHECK(ec::lp_norm(*mesh, f, std::numeric_limits<double>::infinity()) == 3.0);
  CHECK(ec::lp_norm(*mesh, f, 1.0) == doctest::Approx(3.0 / 256.0));
  CHECK_THROWS_AS(ec::lp_norm(*mesh, f, 0.5), ec::InvalidArgument);
}

TEST_CASE("cartesian frame round trip on the annulus") {
  std::mt19937_64 rng(9);
  const auto mesh = annulus(8, 16);
  const ec::VectorField v{random_vector(mesh->size(), rng), random_vector(mesh->size(), rng)};
  const ec::VectorField back = ec::from_cartesian(*mesh, ec::to_cartesian(*mesh, v));
  CHECK((back.c0 - v.c0).norm() <= 1e-13 * v.c0.norm());
  CHECK((back.c1 - v.c1).norm() <= 1e-13 * v.c1.norm());
}
