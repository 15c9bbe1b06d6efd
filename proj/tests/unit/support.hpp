#pragma once

#include <electroconvect/eigensolver.hpp>
#include <electroconvect/mesh.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace test {

namespace ec = electroconvect;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

inline std::shared_ptr<const ec::Mesh> square(int n) {
  return std::make_shared<const ec::Mesh>(ec::build_rectangle_mesh(n, n, 1.0, 1.0));
}

inline std::shared_ptr<const ec::Mesh> annulus(int nr, int ntheta, double ri = 1.0, double ro = 2.0) {
  return std::make_shared<const ec::Mesh>(ec::build_annulus_mesh(nr, ntheta, ri, ro));
}

/// Discrete 5-point eigenvalue on the unit square with n cells per side.
inline double fd_eigenvalue(int n, int k, int l) {
  const double h = 1.0 / n;
  const double sk = std::sin(k * kPi * h / 2.0), sl = std::sin(l * kPi * h / 2.0);
  return 4.0 / (h * h) * (sk * sk + sl * sl);
}

inline VectorXd sample(const ec::Mesh& mesh, auto fn) {
  VectorXd f(mesh.size());
  for (Eigen::Index i = 0; i < mesh.size(); ++i) f[i] = fn(mesh.x()[i], mesh.y()[i]);
  return f;
}

inline VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Rigid-rotation profile: tangential speed r(2 - r)(r - 1), zero on both walls.
inline ec::VectorField swirl(const ec::Mesh& mesh) {
  ec::VectorField u = ec::VectorField::zero(mesh.size());
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const double r = mesh.radius()[i];
    u.c1[i] = (r - 1.0) * (2.0 - r);
  }
  return u;
}

inline VectorXd radial(const ec::Mesh& mesh) {
  VectorXd f(mesh.size());
  for (Eigen::Index i = 0; i < mesh.size(); ++i) f[i] = std::sin(kPi * (mesh.radius()[i] - 1.0));
  return f;
}

}  // namespace test
