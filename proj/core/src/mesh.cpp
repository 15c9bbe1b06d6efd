#include "electroconvect/mesh.hpp"

#include "electroconvect/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace electroconvect {

namespace {

using Triplet = Eigen::Triplet<double>;

// Derivative along a non-periodic axis of length n with stride `stride`,
// sampled at position i of that axis.
double axis_derivative(const Eigen::VectorXd& f, Eigen::Index base, Eigen::Index stride, int i, int n,
                       double h, BoundaryTreatment treatment) {
  auto at = [&](int k) { return f[base + stride * k]; };
  if (treatment == BoundaryTreatment::dirichlet || (i > 0 && i < n - 1)) {
    const double right = i + 1 < n ? at(i + 1) : 0.0;
    const double left = i > 0 ? at(i - 1) : 0.0;
    return (right - left) / (2.0 * h);
  }
  if (n < 3) {
    // Too few nodes for a second-order one-sided stencil.
    if (n == 1) return 0.0;
    return (at(1) - at(0)) / h;
  }
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

}  // namespace

std::string to_string(MeshKind kind) {
  return kind == MeshKind::rectangle ? "rectangle" : "annulus";
}

double Mesh::min_spacing() const {
  if (kind() == MeshKind::rectangle) return std::min(h_first_, h_second_);
  return std::min(h_first_, radius_.minCoeff() * h_second_);
}

double Mesh::area() const {
  if (kind() == MeshKind::rectangle) return params_.a * params_.b;
  return std::numbers::pi * (params_.b * params_.b - params_.a * params_.a);
}

Mesh build_rectangle_mesh(int nx, int ny, double lx, double ly) {
  if (nx < 3 || ny < 3) throw InvalidArgument("rectangle mesh needs nx, ny >= 3");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("rectangle side lengths must be positive");

  Mesh mesh;
  mesh.params_ = {MeshKind::rectangle, nx, ny, lx, ly};
  mesh.count_first_ = nx - 1;
  mesh.count_second_ = ny - 1;
  mesh.h_first_ = lx / nx;
  mesh.h_second_ = ly / ny;

  const Eigen::Index n = static_cast<Eigen::Index>(nx - 1) * (ny - 1);
  mesh.x_.resize(n);
  mesh.y_.resize(n);
  mesh.weights_ = Eigen::VectorXd::Constant(n, mesh.h_first_ * mesh.h_second_);
  for (int j = 0; j < ny - 1; ++j) {
    for (int i = 0; i < nx - 1; ++i) {
      const auto k = mesh.index(i, j);
      mesh.x_[k] = (i + 1) * mesh.h_first_;
      mesh.y_[k] = (j + 1) * mesh.h_second_;
    }
  }
  return mesh;
}

Mesh build_annulus_mesh(int nr, int ntheta, double r_inner, double r_outer) {
  if (!(r_inner > 0.0) || !(r_inner < r_outer))
    throw InvalidArgument("annulus needs 0 < r_inner < r_outer");
  if (nr < 3) throw InvalidArgument("annulus mesh needs nr >= 3");
  if (ntheta < 8) throw InvalidArgument("annulus mesh needs ntheta >= 8");

  Mesh mesh;
  mesh.params_ = {MeshKind::annulus, nr, ntheta, r_inner, r_outer};
  mesh.count_first_ = nr - 1;
  mesh.count_second_ = ntheta;
  mesh.h_first_ = (r_outer - r_inner) / nr;
  mesh.h_second_ = 2.0 * std::numbers::pi / ntheta;

  const Eigen::Index n = static_cast<Eigen::Index>(nr - 1) * ntheta;
  mesh.x_.resize(n);
  mesh.y_.resize(n);
  mesh.radius_.resize(n);
  mesh.theta_.resize(n);
  mesh.weights_.resize(n);
  for (int k = 0; k < ntheta; ++k) {
    const double th = k * mesh.h_second_;
    for (int i = 0; i < nr - 1; ++i) {
      const auto idx = mesh.index(i, k);
      const double r = r_inner + (i + 1) * mesh.h_first_;
      mesh.radius_[idx] = r;
      mesh.theta_[idx] = th;
      mesh.x_[idx] = r * std::cos(th);
      mesh.y_[idx] = r * std::sin(th);
      mesh.weights_[idx] = r * mesh.h_first_ * mesh.h_second_;
    }
  }
  return mesh;
}

Mesh build_mesh(const MeshParams& params) {
  if (params.kind == MeshKind::rectangle) return build_rectangle_mesh(params.n1, params.n2, params.a, params.b);
  return build_annulus_mesh(params.n1, params.n2, params.a, params.b);
}

SparseSymmetricOperator::SparseSymmetricOperator(Eigen::SparseMatrix<double> stiffness, Eigen::VectorXd weights)
    : stiffness_(std::move(stiffness)), weights_(std::move(weights)) {
  if (stiffness_.rows() != weights_.size() || stiffness_.cols() != weights_.size())
    throw MismatchError("stiffness and weight dimensions differ");
}

ScalarField SparseSymmetricOperator::apply(const ScalarField& f) const {
  if (f.size() != dimension()) throw MismatchError("field size does not match operator dimension");
  return (stiffness_ * f).cwiseQuotient(weights_);
}

SparseSymmetricOperator assemble_laplacian(const Mesh& mesh) {
  const int n1 = mesh.count_first();
  const int n2 = mesh.count_second();
  const double h1 = mesh.spacing_first();
  const double h2 = mesh.spacing_second();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.size()) * 5);

  // Each edge with conductance c contributes c(f_a - f_b)^2 to the energy.
  auto edge = [&](Eigen::Index a, int ib, int jb, bool interior, double c) {
    triplets.emplace_back(a, a, c);
    if (interior) triplets.emplace_back(a, mesh.index(ib, jb), -c);
  };

  if (mesh.kind() == MeshKind::rectangle) {
    const double cx = h2 / h1;
    const double cy = h1 / h2;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const auto a = mesh.index(i, j);
        edge(a, i - 1, j, i > 0, cx);
        edge(a, i + 1, j, i + 1 < n1, cx);
        edge(a, i, j - 1, j > 0, cy);
        edge(a, i, j + 1, j + 1 < n2, cy);
      }
    }
  } else {
    const double r0 = mesh.params().a;
    for (int k = 0; k < n2; ++k) {
      for (int i = 0; i < n1; ++i) {
        const auto a = mesh.index(i, k);
        const double r = r0 + (i + 1) * h1;
        edge(a, i - 1, k, i > 0, (r - 0.5 * h1) * h2 / h1);
        edge(a, i + 1, k, i + 1 < n1, (r + 0.5 * h1) * h2 / h1);
        const double ct = h1 / (r * h2);
        edge(a, i, (k + n2 - 1) % n2, true, ct);
        edge(a, i, (k + 1) % n2, true, ct);
      }
    }
  }

  Eigen::SparseMatrix<double> stiffness(mesh.size(), mesh.size());
  stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSymmetricOperator(std::move(stiffness), mesh.weights());
}

VectorField gradient(const Mesh& mesh, const ScalarField& f, BoundaryTreatment treatment) {
  if (f.size() != mesh.size()) throw MismatchError("gradient: field size does not match mesh");
  const int n1 = mesh.count_first();
  const int n2 = mesh.count_second();
  const double h1 = mesh.spacing_first();
  const double h2 = mesh.spacing_second();
  VectorField g = VectorField::zero(mesh.size());

  if (mesh.kind() == MeshKind::rectangle) {
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const auto k = mesh.index(i, j);
        g.c0[k] = axis_derivative(f, mesh.index(0, j), 1, i, n1, h1, treatment);
        g.c1[k] = axis_derivative(f, mesh.index(i, 0), n1, j, n2, h2, treatment);
      }
    }
  } else {
    const auto& r = mesh.radius();
    for (int k = 0; k < n2; ++k) {
      const int kp = (k + 1) % n2;
      const int km = (k + n2 - 1) % n2;
      for (int i = 0; i < n1; ++i) {
        const auto idx = mesh.index(i, k);
        g.c0[idx] = axis_derivative(f, mesh.index(0, k), 1, i, n1, h1, treatment);
        g.c1[idx] = (f[mesh.index(i, kp)] - f[mesh.index(i, km)]) / (2.0 * h2 * r[idx]);
      }
    }
  }
  return g;
}

ScalarField divergence(const Mesh& mesh, const VectorField& v) {
  if (v.size() != mesh.size()) throw MismatchError("divergence: field size does not match mesh");
  const int n1 = mesh.count_first();
  const int n2 = mesh.count_second();
  const double h1 = mesh.spacing_first();
  const double h2 = mesh.spacing_second();
  ScalarField d(mesh.size());

  if (mesh.kind() == MeshKind::rectangle) {
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const double xr = i + 1 < n1 ? v.c0[mesh.index(i + 1, j)] : 0.0;
        const double xl = i > 0 ? v.c0[mesh.index(i - 1, j)] : 0.0;
        const double yt = j + 1 < n2 ? v.c1[mesh.index(i, j + 1)] : 0.0;
        const double yb = j > 0 ? v.c1[mesh.index(i, j - 1)] : 0.0;
        d[mesh.index(i, j)] = (xr - xl) / (2.0 * h1) + (yt - yb) / (2.0 * h2);
      }
    }
  } else {
    const auto& r = mesh.radius();
    for (int k = 0; k < n2; ++k) {
      const int kp = (k + 1) % n2;
      const int km = (k + n2 - 1) % n2;
      for (int i = 0; i < n1; ++i) {
        const auto idx = mesh.index(i, k);
        const double outer = i + 1 < n1 ? r[idx + 1] * v.c0[idx + 1] : 0.0;
        const double inner_flux = i > 0 ? r[idx - 1] * v.c0[idx - 1] : 0.0;
        const double dtheta = v.c1[mesh.index(i, kp)] - v.c1[mesh.index(i, km)];
        d[idx] = ((outer - inner_flux) / (2.0 * h1) + dtheta / (2.0 * h2)) / r[idx];
      }
    }
  }
  return d;
}

ScalarField curl(const Mesh& mesh, const VectorField& v) {
  return divergence(mesh, VectorField{v.c1, -v.c0});
}

VectorField to_cartesian(const Mesh& mesh, const VectorField& v) {
  if (mesh.kind() == MeshKind::rectangle) return v;
  const Eigen::ArrayXd c = mesh.theta().array().cos();
  const Eigen::ArrayXd s = mesh.theta().array().sin();
  return {(v.c0.array() * c - v.c1.array() * s).matrix(), (v.c0.array() * s + v.c1.array() * c).matrix()};
}

VectorField from_cartesian(const Mesh& mesh, const VectorField& v) {
  if (mesh.kind() == MeshKind::rectangle) return v;
  const Eigen::ArrayXd c = mesh.theta().array().cos();
  const Eigen::ArrayXd s = mesh.theta().array().sin();
  return {(v.c0.array() * c + v.c1.array() * s).matrix(), (-v.c0.array() * s + v.c1.array() * c).matrix()};
}

VectorField cartesian_gradient(const Mesh& mesh, const ScalarField& f, BoundaryTreatment treatment) {
  return to_cartesian(mesh, gradient(mesh, f, treatment));
}

double integrate(const Mesh& mesh, const ScalarField& f) {
  if (f.size() != mesh.size()) throw MismatchError("integrate: field size does not match mesh");
  return mesh.weights().dot(f);
}

double inner(const Mesh& mesh, const ScalarField& f, const ScalarField& g) {
  if (f.size() != mesh.size() || g.size() != mesh.size())
    throw MismatchError("inner: field size does not match mesh");
  return (mesh.weights().array() * f.array() * g.array()).sum();
}

double inner(const Mesh& mesh, const VectorField& u, const VectorField& v) {
  return inner(mesh, u.c0, v.c0) + inner(mesh, u.c1, v.c1);
}

Eigen::VectorXd magnitude(const VectorField& v) {
  return (v.c0.array().square() + v.c1.array().square()).sqrt().matrix();
}

double lp_norm(const Mesh& mesh, const ScalarField& f, double p) {
  if (f.size() != mesh.size()) throw MismatchError("lp_norm: field size does not match mesh");
  if (std::isinf(p)) return f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm needs p >= 1");
  if (p == 2.0) return std::sqrt(inner(mesh, f, f));
  return std::pow((mesh.weights().array() * f.array().abs().pow(p)).sum(), 1.0 / p);
}

double l2_norm(const Mesh& mesh, const VectorField& v) {
  return std::sqrt(inner(mesh, v, v));
}

}  // namespace electroconvect
