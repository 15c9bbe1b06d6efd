#pragma once

#include "electroconvect/eigensolver.hpp"
#include "electroconvect/mesh.hpp"

#include <memory>

namespace electroconvect {

/// Coefficients f_j = <f, phi_j>_w of a field with respect to a Dirichlet basis.
/// Every fractional operator acts on these coefficients; fields are projected
/// into the span first.
struct SpectralField {
  std::shared_ptr<const EigenBasis> basis;
  Eigen::VectorXd coeffs;

  Eigen::Index size() const { return coeffs.size(); }
};

SpectralField to_coeffs(std::shared_ptr<const EigenBasis> basis, const ScalarField& f);
ScalarField from_coeffs(const SpectralField& sf);

/// f - P_n f: the part of f the basis cannot represent.
ScalarField projection_residual(const std::shared_ptr<const EigenBasis>& basis, const ScalarField& f);

/// Lambda^s: multiplies coefficient j by mu_j^{s/2}. Accepts s in [-2, 3].
SpectralField apply_fractional(const SpectralField& sf, double s);

/// ||f||_{s,D} = sqrt(sum mu_j^s f_j^2).
double dnorm(const SpectralField& sf, double s);

/// R f = grad Lambda^{-1} f.
VectorField riesz(const EigenBasis& basis, const Mesh& mesh, const SpectralField& sf);

enum class PoissonVariant {
  /// e^{-z Lambda} Lambda^{-1} q: the potential above the film at height z.
  potential,
  /// e^{-z Lambda} q.
  semigroup,
};

SpectralField poisson_extension(const SpectralField& sf, double z,
                                PoissonVariant variant = PoissonVariant::potential);

/// C^2 convex functions with value 0 at the origin.
class ConvexFunction {
 public:
  static ConvexFunction square();
  /// x^p for even p >= 2.
  static ConvexFunction even_power(int p);
  /// width * (log(1 + e^{x/width}) - log 2).
  static ConvexFunction smooth_hinge(double width);

  double value(double x) const;
  double derivative(double x) const;

 private:
  enum class Kind { power, hinge };
  ConvexFunction(Kind kind, int power, double width) : kind_(kind), power_(power), width_(width) {}
  Kind kind_;
  int power_;
  double width_;
};

/// Pointwise Phi'(f) Lambda^s f - Lambda^s Phi(f) for f projected into the span;
/// Phi(f) is projected again before Lambda^s acts on it. s in [0, 2].
ScalarField cordoba_defect(const std::shared_ptr<const EigenBasis>& basis, const ScalarField& f,
                           const ConvexFunction& phi, double s);

/// Pointwise u . grad f (local-frame components).
ScalarField directional_derivative(const Mesh& mesh, const VectorField& u, const ScalarField& f);

/// [u.grad, Lambda] f = u.grad(Lambda f) - Lambda(u.grad f), with f and
/// u.grad f projected into the span before each Lambda.
ScalarField commutator(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, const VectorField& u,
                       const ScalarField& f);

/// Computable stand-in for ||u||_{B(Omega)}: ||u||_{W^{1,inf}} + ||u||_{W^{2,p}}
/// from finite differences of the Cartesian components.
double b_norm_proxy(const Mesh& mesh, const VectorField& u, double p = 4.0);

}  // namespace electroconvect
