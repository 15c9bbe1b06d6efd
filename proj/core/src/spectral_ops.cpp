#include "electroconvect/spectral_ops.hpp"

#include "electroconvect/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace electroconvect {

namespace {

void check_basis(const EigenBasis& basis, Eigen::Index field_size) {
  if (basis.dimension() != field_size)
    throw MismatchError("field has " + std::to_string(field_size) + " nodes but the basis has " +
                        std::to_string(basis.dimension()));
}

void check_mesh(const EigenBasis& basis, const Mesh& mesh) {
  if (basis.dimension() != mesh.size()) throw MismatchError("basis was not computed on this mesh");
}

}  // namespace

SpectralField to_coeffs(std::shared_ptr<const EigenBasis> basis, const ScalarField& f) {
  if (!basis) throw InvalidArgument("to_coeffs: null basis");
  check_basis(*basis, f.size());
  Eigen::VectorXd coeffs = basis->vectors().transpose() * basis->weights().cwiseProduct(f);
  return {std::move(basis), std::move(coeffs)};
}

ScalarField from_coeffs(const SpectralField& sf) {
  if (!sf.basis) throw InvalidArgument("from_coeffs: null basis");
  if (sf.coeffs.size() != sf.basis->size()) throw MismatchError("coefficient count does not match the basis");
  return sf.basis->vectors() * sf.coeffs;
}

ScalarField projection_residual(const std::shared_ptr<const EigenBasis>& basis, const ScalarField& f) {
  return f - from_coeffs(to_coeffs(basis, f));
}

SpectralField apply_fractional(const SpectralField& sf, double s) {
  if (!(s >= -2.0 && s <= 3.0)) throw InvalidArgument("fractional exponent must lie in [-2, 3]");
  if (s == 0.0) return sf;
  const Eigen::ArrayXd factor = sf.basis->values().array().pow(0.5 * s);
  return {sf.basis, (sf.coeffs.array() * factor).matrix()};
}

double dnorm(const SpectralField& sf, double s) {
  if (!(s >= -2.0 && s <= 3.0)) throw InvalidArgument("norm exponent must lie in [-2, 3]");
  return std::sqrt((sf.basis->values().array().pow(s) * sf.coeffs.array().square()).sum());
}

VectorField riesz(const EigenBasis& basis, const Mesh& mesh, const SpectralField& sf) {
  check_mesh(basis, mesh);
  if (sf.coeffs.size() != basis.size()) throw MismatchError("riesz: coefficient count does not match the basis");
  const Eigen::VectorXd inv_sqrt = basis.values().array().rsqrt();
  const ScalarField potential = basis.vectors() * sf.coeffs.cwiseProduct(inv_sqrt);
  return gradient(mesh, potential);
}

SpectralField poisson_extension(const SpectralField& sf, double z, PoissonVariant variant) {
  if (!(z >= 0.0)) throw InvalidArgument("poisson_extension needs z >= 0");
  const Eigen::ArrayXd root = sf.basis->values().array().sqrt();
  Eigen::ArrayXd factor = (-z * root).exp();
  if (variant == PoissonVariant::potential) factor /= root;
  return {sf.basis, (sf.coeffs.array() * factor).matrix()};
}

ConvexFunction ConvexFunction::square() { return {Kind::power, 2, 0.0}; }

ConvexFunction ConvexFunction::even_power(int p) {
  if (p < 2 || p % 2 != 0) throw InvalidArgument("even_power needs an even exponent >= 2");
  return {Kind::power, p, 0.0};
}

ConvexFunction ConvexFunction::smooth_hinge(double width) {
  if (!(width > 0.0)) throw InvalidArgument("smooth_hinge width must be positive");
  return {Kind::hinge, 0, width};
}

double ConvexFunction::value(double x) const {
  if (kind_ == Kind::power) return std::pow(x, power_);
  const double t = x / width_;
  // log(1 + e^t) evaluated without overflow.
  const double softplus = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  return width_ * (softplus - std::numbers::ln2);
}

double ConvexFunction::derivative(double x) const {
  if (kind_ == Kind::power) return power_ * std::pow(x, power_ - 1);
  const double t = x / width_;
  return t > 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

ScalarField cordoba_defect(const std::shared_ptr<const EigenBasis>& basis, const ScalarField& f,
                           const ConvexFunction& phi, double s) {
  if (!(s >= 0.0 && s <= 2.0)) throw InvalidArgument("cordoba_defect needs s in [0, 2]");
  const SpectralField sf = to_coeffs(basis, f);
  const ScalarField projected = from_coeffs(sf);
  const ScalarField lambda_f = from_coeffs(apply_fractional(sf, s));
  const ScalarField phi_f = projected.unaryExpr([&](double v) { return phi.value(v); });
  const ScalarField dphi_f = projected.unaryExpr([&](double v) { return phi.derivative(v); });
  const ScalarField lambda_phi = from_coeffs(apply_fractional(to_coeffs(basis, phi_f), s));
  return dphi_f.cwiseProduct(lambda_f) - lambda_phi;
}

ScalarField directional_derivative(const Mesh& mesh, const VectorField& u, const ScalarField& f) {
  const VectorField g = gradient(mesh, f);
  return u.c0.cwiseProduct(g.c0) + u.c1.cwiseProduct(g.c1);
}

ScalarField commutator(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, const VectorField& u,
                       const ScalarField& f) {
  check_mesh(*basis, mesh);
  const SpectralField sf = to_coeffs(basis, f);
  const ScalarField lambda_f = from_coeffs(apply_fractional(sf, 1.0));
  const ScalarField first = directional_derivative(mesh, u, lambda_f);
  const ScalarField transported = directional_derivative(mesh, u, from_coeffs(sf));
  const ScalarField second = from_coeffs(apply_fractional(to_coeffs(basis, transported), 1.0));
  return first - second;
}

double b_norm_proxy(const Mesh& mesh, const VectorField& u, double p) {
  if (!(p > 2.0)) throw InvalidArgument("b_norm_proxy needs p > 2");
  const VectorField cart = to_cartesian(mesh, u);
  const Eigen::Index n = mesh.size();

  Eigen::ArrayXd first_sq = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXd second_sq = Eigen::ArrayXd::Zero(n);
  for (const Eigen::VectorXd* comp : {&cart.c0, &cart.c1}) {
    const VectorField d = cartesian_gradient(mesh, *comp, BoundaryTreatment::dirichlet);
    first_sq += d.c0.array().square() + d.c1.array().square();
    for (const Eigen::VectorXd* dc : {&d.c0, &d.c1}) {
      const VectorField dd = cartesian_gradient(mesh, *dc, BoundaryTreatment::extrapolate);
      second_sq += dd.c0.array().square() + dd.c1.array().square();
    }
  }
  const Eigen::ArrayXd value = magnitude(cart).array();
  const Eigen::ArrayXd first = first_sq.sqrt();
  const Eigen::ArrayXd second = second_sq.sqrt();

  const double w1inf = value.maxCoeff() + first.maxCoeff();
  const Eigen::ArrayXd& w = mesh.weights().array();
  const double w2p =
      std::pow((w * (value.pow(p) + first.pow(p) + second.pow(p))).sum(), 1.0 / p);
  return w1inf + w2p;
}

}  // namespace electroconvect
