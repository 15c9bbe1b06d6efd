#include "electroconvect/measurements.hpp"

#include "electroconvect/error.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>

namespace electroconvect {

namespace {

double lp_of_magnitude(const Mesh& mesh, const Eigen::ArrayXd& magnitude, double p) {
  return std::pow((mesh.weights().array() * magnitude.pow(p)).sum(), 1.0 / p);
}

// Pointwise Frobenius norm of the Cartesian velocity gradient.
Eigen::ArrayXd gradient_magnitude(const Mesh& mesh, const VectorField& u) {
  const VectorField cart = to_cartesian(mesh, u);
  Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(mesh.size());
  for (const Eigen::VectorXd* comp : {&cart.c0, &cart.c1}) {
    const VectorField g = cartesian_gradient(mesh, *comp, BoundaryTreatment::dirichlet);
    sq += g.c0.array().square() + g.c1.array().square();
  }
  return sq.sqrt();
}

}  // namespace

Eigen::VectorXd random_span_coeffs(Eigen::Index size, Eigen::Index modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(size);
  for (Eigen::Index j = 0; j < std::min(size, modes); ++j) c[j] = normal(rng) / (1.0 + static_cast<double>(j));
  return c;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw InvalidArgument("fitted_order needs two or more matching points");
  const auto n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double min_pairwise_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw InvalidArgument("min_pairwise_order needs two or more points");
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < h.size(); ++i)
    lowest = std::min(lowest, std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]));
  return lowest;
}

double SampleStats::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double SampleStats::mean() const {
  return values.empty() ? 0.0 : std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

SampleStats commutator_ratios(const GalerkinBases& bases, int samples, std::uint64_t seed, int u_modes,
                              int f_modes) {
  bases.check();
  const Mesh& mesh = *bases.mesh;
  SampleStats out;
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t base = seed + 2 * static_cast<std::uint64_t>(k);
    const VectorField u = bases.velocity->reconstruct(random_span_coeffs(bases.velocity->size(), u_modes, base));
    const SpectralField f{bases.charge, random_span_coeffs(bases.charge->size(), f_modes, base + 1)};
    const ScalarField c = commutator(bases.charge, mesh, u, from_coeffs(f));
    const double numerator = dnorm(to_coeffs(bases.charge, c), 0.5);
    out.values.push_back(numerator / (b_norm_proxy(mesh, u) * dnorm(f, 1.5)));
  }
  return out;
}

SampleStats lfour_ratios(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, int samples,
                         std::uint64_t seed, int modes) {
  SampleStats out;
  for (int k = 0; k < samples; ++k) {
    const SpectralField f{basis, random_span_coeffs(basis->size(), modes, seed + static_cast<std::uint64_t>(k))};
    out.values.push_back(lp_norm(mesh, from_coeffs(f), 4.0) / dnorm(f, 0.5));
  }
  return out;
}

StokesInequalityStats stokes_inequality_ratios(const StokesBasis& basis, int samples, std::uint64_t seed,
                                               int modes) {
  const Mesh& mesh = basis.mesh();
  const Eigen::VectorXd& lam = basis.values();
  StokesInequalityStats out;
  for (int k = 0; k < samples; ++k) {
    const VelocityCoeffs a = random_span_coeffs(basis.size(), modes, seed + static_cast<std::uint64_t>(k));
    const VectorField u = basis.reconstruct(a);
    const double u_h = a.norm();
    const double grad = std::sqrt(a.cwiseProduct(a).dot(lam));
    const double au = a.cwiseProduct(lam).norm();
    const VelocityCoeffs b = nonlinear_term(basis, a);

    out.ulfour.values.push_back(lp_of_magnitude(mesh, magnitude(u).array(), 4.0) / std::sqrt(u_h * grad));
    out.naulfour.values.push_back(lp_of_magnitude(mesh, gradient_magnitude(mesh, u), 4.0) / std::sqrt(grad * au));
    out.buuau.values.push_back(b.norm() / (std::sqrt(u_h) * grad * std::sqrt(au)));
    out.abuu.values.push_back(std::sqrt(b.cwiseProduct(b).dot(lam)) /
                              (std::sqrt(u_h) * std::pow(au, 1.5) + grad * au));
  }
  return out;
}

CordobaMeasure cordoba_measure(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh,
                               const ScalarField& f, const ConvexFunction& phi, double s) {
  const ScalarField defect = cordoba_defect(basis, f, phi, s);
  const ScalarField lambda_f = from_coeffs(apply_fractional(to_coeffs(basis, f), s));
  CordobaMeasure m;
  m.min_defect = defect.minCoeff();
  const double lf = lambda_f.cwiseAbs().maxCoeff();
  m.scale = defect.cwiseAbs().maxCoeff() + lf * lf * mesh.min_spacing();
  m.tau = m.scale > 0.0 ? std::max(0.0, -m.min_defect) / m.scale : 0.0;
  return m;
}

double cordoba_tolerance(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, int samples,
                         std::uint64_t seed, int modes) {
  const ConvexFunction phis[] = {ConvexFunction::square(), ConvexFunction::even_power(4)};
  double tau = 0.0;
  for (int k = 0; k < samples; ++k) {
    const SpectralField f{basis, random_span_coeffs(basis->size(), modes, seed + static_cast<std::uint64_t>(k))};
    const ScalarField grid = from_coeffs(f);
    for (const auto& phi : phis)
      for (double s : {0.5, 1.0, 1.5}) tau = std::max(tau, cordoba_measure(basis, mesh, grid, phi, s).tau);
  }
  return tau;
}

MaxPrincipleTolerances max_principle_tolerances(const std::vector<DiagnosticsRecord>& records) {
  auto tolerance = [&](double DiagnosticsRecord::*norm) {
    if (records.empty() || records.front().*norm == 0.0) return 0.0;
    double running_min = records.front().*norm;
    double worst = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) {
      worst = std::max(worst, records[k].*norm - running_min);
      running_min = std::min(running_min, records[k].*norm);
    }
    return worst / records.front().*norm;
  };
  return {tolerance(&DiagnosticsRecord::q_L1), tolerance(&DiagnosticsRecord::q_L2),
          tolerance(&DiagnosticsRecord::q_L4), tolerance(&DiagnosticsRecord::q_Linf)};
}

JumpConvergence jump_condition(const SpectralField& q, const std::vector<double>& dz) {
  JumpConvergence out;
  out.dz = dz;
  for (double step : dz) {
    if (!(step > 0.0)) throw InvalidArgument("jump_condition needs positive dz");
    const Eigen::VectorXd p0 = poisson_extension(q, 0.0).coeffs;
    const Eigen::VectorXd p1 = poisson_extension(q, step).coeffs;
    const Eigen::VectorXd p2 = poisson_extension(q, 2.0 * step).coeffs;
    const Eigen::VectorXd normal = -(-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * step);
    // Coefficient norm equals the weighted L^2 norm on the span.
    out.errors.push_back((normal - q.coeffs).norm());
  }
  if (dz.size() >= 2) out.order = min_pairwise_order(out.dz, out.errors);
  return out;
}

}  // namespace electroconvect
