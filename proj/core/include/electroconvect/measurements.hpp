#pragma once

#include "electroconvect/dynamics.hpp"
#include "electroconvect/spectral_ops.hpp"
#include "electroconvect/stokes.hpp"

#include <cstdint>
#include <vector>

namespace electroconvect {

/// Random fields drawn from the low end of a basis: coefficient j of the first
/// `modes` is N(0,1) / (1 + j), the rest are zero.
Eigen::VectorXd random_span_coeffs(Eigen::Index size, Eigen::Index modes, std::uint64_t seed);

/// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

/// Smallest slope between consecutive (h, err) pairs.
double min_pairwise_order(const std::vector<double>& h, const std::vector<double>& err);

struct SampleStats {
  std::vector<double> values;
  double max() const;
  double mean() const;
};

/// ||P_n [u.grad, Lambda] f||_{1/2,D} / (||u||_B ||f||_{3/2,D}) over random u
/// (first `u_modes` Stokes modes) and f (first `f_modes` Dirichlet modes).
SampleStats commutator_ratios(const GalerkinBases& bases, int samples, std::uint64_t seed, int u_modes = 10,
                              int f_modes = 10);

/// ||f||_{L^4} / ||f||_{1/2,D} over random span fields.
SampleStats lfour_ratios(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, int samples,
                         std::uint64_t seed, int modes = 10);

/// Ratios of the left to the right side of the 2D velocity inequalities:
///   ulfour   ||u||_{L^4} / (||u||^{1/2} ||grad u||^{1/2})
///   naulfour ||grad u||_{L^4} / (||grad u||^{1/2} ||Au||^{1/2})
///   buuau    ||P_m B(u,u)|| / (||u||^{1/2} ||grad u|| ||Au||^{1/2})
///   abuu     ||A^{1/2} P_m B(u,u)|| / (||u||^{1/2} ||Au||^{3/2} + ||grad u|| ||Au||)
/// with ||grad u||^2 = sum lambda_j a_j^2 and ||Au||^2 = sum lambda_j^2 a_j^2.
struct StokesInequalityStats {
  SampleStats ulfour, naulfour, buuau, abuu;
};

StokesInequalityStats stokes_inequality_ratios(const StokesBasis& basis, int samples, std::uint64_t seed,
                                               int modes = 10);

/// Negative part of a defect field relative to
/// scale = ||defect||_inf + ||Lambda f||_inf^2 h.
struct CordobaMeasure {
  double min_defect = 0.0;
  double scale = 0.0;
  double tau = 0.0;
};

CordobaMeasure cordoba_measure(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh,
                               const ScalarField& f, const ConvexFunction& phi, double s);

/// Largest tau over random span fields, Phi in {f^2, f^4}, s in {1/2, 1, 3/2}.
double cordoba_tolerance(const std::shared_ptr<const EigenBasis>& basis, const Mesh& mesh, int samples,
                         std::uint64_t seed, int modes = 10);

/// tau_p = max_k (N_k - min_{j<k} N_j)_+ / N_0 for the charge L^p norms of a
/// trajectory, p in {1, 2, 4, inf}.
struct MaxPrincipleTolerances {
  double l1 = 0.0, l2 = 0.0, l4 = 0.0, linf = 0.0;
};

MaxPrincipleTolerances max_principle_tolerances(const std::vector<DiagnosticsRecord>& records);

/// One-sided second-order estimate of -d/dz Phi_2 at z = 0+ against q.
struct JumpConvergence {
  std::vector<double> dz;
  std::vector<double> errors;
  double order = 0.0;
};

JumpConvergence jump_condition(const SpectralField& q, const std::vector<double>& dz);

}  // namespace electroconvect
