#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "orbitalis/lie_algebra.hpp"

namespace orbitalis {

/// Unitary K-representation data for the coefficient bundle: rho(k^{-1}),
/// rho on each k-basis vector (extended by linearity), and the K-invariant
/// self-adjoint shift acting on E.
struct RepresentationE {
  int dim = 1;
  Eigen::MatrixXcd rho_k_inv;
  std::vector<Eigen::MatrixXcd> rho_k_basis;  // one matrix per k-basis vector
  Eigen::MatrixXcd shift;                     // the endomorphism A

  /// Trivial one-dimensional representation with scalar shift.
  static RepresentationE trivial(double shift_value);

  /// rho^E(Y) for Y given by its k-block coordinates.
  Eigen::MatrixXcd rho_of(const Eigen::VectorXd& y_k_coords) const;

  double validation_residual() const;
  void validate(double tol = 1e-10) const;
};

struct HeatParameters {
  double t = 1.0;
  RepresentationE rep;
};

/// Heat parameters for the scalar bundle with shift chosen so that the
/// operator is exactly the geometric heat semigroup e^{t Delta/2}:
/// A = -(1/16) tr^p[C^{k,p}] - (1/48) tr^k[C^{k,k}].
HeatParameters geometric_heat_parameters(const LieAlgebraModel& model, double t);
HeatParameters scalar_heat_parameters(double t, double shift);

enum class Method { explicit_formula, rank_one, closed_sl2, oracle };
const char* method_name(Method m);

struct OrbitalIntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  Method method = Method::explicit_formula;
  long nodes_used = 0;
};

struct QuadratureConfig {
  int nodes = 64;     // Gauss-Hermite nodes per axis; refinement doubles this
  double tol = 1e-9;  // relative tolerance for the refinement error estimate
};

/// A-hat function of a paired spectrum: product over pairs {+l,-l} of
/// (l/2)/sinh(l/2); zeros contribute 1. Throws UnpairedSpectrum when the
/// multiset cannot be grouped into +- pairs and zeros.
double a_hat(std::vector<double> eigenvalues, double pair_tol = 1e-9);

/// A-hat of i ad(Y) restricted to the span of an orthonormal basis.
double a_hat_of_ad(const LieAlgebraModel& model, const Eigen::VectorXd& y_full,
                   const Eigen::MatrixXd& basis);

/// The square-root density on k(gamma). Analytic branch, positive at Y = 0;
/// complex in general with J(-Y) = conj(J(Y)) for rotation-type holonomy.
std::complex<double> j_gamma(const LieAlgebraModel& model, const CentralizerDecomposition& dec,
                             const SemisimpleElement& gamma, const Eigen::VectorXd& y_coords);

/// Explicit heat orbital integral: Gaussian integral of J_gamma against the
/// representation trace over k(gamma), by Gauss-Hermite quadrature.
OrbitalIntegralResult heat_orbital_integral(const LieAlgebraModel& model,
                                            const SemisimpleElement& gamma,
                                            const HeatParameters& params,
                                            const QuadratureConfig& quad = {});

/// Closed form for nonelliptic gamma with [k(gamma), p_0] = 0 (real rank one).
OrbitalIntegralResult rank_one_closed_form(const LieAlgebraModel& model,
                                           const SemisimpleElement& gamma,
                                           const HeatParameters& params);

/// Hyperbolic sl2 closed form with scalar shift.
OrbitalIntegralResult sl2_hyperbolic_closed_form(double a, double t, double shift);

}  // namespace orbitalis
