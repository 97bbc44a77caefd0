#pragma once

#include <Eigen/Dense>
#include <complex>

#include "orbitalis/lie_algebra.hpp"
#include "orbitalis/orbital.hpp"

namespace orbitalis {

/// Heat kernel of e^{t Delta/2} on R^dim at points x, x'.
double euclidean_heat_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime, double t);

/// Heat kernel of e^{t Delta/2} on the hyperbolic plane (curvature -1) at
/// geodesic distance d, via McKean's integral with the endpoint singularity
/// removed by the substitution cosh s - cosh d = u^2.
double h2_heat_kernel(double d, double t, double rel_tol = 1e-11);

/// Geodesic distance on the upper half-plane.
double h2_distance(std::complex<double> z, std::complex<double> w);

/// Action of exp(f1 e1 + f2 e2 + f3 e3) in SL2 on the upper half-plane.
std::complex<double> sl2_point(const Eigen::Vector3d& coords, std::complex<double> base);

/// Displacement d(x_f, gamma x_f) computed by matrix exponentials and the
/// Moebius action; f parametrizes the normal directions of the minimizing set.
double displacement_sl2_hyperbolic(double a, double f);
double displacement_sl2_elliptic(double phi, const Eigen::Vector2d& f);

/// Normal-coordinate chart around the minimizing set of gamma on H^2, with
/// the volume density r(f) both in closed form and as a finite-difference
/// Jacobian oracle on the distance metric.
struct OrbitParametrization {
  SemisimpleElement gamma;

  double displacement(const Eigen::VectorXd& f) const;
  double jacobian(const Eigen::VectorXd& f) const;          // closed form
  double jacobian_numeric(const Eigen::VectorXd& f) const;  // FD oracle
};

struct IntegrationConfig {
  double rel_tol = 1e-9;
  double trunc = 1e-16;  // cut the orbit integral below this fraction of the peak
  int angle_nodes = 32;  // trapezoid nodes for the elliptic angle integral
};

/// Brute-force orbital integral of e^{t Delta/2} by direct integration of the
/// kernel over the normal directions. Supports abelian models and sl2 (H^2).
OrbitalIntegralResult direct_orbital_integral(const LieAlgebraModel& model,
                                              const SemisimpleElement& gamma, double t,
                                              const IntegrationConfig& config = {});

/// Identity orbital integral on H^2 via the quadrature form of the explicit
/// formula: (e^{-t/8}/2 pi t) \int e^{-y^2/2t} (y/2)/sinh(y/2) dy / sqrt(2 pi t).
double h2_identity_orbital_quadrature(double t);

}  // namespace orbitalis
