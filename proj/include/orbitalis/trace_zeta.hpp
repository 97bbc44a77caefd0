#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "orbitalis/lie_algebra.hpp"
#include "orbitalis/orbital.hpp"

namespace orbitalis {

// ---------------------------------------------------------------------------
// special functions

/// Hurwitz zeta and its s-derivative by Euler-Maclaurin; valid near s = 0
/// (and generally for s away from 1), a > 0.
double hurwitz_zeta(double s, double a);
double hurwitz_zeta_ds(double s, double a);

// ---------------------------------------------------------------------------
// length spectra

struct LengthSpectrumEntry {
  double length = 1.0;
  int multiplicity = 1;
  std::pair<long, long> chi_orb{1, 1};  // rational chi_orb as num/den
  int n_mult = 1;                       // generic multiplicity of the primitive class
  std::vector<std::complex<double>> holonomy_traces;  // tr rho(gamma^k), k = 1..K
};

struct LengthSpectrum {
  std::vector<LengthSpectrumEntry> entries;
  int dim_rho = 1;

  void validate() const;  // sorted lengths, multiplicities >= 1, |tr| <= dim
};

LengthSpectrum load_length_spectrum_json(const std::string& path);

// ---------------------------------------------------------------------------
// trace formulas

/// Spectral and geometric sides of the circle trace identity (unit length);
/// both sums truncated at relative tail 1e-18 with a hard term cap.
std::pair<double, double> poisson_both_sides(double t);

/// |(1/t) integral of the identity density - (1/2) integral of rho tanh(pi rho)|,
/// the two sides evaluated by independent adaptive quadratures.
double plancherel_identity_residual(double t);
/// The two sides themselves (density side, principal-series side).
std::pair<double, double> plancherel_both_sides(double t);

/// Hyperbolic-surface heat trace assembled from a length spectrum:
/// geodesic terms plus the identity (volume) term.
double surface_heat_trace(double vol, const LengthSpectrum& spectrum, double t,
                          int k_max = 1000);

struct ConjugacyClassDescriptor {
  double vol = 1.0;  // vol(Gamma cap Z(gamma) \ X(gamma))
  SemisimpleElement gamma;
};

/// Sum of vol * orbital integral over a finite list of classes.
double selberg_assemble(const LieAlgebraModel& model,
                        const std::vector<ConjugacyClassDescriptor>& classes,
                        const HeatParameters& params);

/// Circle trace (Gamma = Z acting on R) assembled through the orbital-integral
/// route; classes added until the relative tail falls below 1e-18.
double selberg_circle(double t);

// ---------------------------------------------------------------------------
// torsion and dynamical zeta

enum class TorsionMethod { hurwitz_exact, heat_mellin_approx };

struct TorsionResult {
  double log_t = 0.0;
  TorsionMethod method = TorsionMethod::hurwitz_exact;
  double error_estimate = 0.0;
};

/// Analytic torsion of the twisted de Rham complex on the unit circle with
/// holonomy e^{i theta}: log T = -log(2 |sin(theta/2)|), via Hurwitz zeta.
TorsionResult analytic_torsion_circle(double theta);

/// Independent oracle: zeta'(0) of the circle spectrum {(2 pi k + theta)^2}
/// computed numerically by the Euler-Maclaurin derivative route; returns
/// log det = -zeta'(0).
double circle_log_det_oracle(double theta);

/// Torsion from an explicit eigenvalue list (lambda, multiplicity) under the
/// circle weighting theta(s) = zeta_{Delta_0}(s): heat-Mellin split with the
/// quadrature refinement as the error estimate.
TorsionResult torsion_from_eigenvalues(const std::vector<std::pair<double, double>>& spectrum);

/// Weighted geodesic sum Xi_rho(sigma); classes are the (entry, power) pairs
/// with l_k = k l, factor chi_orb/(n k). Throws DivergentRegion at or below
/// the growth abscissa.
std::complex<double> ruelle_xi(const LengthSpectrum& spectrum, std::complex<double> sigma);
std::complex<double> ruelle_r(const LengthSpectrum& spectrum, std::complex<double> sigma);

/// |exp(Xi) - prod (1 - e^{-sigma l})^{-mult}| for trivial holonomy.
double euler_product_check(const LengthSpectrum& spectrum, std::complex<double> sigma);

/// Closed-form continuation of the circle zeta:
/// R(sigma) = 1/((1-e^{i theta - sigma})(1-e^{-i theta - sigma})).
std::complex<double> ruelle_circle_r(double theta, std::complex<double> sigma);

struct FriedCheck {
  double r_at_0 = 0.0;
  double t_squared = 0.0;
  double residual = 0.0;
};

/// Fried's identity R_rho(0) = T^2 on the circle.
FriedCheck fried_check_circle(double theta);

}  // namespace orbitalis
