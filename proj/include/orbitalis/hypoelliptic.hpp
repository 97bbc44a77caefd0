#pragma once

#include <Eigen/Dense>

namespace orbitalis {

/// Parameters of the 1-D Kolmogorov-type model operator
///   M_b = (1/2b^2)(-d^2/dy^2 + y^2 - 1) + (y/b) d/dx.
struct ModelOperator {
  double b = 1.0;
  double t = 1.0;
  double a = 0.0;  // translation length in x

  void validate() const;
};

/// Exact Gaussian kernel of e^{-t M_b}, stored as a quadratic form in
/// v = (x'-x, y, y') plus a log-normalization. Derivation: Fourier transform
/// in x turns M_b into a complex-shifted harmonic oscillator; Mehler's
/// formula and a Gaussian xi-integral give the closed form.
struct ModelKernel {
  double b = 1.0;
  double t = 1.0;
  Eigen::Matrix3d quad;   // exponent = -v^T quad v
  double log_norm = 0.0;

  double operator()(double x, double y, double x_prime, double y_prime) const;
  double log_value(double x, double y, double x_prime, double y_prime) const;

  /// Closed 1-D Gaussian integral of the kernel over {y' = y}, displaced by a:
  /// \int p((0,y),(a,y)) dy.
  double diagonal_integral(double a) const;

  /// Closed 2-D Gaussian integral \int p((0,y),(x',y')) dx' dy' (mass as seen
  /// from height y); equals the oscillator survival factor e^{tau/2 - ...}.
  double mass_from(double y) const;
};

ModelKernel model_kernel(double b, double t);

/// Hypoelliptic supertrace (1 - e^{-t/b^2}) \int p_{b,t}((0,Y),(a,Y)) dY.
/// Independent of b; equals e^{-a^2/2t}/sqrt(2 pi t).
double hypo_supertrace(double a, double b, double t);

/// Harmonic-oscillator trace 1/(1 - e^{-t/b^2}) for spectrum N.
double oscillator_trace(double b, double t);
/// Truncated eigenvalue sum with tail below 1e-14; errors out when the needed
/// number of terms exceeds the hard cap.
double oscillator_trace_series(double b, double t, long max_terms = 10000000);

struct LocalizationProfile {
  Eigen::VectorXd y;
  Eigen::VectorXd value;  // p_{b,t}((0,Y),(a,Y))
  double argmax = 0.0;
  double second_moment = 0.0;  // about the argmax, weighted by the profile
};

/// Diagonal-in-Y profile of the kernel for plotting and diagnostics. The
/// window is centered on the profile's own maximum (not asserted against any
/// predicted localization center) and spans +- sigmas standard deviations.
LocalizationProfile localization_profile(double a, double b, double t, int samples = 1001,
                                         double sigmas = 8.0);

}  // namespace orbitalis
