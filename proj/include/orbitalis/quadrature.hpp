#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace orbitalis {

/// Nodes and weights for \int f(u) e^{-u^2} du on the real line.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Golub-Welsch on the Hermite Jacobi matrix. Nodes are symmetric about 0.
GaussHermiteRule gauss_hermite(int n);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 15(7) on [a, b]: the panel with the worst
/// error estimate is split until the tolerance or the evaluation budget is
/// reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 1e-300,
                           int budget = 400000);

/// Same, starting from caller-supplied panel breakpoints (for integrands
/// whose scale varies over decades).
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& breakpoints, double rel_tol = 1e-12,
                                  double abs_tol = 1e-300, int budget = 400000);

/// Integral over the whole line of an integrand with fast decay: expands
/// symmetric windows until the added mass is negligible.
QuadratureResult integrate_line(const std::function<double(double)>& f, double initial_half_width,
                                double rel_tol = 1e-12);

/// Trapezoid rule for a smooth periodic integrand on [0, period); spectrally
/// accurate. Deterministic pairwise summation.
double integrate_periodic(const std::function<double(double)>& f, double period, int n);

/// Pairwise (cascade) summation; order-independent up to rounding.
double pairwise_sum(std::vector<double>& terms);

}  // namespace orbitalis
