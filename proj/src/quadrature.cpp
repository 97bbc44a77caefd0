#include "orbitalis/quadrature.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace orbitalis {

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = std::sqrt(k / 2.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

namespace {

// Gauss-Kronrod 15-point nodes on [-1,1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.integral = resk * h;
  p.error = std::abs((resk - resg) * h);
  return p;
}

QuadratureResult qag(const std::function<double(double)>& f, const std::vector<double>& breaks,
                     double rel_tol, double abs_tol, int budget) {
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double err = 0.0;
  int evals = 0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = gk15(f, breaks[i], breaks[i + 1]);
    evals += 15;
    total += p.integral;
    err += p.error;
    heap.push(p);
  }
  double frozen_error = 0.0;  // panels too narrow to split further
  while (!heap.empty()) {
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    if (evals >= budget) break;
    const Panel worst = heap.top();
    heap.pop();
    const double width = worst.b - worst.a;
    if (width < 1e-14 * (std::abs(worst.a) + std::abs(worst.b) + 1.0)) {
      frozen_error += worst.error;
      err -= worst.error;  // unsplittable; keep its estimate out of the loop test
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    evals += 30;
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  QuadratureResult out;
  out.value = total;
  out.abs_error = err + frozen_error;
  out.evaluations = evals;
  return out;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int budget) {
  // start from a few uniform panels so narrow features are not missed by a
  // single coarse rule over a wide interval
  const int initial = 8;
  std::vector<double> breaks(initial + 1);
  for (int i = 0; i <= initial; ++i) breaks[static_cast<size_t>(i)] = a + (b - a) * i / initial;
  return qag(f, breaks, rel_tol, abs_tol, budget);
}

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& breakpoints, double rel_tol,
                                  double abs_tol, int budget) {
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least two breakpoints");
  return qag(f, breakpoints, rel_tol, abs_tol, budget);
}

QuadratureResult integrate_line(const std::function<double(double)>& f, double initial_half_width,
                                double rel_tol) {
  double w = std::max(initial_half_width, 1.0);
  QuadratureResult total = integrate(f, -w, w, rel_tol);
  // grow the window until the shell contribution is negligible
  for (int k = 0; k < 60; ++k) {
    QuadratureResult left = integrate(f, -2.0 * w, -w, rel_tol);
    QuadratureResult right = integrate(f, w, 2.0 * w, rel_tol);
    const double shell = left.value + right.value;
    total.value += shell;
    total.abs_error += left.abs_error + right.abs_error;
    total.evaluations += left.evaluations + right.evaluations;
    w *= 2.0;
    if (std::abs(shell) <= std::max(1e-300, rel_tol * std::abs(total.value))) break;
  }
  return total;
}

double integrate_periodic(const std::function<double(double)>& f, double period, int n) {
  std::vector<double> terms(static_cast<size_t>(n));
  const double h = period / n;
  for (int j = 0; j < n; ++j) terms[static_cast<size_t>(j)] = f(j * h);
  return pairwise_sum(terms) * h;
}

double pairwise_sum(std::vector<double>& terms) {
  if (terms.empty()) return 0.0;
  size_t n = terms.size();
  while (n > 1) {
    const size_t half = n / 2;
    for (size_t i = 0; i < half; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (n % 2 == 1) {
      terms[half] = terms[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return terms[0];
}

}  // namespace orbitalis
