#include "orbitalis/hypoelliptic.hpp"

#include <cmath>

#include "orbitalis/errors.hpp"

namespace orbitalis {

namespace {

// tau/2 - tanh(tau/2), computed without cancellation for small tau
double alpha_gap(double tau) {
  const double u = 0.5 * tau;
  if (tau < 1e-2) {
    const double u2 = u * u;
    return u * u2 * (1.0 / 3.0 + u2 * (-2.0 / 15.0 + u2 * (17.0 / 315.0 - u2 * 62.0 / 2835.0)));
  }
  return u - std::tanh(u);
}

double log_sinh(double x) {  // log(sinh x), x > 0
  return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
}

}  // namespace

void ModelOperator::validate() const {
  if (b <= 0.0 || t <= 0.0) throw PreconditionFailed("model operator needs b > 0, t > 0");
}

ModelKernel model_kernel(double b, double t) {
  ModelOperator{b, t, 0.0}.validate();
  const double tau = t / (b * b);
  const double T1 = std::tanh(0.5 * tau);
  const double alpha = b * b * alpha_gap(tau);  // t/2 - b^2 tanh(tau/2) > 0
  const double S = std::sinh(tau);
  const double coth = 1.0 / std::tanh(tau);

  ModelKernel k;
  k.b = b;
  k.t = t;
  // exponent: -[(y^2+y'^2) cosh/(2 sinh) - y y'/sinh] - (dx + b(y+y')T1)^2/(4 alpha)
  Eigen::Matrix3d Q;
  const double q00 = 1.0 / (4.0 * alpha);
  const double q01 = b * T1 / (4.0 * alpha);
  const double q11 = 0.5 * coth + b * b * T1 * T1 / (4.0 * alpha);
  const double q12 = -0.5 / S + b * b * T1 * T1 / (4.0 * alpha);
  Q << q00, q01, q01,
       q01, q11, q12,
       q01, q12, q11;
  k.quad = Q;
  k.log_norm = 0.5 * tau - 0.5 * (std::log(2.0 * M_PI) + log_sinh(tau)) -
               0.5 * std::log(4.0 * M_PI * alpha);
  return k;
}

double ModelKernel::log_value(double x, double y, double x_prime, double y_prime) const {
  Eigen::Vector3d v(x_prime - x, y, y_prime);
  return log_norm - v.dot(quad * v);
}

double ModelKernel::operator()(double x, double y, double x_prime, double y_prime) const {
  return std::exp(log_value(x, y, x_prime, y_prime));
}

double ModelKernel::diagonal_integral(double a) const {
  // exponent in y on the diagonal: -(A y^2 + B y + C)
  const double A = quad(1, 1) + quad(2, 2) + 2.0 * quad(1, 2);
  const double B = 2.0 * (quad(0, 1) + quad(0, 2)) * a;
  const double C = quad(0, 0) * a * a;
  return std::exp(log_norm + B * B / (4.0 * A) - C) * std::sqrt(M_PI / A);
}

double ModelKernel::mass_from(double y) const {
  // integrate exp(-(v^T Q v)) over (dx, y') at fixed y
  Eigen::Matrix2d A;
  A << quad(0, 0), quad(0, 2),
       quad(0, 2), quad(2, 2);
  Eigen::Vector2d lin(2.0 * quad(0, 1) * y, 2.0 * quad(1, 2) * y);
  const double c0 = quad(1, 1) * y * y;
  const double quad_min = 0.25 * lin.dot(A.inverse() * lin);
  return std::exp(log_norm + quad_min - c0) * M_PI / std::sqrt(A.determinant());
}

double hypo_supertrace(double a, double b, double t) {
  const ModelKernel k = model_kernel(b, t);
  const double tau = t / (b * b);
  return -std::expm1(-tau) * k.diagonal_integral(a);
}

double oscillator_trace(double b, double t) {
  ModelOperator{b, t, 0.0}.validate();
  return 1.0 / (-std::expm1(-t / (b * b)));
}

double oscillator_trace_series(double b, double t, long max_terms) {
  ModelOperator{b, t, 0.0}.validate();
  const double tau = t / (b * b);
  double sum = 0.0;
  double term = 1.0;
  const double ratio = std::exp(-tau);
  for (long k = 0; k < max_terms; ++k) {
    sum += term;
    // geometric tail bound term*ratio/(1-ratio)
    if (term * ratio <= 1e-14 * sum * (1.0 - ratio)) return sum;
    term *= ratio;
  }
  throw QuadratureNotConverged("oscillator trace series hit the term cap");
}

LocalizationProfile localization_profile(double a, double b, double t, int samples,
                                         double sigmas) {
  const ModelKernel k = model_kernel(b, t);
  // the diagonal profile is a Gaussian in Y: exponent -(A Y^2 + B Y + C)
  const double A = k.quad(1, 1) + k.quad(2, 2) + 2.0 * k.quad(1, 2);
  const double B = 2.0 * (k.quad(0, 1) + k.quad(0, 2)) * a;
  const double center = -B / (2.0 * A);
  const double half_width = sigmas / std::sqrt(2.0 * A);
  LocalizationProfile prof;
  prof.y.resize(samples);
  prof.value.resize(samples);
  double best = -1.0;
  for (int i = 0; i < samples; ++i) {
    const double y = center - half_width + 2.0 * half_width * i / (samples - 1);
    prof.y[i] = y;
    prof.value[i] = k(0.0, y, a, y);
    if (prof.value[i] > best) {
      best = prof.value[i];
      prof.argmax = y;
    }
  }
  double mass = 0.0;
  double mom = 0.0;
  for (int i = 0; i < samples; ++i) {
    mass += prof.value[i];
    mom += prof.value[i] * (prof.y[i] - prof.argmax) * (prof.y[i] - prof.argmax);
  }
  prof.second_moment = mass > 0.0 ? mom / mass : 0.0;
  return prof;
}

}  // namespace orbitalis
