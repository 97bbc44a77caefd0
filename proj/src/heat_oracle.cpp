#include "orbitalis/heat_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "orbitalis/errors.hpp"
#include "orbitalis/quadrature.hpp"

namespace orbitalis {

namespace {

// arccosh(1 + w) for w >= 0 without cancellation near w = 0
double acosh1p(double w) {
  if (w <= 0.0) return 0.0;
  return std::log1p(w + std::sqrt(w * (w + 2.0)));
}

double x_over_sinh(double x) {
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return 1.0 / (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return x / std::sinh(x);
}

Eigen::Matrix2d sl2_matrix(const Eigen::Vector3d& coords) {
  Eigen::Matrix2d M;
  M << 0.5 * coords[0], 0.5 * (coords[1] + coords[2]),
       0.5 * (coords[1] - coords[2]), -0.5 * coords[0];
  return M;
}

std::complex<double> moebius(const Eigen::Matrix2d& g, std::complex<double> z) {
  return (g(0, 0) * z + g(0, 1)) / (g(1, 0) * z + g(1, 1));
}

}  // namespace

double euclidean_heat_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime, double t) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  const int dim = static_cast<int>(x.size());
  return std::pow(2.0 * M_PI * t, -0.5 * dim) *
         std::exp(-(x - x_prime).squaredNorm() / (2.0 * t));
}

double h2_heat_kernel(double d, double t, double rel_tol) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  if (d < 0.0) throw PreconditionFailed("distance must be nonnegative");
  const double tau = 0.5 * t;  // e^{t Delta/2} = e^{tau Delta}
  const double w0 = 2.0 * std::pow(std::sinh(0.5 * d), 2);  // cosh d - 1
  // cut where s e^{-s^2/4 tau} is below 1e-26 of its scale
  const double s_max = d + std::sqrt(4.0 * tau * 80.0);
  const double u_max = std::sqrt(std::max(std::cosh(s_max) - (1.0 + w0), 1.0));
  auto f = [&](double u) {
    const double W = w0 + u * u;
    const double s = acosh1p(W);
    const double sinh_s = std::sqrt(W * (W + 2.0));
    if (sinh_s == 0.0) return 2.0 * std::exp(-s * s / (4.0 * tau));  // s -> 0 limit of 2 s/sinh s
    return 2.0 * s * std::exp(-s * s / (4.0 * tau)) / sinh_s;
  };
  // geometric panels: the substitution stretches the s-tail over decades of u
  std::vector<double> breaks{0.0};
  for (double edge = std::min(0.5, u_max * 0.5); edge < u_max; edge *= 2.0) breaks.push_back(edge);
  breaks.push_back(u_max);
  const QuadratureResult q = integrate_panels(f, breaks, rel_tol);
  const double scale = std::sqrt(2.0) * std::exp(-tau / 4.0) * std::pow(4.0 * M_PI * tau, -1.5);
  if (q.abs_error > 1e-8 * std::max(std::abs(q.value), 1e-30))
    throw QuadratureNotConverged("hyperbolic kernel quadrature did not converge");
  return scale * q.value;
}

double h2_distance(std::complex<double> z, std::complex<double> w) {
  const double num = std::norm(z - w);
  return acosh1p(num / (2.0 * z.imag() * w.imag()));
}

std::complex<double> sl2_point(const Eigen::Vector3d& coords, std::complex<double> base) {
  const Eigen::Matrix2d M = sl2_matrix(coords).exp();
  return moebius(M, base);
}

double displacement_sl2_hyperbolic(double a, double f) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> z = sl2_point({0.0, f, 0.0}, i);
  const Eigen::Matrix2d g = sl2_matrix({a, 0.0, 0.0}).exp();
  return h2_distance(z, moebius(g, z));
}

double displacement_sl2_elliptic(double phi, const Eigen::Vector2d& f) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> z = sl2_point({f[0], f[1], 0.0}, i);
  const Eigen::Matrix2d g = sl2_matrix({0.0, 0.0, phi}).exp().inverse();
  return h2_distance(z, moebius(g, z));
}

namespace {

// rotation angle of the holonomy block of ad_k on p
double elliptic_angle(const SemisimpleElement& gamma) {
  return std::atan2(-gamma.ad_k(0, 1), gamma.ad_k(0, 0));
}

std::complex<double> chart_point_hyperbolic(double y, double f) {
  const std::complex<double> i(0.0, 1.0);
  const Eigen::Matrix2d My = sl2_matrix({y, 0.0, 0.0}).exp();
  const Eigen::Matrix2d Mf = sl2_matrix({0.0, f, 0.0}).exp();
  return moebius(My * Mf, i);
}

}  // namespace

double OrbitParametrization::displacement(const Eigen::VectorXd& f) const {
  switch (gamma.kind) {
    case ElementKind::hyperbolic:
      return displacement_sl2_hyperbolic(gamma.a[0], f[0]);
    case ElementKind::elliptic:
      return displacement_sl2_elliptic(elliptic_angle(gamma), Eigen::Vector2d(f[0], f[1]));
    default:
      throw UnsupportedModel("displacement implemented for hyperbolic and elliptic sl2");
  }
}

double OrbitParametrization::jacobian(const Eigen::VectorXd& f) const {
  switch (gamma.kind) {
    case ElementKind::hyperbolic:
      return std::cosh(f[0]);
    case ElementKind::elliptic: {
      const double r = f.norm();
      return r < 1e-8 ? 1.0 + r * r / 6.0 : std::sinh(r) / r;
    }
    default:
      throw UnsupportedModel("jacobian implemented for hyperbolic and elliptic sl2");
  }
}

double OrbitParametrization::jacobian_numeric(const Eigen::VectorXd& f) const {
  const double delta = 1e-4;
  if (gamma.kind == ElementKind::hyperbolic) {
    // chart (y, f) -> p(e^{y e1} e^{f e2}); density = sqrt(det G)
    const double y0 = 0.3;
    auto point = [&](double y, double fv) { return chart_point_hyperbolic(y, fv); };
    auto q = [&](double hy, double hf) {
      const std::complex<double> base = point(y0, f[0]);
      const double dp = h2_distance(base, point(y0 + hy, f[0] + hf));
      const double dm = h2_distance(base, point(y0 - hy, f[0] - hf));
      return 0.5 * (dp * dp + dm * dm);
    };
    const double gyy = q(delta, 0.0) / (delta * delta);
    const double gff = q(0.0, delta) / (delta * delta);
    const double gyf = (q(delta, delta) - q(delta, 0.0) - q(0.0, delta)) / (2.0 * delta * delta);
    return std::sqrt(std::max(gyy * gff - gyf * gyf, 0.0));
  }
  if (gamma.kind == ElementKind::elliptic) {
    const std::complex<double> i(0.0, 1.0);
    auto point = [&](const Eigen::Vector2d& v) { return sl2_point({v[0], v[1], 0.0}, i); };
    auto q = [&](const Eigen::Vector2d& h) {
      const std::complex<double> base = point(Eigen::Vector2d(f[0], f[1]));
      const double dp = h2_distance(base, point(Eigen::Vector2d(f[0], f[1]) + h));
      const double dm = h2_distance(base, point(Eigen::Vector2d(f[0], f[1]) - h));
      return 0.5 * (dp * dp + dm * dm);
    };
    const double g11 = q({delta, 0.0}) / (delta * delta);
    const double g22 = q({0.0, delta}) / (delta * delta);
    const double g12 = (q({delta, delta}) - q({delta, 0.0}) - q({0.0, delta})) /
                       (2.0 * delta * delta);
    return std::sqrt(std::max(g11 * g22 - g12 * g12, 0.0));
  }
  throw UnsupportedModel("numeric jacobian implemented for hyperbolic and elliptic sl2");
}

namespace {

// one-time gate: the closed-form densities must match the FD oracle
void ensure_jacobians_validated() {
  static const bool ok = [] {
    LieAlgebraModel sl2 = build_sl2_model();
    OrbitParametrization hyp{sl2_hyperbolic(sl2, 1.0)};
    for (double f : {0.0, 0.5, 1.0, 2.0}) {
      Eigen::VectorXd fv(1);
      fv << f;
      if (std::abs(hyp.jacobian(fv) - hyp.jacobian_numeric(fv)) > 1e-6)
        throw QuadratureNotConverged("hyperbolic volume density disagrees with FD oracle");
    }
    OrbitParametrization ell{sl2_elliptic(sl2, 2.0)};
    for (double r : {0.3, 1.0, 2.0}) {
      Eigen::VectorXd fv(2);
      fv << r, 0.0;
      if (std::abs(ell.jacobian(fv) - ell.jacobian_numeric(fv)) > 1e-6)
        throw QuadratureNotConverged("elliptic volume density disagrees with FD oracle");
    }
    return true;
  }();
  (void)ok;
}

OrbitalIntegralResult oracle_result(double value, double err, long nodes) {
  OrbitalIntegralResult out;
  out.method = Method::oracle;
  out.value = value;
  out.abs_error_estimate = err;
  out.nodes_used = nodes;
  return out;
}

OrbitalIntegralResult h2_hyperbolic_oracle(double a, double t, const IntegrationConfig& config) {
  ensure_jacobians_validated();
  auto integrand = [&](double f) {
    return h2_heat_kernel(displacement_sl2_hyperbolic(a, f), t) * std::cosh(f);
  };
  const double peak = integrand(0.0);
  double half = 2.0;
  while (integrand(half) > config.trunc * peak && half < 200.0) half += 1.0;
  const QuadratureResult q = integrate(integrand, -half, half, config.rel_tol);
  if (q.abs_error > std::max(1e-7 * std::abs(q.value), 1e-14))
    throw QuadratureNotConverged("hyperbolic orbit integral did not converge");
  return oracle_result(q.value, q.abs_error, q.evaluations);
}

OrbitalIntegralResult h2_elliptic_oracle(const SemisimpleElement& gamma, double t,
                                         const IntegrationConfig& config) {
  ensure_jacobians_validated();
  const double phi = elliptic_angle(gamma);
  OrbitParametrization par{gamma};
  long nodes = 0;
  auto radial = [&](double r) {
    if (r == 0.0) r = 1e-12;
    auto along_angle = [&](double theta) {
      const Eigen::Vector2d f(r * std::cos(theta), r * std::sin(theta));
      return h2_heat_kernel(displacement_sl2_elliptic(phi, f), t);
    };
    nodes += config.angle_nodes;
    // angle integral first; smooth periodic integrand, trapezoid is spectral
    const double ang = integrate_periodic(along_angle, 2.0 * M_PI, config.angle_nodes);
    Eigen::VectorXd fv(2);
    fv << r, 0.0;
    return ang * par.jacobian(fv) * r;  // df = r dr dtheta
  };
  const double peak = radial(1e-3) / 1e-3;
  double rmax = 2.0;
  while (radial(rmax) / rmax > config.trunc * peak && rmax < 200.0) rmax += 1.0;
  const QuadratureResult q = integrate(radial, 0.0, rmax, config.rel_tol);
  if (q.abs_error > std::max(1e-5 * std::abs(q.value), 1e-14))
    throw QuadratureNotConverged("elliptic orbit integral did not converge");
  return oracle_result(q.value, q.abs_error, nodes);
}

}  // namespace

OrbitalIntegralResult direct_orbital_integral(const LieAlgebraModel& model,
                                              const SemisimpleElement& gamma, double t,
                                              const IntegrationConfig& config) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  if (model.dim_k() == 0) {
    // flat model: the orbit is a point, the integral is a kernel evaluation
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dim_p());
    return oracle_result(euclidean_heat_kernel(zero, gamma.a, t), 0.0, 1);
  }
  if (model.dim_p() == 2 && model.dim_k() == 1) {
    // the closed-form kernel assumes Gaussian curvature -1, which pins the
    // bracket normalization
    auto [tr_p, tr_k] = casimir_constants(model);
    if (std::abs(tr_p + 2.0) > 1e-12 || std::abs(tr_k) > 1e-12)
      throw UnsupportedModel("hyperbolic-plane oracle requires the unit-curvature normalization");
    switch (gamma.kind) {
      case ElementKind::identity:
        return oracle_result(h2_heat_kernel(0.0, t), 0.0, 1);
      case ElementKind::hyperbolic:
        return h2_hyperbolic_oracle(gamma.a[0], t, config);
      case ElementKind::elliptic:
        return h2_elliptic_oracle(gamma, t, config);
      default:
        throw UnsupportedModel("mixed sl2 elements are not reachable on H^2");
    }
  }
  throw UnsupportedModel("orbit oracle supports abelian models and sl2 only");
}

double h2_identity_orbital_quadrature(double t) {
  auto f = [&](double y) { return std::exp(-y * y / (2.0 * t)) * x_over_sinh(0.5 * y); };
  const QuadratureResult q = integrate_line(f, 4.0 * std::sqrt(t) + 8.0, 1e-12);
  return std::exp(-t / 8.0) / (2.0 * M_PI * t) * q.value / std::sqrt(2.0 * M_PI * t);
}

}  // namespace orbitalis
