#include "orbitalis/validate.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "orbitalis/clifford.hpp"
#include "orbitalis/errors.hpp"
#include "orbitalis/heat_oracle.hpp"
#include "orbitalis/hypoelliptic.hpp"
#include "orbitalis/lie_algebra.hpp"
#include "orbitalis/orbital.hpp"
#include "orbitalis/quadrature.hpp"
#include "orbitalis/trace_zeta.hpp"

namespace orbitalis {

namespace {

void push(std::vector<CheckResult>& out, const std::string& name, double residual, double tol) {
  out.push_back({name, residual, tol, residual <= tol});
}

Eigen::MatrixXd random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = normal(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1.0;
  return Q;
}

}  // namespace

std::vector<CheckResult> run_validation_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  // ---- lie_core
  const LieAlgebraModel sl2 = build_sl2_model();
  const LieAlgebraModel line = build_abelian_model(1);
  const LieAlgebraModel flat3 = build_abelian_model(3);
  push(out, "lie/sl2_invariants", sl2.validation_residual(), 1e-12);
  push(out, "lie/abelian_invariants", std::max(line.validation_residual(),
                                               flat3.validation_residual()), 1e-12);
  {
    auto [tr_p, tr_k] = casimir_constants(sl2);
    push(out, "lie/sl2_casimir", std::abs(tr_p + 2.0) + std::abs(tr_k), 1e-13);
  }
  {
    // projector onto z(gamma) commutes with ad(a) and Ad(k); dim z0_perp even
    double res = 0.0;
    double evenness = 0.0;
    for (const SemisimpleElement& g :
         {sl2_hyperbolic(sl2, 1.0), sl2_elliptic(sl2, 2.0), identity_element(sl2)}) {
      const CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
      Eigen::MatrixXd z(3, dec.p + dec.q);
      z << dec.p_gamma, dec.k_gamma;
      const Eigen::MatrixXd proj = z * z.transpose();
      const Eigen::MatrixXd ada = sl2.ad(g.a_full(sl2));
      res = std::max(res, (proj * ada - ada * proj).cwiseAbs().maxCoeff());
      res = std::max(res, (proj * g.ad_k - g.ad_k * proj).cwiseAbs().maxCoeff());
      evenness += dec.z0_perp.cols() % 2;
    }
    push(out, "lie/centralizer_projection_commutes", res, 1e-10);
    push(out, "lie/z0_perp_even_dimension", evenness, 0.5);
  }

  // ---- orbital_formula
  {
    // closed-form consistency for hyperbolic sl2 (no quadrature, q = 0)
    double res = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
      const HeatParameters hp = geometric_heat_parameters(sl2, 1.0);
      const SemisimpleElement g = sl2_hyperbolic(sl2, a);
      const double v1 = heat_orbital_integral(sl2, g, hp).value;
      const double v2 = rank_one_closed_form(sl2, g, hp).value;
      const double v3 = sl2_hyperbolic_closed_form(a, 1.0, 0.125).value;
      res = std::max({res, std::abs(v1 - v2), std::abs(v1 - v3)});
    }
    push(out, "orbital/hyperbolic_method_consistency", res, 1e-12);
  }
  {
    // symmetry in a -> -a
    const HeatParameters hp = geometric_heat_parameters(sl2, 0.7);
    const double v1 = heat_orbital_integral(sl2, sl2_hyperbolic(sl2, 1.3), hp).value;
    const double v2 = heat_orbital_integral(sl2, sl2_hyperbolic(sl2, -1.3), hp).value;
    push(out, "orbital/a_sign_symmetry", std::abs(v1 - v2), 1e-14);
  }
  {
    // J(0) > 0 real, J(-Y) = conj(J(Y)), growth bound on a grid
    const SemisimpleElement g = sl2_elliptic(sl2, 2.0 * M_PI / 3.0);
    const CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
    Eigen::VectorXd y(1);
    y << 0.0;
    const std::complex<double> j0 = j_gamma(sl2, dec, g, y);
    double res = std::abs(j0.imag()) + (j0.real() > 0.0 ? 0.0 : 1.0);
    double log_peak = -1e300;
    for (double yv = 0.25; yv <= 20.0; yv += 0.25) {
      y << yv;
      const std::complex<double> jp = j_gamma(sl2, dec, g, y);
      y << -yv;
      const std::complex<double> jm = j_gamma(sl2, dec, g, y);
      res = std::max(res, std::abs(jp - std::conj(jm)));
      log_peak = std::max(log_peak, (std::log(std::abs(jp)) - std::log(std::abs(j0))) / yv);
    }
    push(out, "orbital/j_conjugate_symmetry_and_positivity", res, 1e-12);
    // exponential growth bound: fitted constant must be finite
    push(out, "orbital/j_growth_bound", std::isfinite(log_peak) ? 0.0 : 1.0, 0.5);
  }
  {
    // flat-model Gaussian scaling law t -> alpha t, a -> sqrt(alpha) a, A -> A/alpha
    const double alpha = 2.3;
    Eigen::VectorXd a(1);
    a << 1.1;
    const double base =
        heat_orbital_integral(line, abelian_translation(line, a),
                              scalar_heat_parameters(1.0, 0.2)).value;
    a << 1.1 * std::sqrt(alpha);
    const double scaled =
        heat_orbital_integral(line, abelian_translation(line, a),
                              scalar_heat_parameters(alpha, 0.2 / alpha)).value;
    push(out, "orbital/gaussian_scaling_law", std::abs(scaled - base / std::sqrt(alpha)), 1e-14);
  }

  // ---- heat_oracle
  {
    double res = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      const double mass =
          integrate([&](double r) { return h2_heat_kernel(r, t) * 2.0 * M_PI * std::sinh(r); },
                    0.0, 60.0, 1e-11)
              .value;
      res = std::max(res, std::abs(mass - 1.0));
    }
    push(out, "oracle/h2_mass_conservation", res, 1e-8);
  }
  {
    double res = 0.0;
    for (double t : {0.5, 1.0, 2.0})
      res = std::max(res, std::abs(h2_heat_kernel(0.0, t) - h2_identity_orbital_quadrature(t)) /
                              h2_heat_kernel(0.0, t));
    push(out, "oracle/h2_diagonal_vs_identity_orbital", res, 1e-6);
  }
  {
    const double p = h2_heat_kernel(0.0, 1e-3);
    push(out, "oracle/h2_flat_limit", std::abs(2.0 * M_PI * 1e-3 * p - 1.0), 1e-2);
  }
  {
    // volume densities against the finite-difference metric oracle
    OrbitParametrization hyp{sl2_hyperbolic(sl2, 1.0)};
    OrbitParametrization ell{sl2_elliptic(sl2, 2.0)};
    double res = 0.0;
    for (double f : {0.0, 1.0, 2.0}) {
      Eigen::VectorXd fv(1);
      fv << f;
      res = std::max(res, std::abs(hyp.jacobian(fv) - hyp.jacobian_numeric(fv)));
      Eigen::VectorXd fe(2);
      fe << std::max(f, 0.2), 0.0;
      res = std::max(res, std::abs(ell.jacobian(fe) - ell.jacobian_numeric(fe)));
    }
    push(out, "oracle/volume_density_fd_gate", res, 1e-6);
  }
  {
    // displacement minimality and linear growth
    OrbitParametrization hyp{sl2_hyperbolic(sl2, 1.0)};
    double worst = 0.0;
    double growth = 1e300;
    for (double f = -6.0; f <= 6.0; f += 0.25) {
      Eigen::VectorXd fv(1);
      fv << f;
      const double d = hyp.displacement(fv);
      worst = std::max(worst, 1.0 - d);  // d >= |a| = 1
      if (std::abs(f) > 1.0) growth = std::min(growth, (d - 1.0) / std::abs(f));
    }
    push(out, "oracle/displacement_minimality", worst, 1e-12);
    push(out, "oracle/displacement_linear_growth", growth > 0.0 ? 0.0 : 1.0, 0.5);
  }
  {
    // oracle vs explicit formula, one pair of each kind
    const HeatParameters hp = geometric_heat_parameters(sl2, 1.0);
    const SemisimpleElement hyp = sl2_hyperbolic(sl2, 1.0);
    const double e1 = heat_orbital_integral(sl2, hyp, hp).value;
    const double o1 = direct_orbital_integral(sl2, hyp, 1.0).value;
    const SemisimpleElement ell = sl2_elliptic(sl2, M_PI / 2.0);
    const double e2 = heat_orbital_integral(sl2, ell, hp).value;
    const double o2 = direct_orbital_integral(sl2, ell, 1.0).value;
    push(out, "oracle/formula_agreement_hyperbolic", std::abs(e1 - o1) / std::abs(e1), 1e-6);
    push(out, "oracle/formula_agreement_elliptic", std::abs(e2 - o2) / std::abs(e2), 1e-4);
  }
  {
    // strict monotonicity of the oracle in |a|
    double prev = 1e300;
    double res = 0.0;
    for (double a : {0.5, 1.0, 1.5, 2.0}) {
      const double v = direct_orbital_integral(sl2, sl2_hyperbolic(sl2, a), 1.0).value;
      if (v >= prev) res = 1.0;
      prev = v;
    }
    push(out, "oracle/hyperbolic_monotonicity_in_a", res, 0.5);
  }

  // ---- clifford_dirac
  {
    const CliffordModel cl(sl2);
    push(out, "clifford/relations", cl.relations_residual(), 1e-13);
    std::vector<Eigen::MatrixXd> adjoint;
    for (int i = 0; i < 3; ++i) adjoint.push_back(sl2.ad_basis(i));
    push(out, "clifford/kostant_adjoint", kostant_dirac_residual(sl2, adjoint), 1e-11);
    std::vector<Eigen::MatrixXd> trivial(3, Eigen::MatrixXd::Zero(1, 1));
    push(out, "clifford/kostant_trivial", kostant_dirac_residual(sl2, trivial), 1e-11);
    // basis independence under a random rotation of the p-basis
    const Eigen::MatrixXd O = random_orthogonal(2, rng);
    const LieAlgebraModel rotated = rotate_p_basis(sl2, O);
    const auto rotated_rep = rotate_p_basis_rep(sl2, adjoint, O);
    // the adjoint rep of the rotated model acts on the rotated coordinates
    std::vector<Eigen::MatrixXd> rotated_adjoint;
    for (int i = 0; i < 3; ++i) rotated_adjoint.push_back(rotated.ad_basis(i));
    push(out, "clifford/kostant_basis_independence",
         std::abs(kostant_dirac_residual(rotated, rotated_adjoint) -
                  kostant_dirac_residual(sl2, adjoint)),
         1e-11);
    (void)rotated_rep;
    // supertrace of supercommutators vanishes
    const ExteriorAlgebra& ext = cl.exterior();
    const Eigen::MatrixXd tau = ext.parity();
    std::normal_distribution<double> normal(0.0, 1.0);
    double res = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      auto random_odd = [&]() {
        Eigen::VectorXd u(3), v(3);
        for (int i = 0; i < 3; ++i) {
          u[i] = normal(rng);
          v[i] = normal(rng);
        }
        return Eigen::MatrixXd(cl.c(u) + cl.chat(v));
      };
      const Eigen::MatrixXd A = random_odd() * random_odd();  // even element
      const Eigen::MatrixXd B = random_odd();
      // both arguments homogeneous: [A,B] = AB - (-1)^{deg A deg B} BA
      const Eigen::MatrixXd super_comm = A * B - B * A;
      res = std::max(res, std::abs((tau * super_comm).trace()));
      const Eigen::MatrixXd C = random_odd();
      const Eigen::MatrixXd odd_comm = B * C + C * B;
      res = std::max(res, std::abs((tau * odd_comm).trace()));
    }
    push(out, "clifford/supertrace_of_supercommutator", res, 1e-11);
    // chat(kappa) and Dhat are odd
    const Eigen::MatrixXd ck = cl.chat_kappa();
    push(out, "clifford/chat_kappa_odd", (tau * ck + ck * tau).cwiseAbs().maxCoeff(), 1e-13);
  }
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    double res = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      Eigen::MatrixXd u(d, d);
      do {
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) u(i, j) = normal(rng);
      } while (std::abs(u.determinant()) < 1e-3);
      const SupertraceIdentity id = lambda_supertrace_identity(u);
      res = std::max({res, std::abs(id.lhs - id.rhs), std::abs(id.lhs_n - id.rhs_n)});
    }
    push(out, "clifford/lambda_supertrace_identity", res, 1e-12);
  }
  {
    const WeitzenbockReport r1 = verify_weitzenbock(1, 6);
    const WeitzenbockReport r2 = verify_weitzenbock(2, 5);
    push(out, "clifford/weitzenbock_residual",
         std::max({r1.commutator_residual, r2.commutator_residual, r1.square_residual,
                   r2.square_residual, r1.adjoint_residual, r2.adjoint_residual}),
         1e-12);
    const double kernel_ok = (r1.kernel_dim == 1 && r2.kernel_dim == 1) ? 0.0 : 1.0;
    push(out, "clifford/weitzenbock_kernel_is_vacuum", kernel_ok, 0.5);
    push(out, "clifford/weitzenbock_gap",
         std::max(std::abs(r1.spectral_gap - 1.0), std::abs(r2.spectral_gap - 1.0)), 1e-10);
  }
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    double res = 0.0;
    for (int n : {1, 2}) {
      const int D = n == 1 ? 6 : 5;
      const auto basis = monomial_basis(n, D);
      Eigen::VectorXd coeff(static_cast<Eigen::Index>(basis.size()));
      for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff[i] = normal(rng);
      res = std::max(res, bargmann_roundtrip(n, D, coeff));
    }
    push(out, "clifford/bargmann_roundtrip", res, 1e-12);
  }

  // ---- hypoelliptic_model
  {
    double res = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.0})
      for (double t : {0.25, 1.0, 4.0})
        for (double b : {0.1, 0.3, 1.0, 3.0, 10.0}) {
          const double closed = std::exp(-a * a / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
          res = std::max(res, std::abs(hypo_supertrace(a, b, t) - closed));
        }
    push(out, "hypo/b_independence", res, 1e-8);
  }
  {
    double res = 0.0;
    for (double b : {0.5, 1.0, 2.0})
      for (double a : {0.0, 1.0}) {
        const ModelKernel k = model_kernel(b, 1.0);
        const double lhs = k.diagonal_integral(a);
        const double rhs = oscillator_trace(b, 1.0) * std::exp(-a * a / 2.0) /
                           std::sqrt(2.0 * M_PI);
        res = std::max(res, std::abs(lhs - rhs));
      }
    push(out, "hypo/factorization_identity", res, 1e-9);
  }
  {
    double res = 0.0;
    for (double tau_scale : {0.5, 1.0, 2.0})
      res = std::max(res, std::abs(oscillator_trace(1.0, tau_scale) -
                                   oscillator_trace_series(1.0, tau_scale)));
    push(out, "hypo/oscillator_series_crosscheck", res, 1e-12);
  }
  {
    // Chapman-Kolmogorov at sampled points by 2-D quadrature over (x'', y'')
    const double b = 0.8;
    const ModelKernel k1 = model_kernel(b, 0.4);
    const ModelKernel k2 = model_kernel(b, 0.7);
    const ModelKernel k12 = model_kernel(b, 1.1);
    double res = 0.0;
    for (const auto& pt : {std::array<double, 4>{0.0, 0.2, 0.5, -0.3},
                           std::array<double, 4>{0.0, -0.6, 1.0, 0.4}}) {
      auto inner = [&](double xm, double ym) {
        return k1(pt[0], pt[1], xm, ym) * k2(xm, ym, pt[2], pt[3]);
      };
      auto over_y = [&](double xm) {
        return integrate([&](double ym) { return inner(xm, ym); }, -9.0, 9.0, 1e-10).value;
      };
      const double composed = integrate(over_y, -9.0, 9.0, 1e-10).value;
      res = std::max(res, std::abs(composed - k12(pt[0], pt[1], pt[2], pt[3])));
    }
    push(out, "hypo/chapman_kolmogorov", res, 1e-9);
  }
  {
    // the profile sharpens with b: second moment at b=10 below the b=1 value
    const LocalizationProfile coarse = localization_profile(1.0, 1.0, 1.0);
    const LocalizationProfile sharp = localization_profile(1.0, 10.0, 1.0);
    push(out, "hypo/localization_moment_monotone",
         sharp.second_moment < coarse.second_moment ? 0.0 : 1.0, 0.5);
  }

  // ---- trace_zeta
  {
    double res = 0.0;
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
      auto [s, g] = poisson_both_sides(t);
      res = std::max(res, std::abs(s - g));
    }
    push(out, "zeta/poisson_two_sided", res, 1e-12);
  }
  {
    double res = 0.0;
    for (double t : {0.25, 1.0, 4.0}) res = std::max(res, plancherel_identity_residual(t));
    push(out, "zeta/plancherel_identity", res, 1e-8);
  }
  {
    double res = 0.0;
    for (double t : {0.05, 0.2, 1.0}) {
      auto [s, g] = poisson_both_sides(t);
      (void)s;
      res = std::max(res, std::abs(selberg_circle(t) - g));
    }
    push(out, "zeta/selberg_circle_matches_poisson", res, 1e-14);
  }
  {
    double res = 0.0;
    for (double theta : {M_PI / 3.0, 1.0, M_PI, 2.5}) {
      const FriedCheck f = fried_check_circle(theta);
      res = std::max(res, f.residual);
    }
    push(out, "zeta/fried_identity_circle", res, 1e-10);
  }
  {
    double res = 0.0;
    for (double theta : {M_PI / 3.0, 1.0, M_PI, 2.5}) {
      const double exact = 2.0 * std::log(2.0 * std::abs(std::sin(theta / 2.0)));
      res = std::max(res, std::abs(circle_log_det_oracle(theta) - exact));
    }
    push(out, "zeta/hurwitz_derivative_oracle", res, 1e-10);
  }
  {
    LengthSpectrum spec;
    spec.entries.push_back({1.0, 1, {1, 1}, 1, {}});
    spec.entries.push_back({1.3, 1, {1, 1}, 1, {}});
    push(out, "zeta/euler_product", euler_product_check(spec, {2.5, 0.0}), 1e-10);
  }
  {
    // surface trace decreasing in t on a sampled grid
    LengthSpectrum spec;
    spec.entries.push_back({2.0, 1, {1, 1}, 1, {}});
    double prev = 1e300;
    double res = 0.0;
    for (double t = 0.1; t <= 10.0; t *= 1.6) {
      const double v = surface_heat_trace(4.0 * M_PI, spec, t);
      if (v >= prev) res = 1.0;
      prev = v;
    }
    push(out, "zeta/surface_trace_monotone_decreasing", res, 0.5);
  }

  return out;
}

}  // namespace orbitalis
