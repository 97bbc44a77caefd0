#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <random>
#include <algorithm>

#include "orbitalis/errors.hpp"
#include "orbitalis/lie_algebra.hpp"
#include "orbitalis/orbital.hpp"

using namespace orbitalis;
using cd = std::complex<double>;

namespace {

// plain Simpson rule, independent of the library quadrature
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("a_hat basics") {
  const double y0 = 1.7;
  CHECK(a_hat({y0, -y0}) == doctest::Approx((y0 / 2.0) / std::sinh(y0 / 2.0)).epsilon(1e-15));
  CHECK(a_hat({}) == 1.0);
  CHECK(a_hat({0.0, 0.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(a_hat({1.0, 2.0}), UnpairedSpectrum);
}

TEST_CASE("a_hat against the determinant oracle") {
  // det^{1/2} of (Theta/2)/sinh(Theta/2) for Theta = diag(1,-1,2,-2),
  // evaluated through the entire function x/sinh(x) by series
  auto x_over_sinh = [](double x) {
    if (x == 0.0) return 1.0;
    return x / std::sinh(x);
  };
  const std::vector<double> eigs = {1.0, -1.0, 2.0, -2.0};
  double det = 1.0;
  for (double lam : eigs) det *= x_over_sinh(lam / 2.0);
  const double oracle = std::sqrt(det);
  CHECK(a_hat(eigs) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(a_hat(eigs) ==
        doctest::Approx((0.5 / std::sinh(0.5)) * (1.0 / std::sinh(1.0))).epsilon(1e-14));
  CHECK(a_hat(eigs) <= 1.0);
  CHECK(a_hat(eigs) > 0.0);
}

TEST_CASE("j_gamma at the identity is the A-hat ratio") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const SemisimpleElement one = identity_element(sl2);
  const CentralizerDecomposition dec = centralizer_decomposition(sl2, one);
  for (double y : {0.0, 0.5, 2.0, -3.0}) {
    Eigen::VectorXd yv(1);
    yv << y;
    const cd j = j_gamma(sl2, dec, one, yv);
    const double expected = y == 0.0 ? 1.0 : (y / 2.0) / std::sinh(y / 2.0);
    CHECK(std::abs(j - cd(expected, 0.0)) < 1e-13);
  }
}

TEST_CASE("j_gamma hyperbolic and the determinant identity") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const double a = 1.2;
  const SemisimpleElement g = sl2_hyperbolic(sl2, a);
  const CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
  // brute force: det(1 - Ad(gamma)) on z0_perp equals -(e^{a/2}-e^{-a/2})^2
  const Eigen::MatrixXd ad_gamma = sl2.ad(g.a_full(sl2)).exp() * g.ad_k.transpose();
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2) -
                            dec.z0_perp.transpose() * ad_gamma * dec.z0_perp;
  const double brute = M.determinant();
  const double expected_det = -std::pow(std::exp(a / 2.0) - std::exp(-a / 2.0), 2);
  CHECK(brute == doctest::Approx(expected_det).epsilon(1e-12));

  const cd j = j_gamma(sl2, dec, g, Eigen::VectorXd::Zero(0));
  CHECK(std::abs(j.imag()) < 1e-15);
  CHECK(j.real() == doctest::Approx(1.0 / (2.0 * std::sinh(a / 2.0))).epsilon(1e-13));
}

TEST_CASE("j_gamma elliptic: analytic branch against the 2x2 brute force") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const double phi = 2.0 * M_PI / 3.0;
  const SemisimpleElement g = sl2_elliptic(sl2, phi);
  const CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
  for (double y : {0.0, 0.8, -1.5, 3.0}) {
    Eigen::VectorXd yv(1);
    yv << y;
    const cd j = j_gamma(sl2, dec, g, yv);
    // brute force on p: det(1 - e^{-i ad(Y)} Ad(k^{-1})) via complex 2x2
    Eigen::VectorXd yfull = Eigen::VectorXd::Zero(3);
    yfull[2] = y;
    const Eigen::MatrixXcd Sp =
        (dec.p0_perp_gamma.transpose() * sl2.ad(yfull) * dec.p0_perp_gamma)
            .cast<cd>();
    const Eigen::MatrixXcd Rp =
        (dec.p0_perp_gamma.transpose() * g.ad_k.transpose() * dec.p0_perp_gamma).cast<cd>();
    const Eigen::MatrixXcd E = (cd(0.0, -1.0) * Sp).exp();
    const cd det_mixed = (Eigen::MatrixXcd::Identity(2, 2) - E * Rp).determinant();
    const cd det_fixed = (Eigen::MatrixXcd::Identity(2, 2) - Rp).determinant();
    // blockwise closed form: both determinants are squared sines
    CHECK(std::abs(det_fixed - 4.0 * std::pow(std::sin(phi / 2.0), 2)) < 1e-12);
    const cd sine = std::sin(cd(phi, y) / 2.0);
    CHECK(std::abs(det_mixed - 4.0 * sine * sine) < 1e-11);
    // J = 1/(4 sin(phi/2) sin((phi + i y)/2)), analytic and positive at 0
    const cd expected = 1.0 / (4.0 * std::sin(phi / 2.0) * sine);
    CHECK(std::abs(j - expected) < 1e-12);
    // the conjugate-pair product form gives |J|
    const double product =
        std::abs(4.0 * std::sin(phi / 2.0) * std::sin(cd(phi, y) / 2.0) * 4.0 *
                 std::sin(phi / 2.0) * std::sin(cd(phi, -y) / 2.0));
    CHECK(std::abs(j) == doctest::Approx(1.0 / std::sqrt(product)).epsilon(1e-12));
  }
}

TEST_CASE("j_gamma singular-centralizer guard") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const SemisimpleElement g = sl2_elliptic(sl2, 1.0);
  CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
  // corrupt the decomposition so the fixed direction e3 enters z0_perp(gamma)
  dec.z0_perp_gamma = Eigen::MatrixXd::Zero(3, 1);
  dec.z0_perp_gamma(2, 0) = 1.0;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(j_gamma(sl2, dec, g, y), SingularCentralizer);
}

TEST_CASE("flat-model heat orbital integrals") {
  const LieAlgebraModel line = build_abelian_model(1);
  // at a=0, t=1 the kernel diagonal is 1/sqrt(2 pi)
  Eigen::VectorXd a(1);
  a << 0.0;
  const HeatParameters hp = geometric_heat_parameters(line, 1.0);
  CHECK(heat_orbital_integral(line, abelian_translation(line, a), hp).value ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
  a << 1.3;
  for (double t : {0.5, 2.0}) {
    const HeatParameters hpt = geometric_heat_parameters(line, t);
    CHECK(heat_orbital_integral(line, abelian_translation(line, a), hpt).value ==
          doctest::Approx(std::exp(-1.3 * 1.3 / (2.0 * t)) / std::sqrt(2.0 * M_PI * t))
              .epsilon(1e-14));
  }
}

TEST_CASE("sl2 identity orbital matches its quadrature form") {
  const LieAlgebraModel sl2 = build_sl2_model();
  for (double t : {0.5, 1.0}) {
    const HeatParameters hp = geometric_heat_parameters(sl2, t);  // A = 1/8
    const double value = heat_orbital_integral(sl2, identity_element(sl2), hp).value;
    // independent Simpson evaluation of the density integral
    auto f = [&](double y) {
      const double ah = y == 0.0 ? 1.0 : (y / 2.0) / std::sinh(y / 2.0);
      return std::exp(-y * y / (2.0 * t)) * ah;
    };
    const double width = 10.0 + 10.0 * std::sqrt(t);
    const double expected = std::exp(-t / 8.0) / (2.0 * M_PI * t) *
                            simpson(f, -width, width, 4000) / std::sqrt(2.0 * M_PI * t);
    CHECK(value == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("sl2 hyperbolic orbital closed form") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const HeatParameters hp = geometric_heat_parameters(sl2, 1.0);
  const double value = heat_orbital_integral(sl2, sl2_hyperbolic(sl2, 1.0), hp).value;
  const double expected =
      std::exp(-0.5 - 0.125) / (std::sqrt(2.0 * M_PI) * 2.0 * std::sinh(0.5));
  CHECK(value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("rank-one closed form") {
  const LieAlgebraModel sl2 = build_sl2_model();
  {
    const HeatParameters hp = geometric_heat_parameters(sl2, 1.0);
    const double v = rank_one_closed_form(sl2, sl2_hyperbolic(sl2, 1.0), hp).value;
    CHECK(v == doctest::Approx(std::exp(-0.5 - 0.125) /
                               (std::sqrt(2.0 * M_PI) * 2.0 * std::sinh(0.5)))
                   .epsilon(1e-14));
  }
  {
    // flat model: all determinant factors are empty products
    const LieAlgebraModel line = build_abelian_model(1);
    Eigen::VectorXd a(1);
    a << 0.9;
    const HeatParameters hp = geometric_heat_parameters(line, 2.0);
    CHECK(rank_one_closed_form(line, abelian_translation(line, a), hp).value ==
          doctest::Approx(std::exp(-0.81 / 4.0) / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  }
  {
    // cross-method agreement; q = 0 so no quadrature enters either value
    const HeatParameters hp = geometric_heat_parameters(sl2, 0.5);
    const SemisimpleElement g = sl2_hyperbolic(sl2, 2.0);
    const double v1 = heat_orbital_integral(sl2, g, hp).value;
    const double v2 = rank_one_closed_form(sl2, g, hp).value;
    CHECK(std::abs(v1 - v2) < 1e-12);
  }
  CHECK_THROWS_AS(
      rank_one_closed_form(sl2, identity_element(sl2), geometric_heat_parameters(sl2, 1.0)),
      PreconditionFailed);
}

TEST_CASE("nontrivial K-representation against test-side quadrature") {
  // one-dimensional character rho_n(k_phi) = e^{i n phi} on E = C
  const LieAlgebraModel sl2 = build_sl2_model();
  const int n = 2;
  const double t = 0.8;
  HeatParameters hp;
  hp.t = t;
  hp.rep.dim = 1;
  hp.rep.rho_k_inv = Eigen::MatrixXcd::Identity(1, 1);  // identity element below
  hp.rep.rho_k_basis = {cd(0.0, n) * Eigen::MatrixXcd::Identity(1, 1)};
  hp.rep.shift = 0.125 * Eigen::MatrixXcd::Identity(1, 1);
  const double value = heat_orbital_integral(sl2, identity_element(sl2), hp).value;
  auto f = [&](double y) {
    const double ah = y == 0.0 ? 1.0 : (y / 2.0) / std::sinh(y / 2.0);
    return std::exp(-y * y / (2.0 * t)) * ah * std::exp(n * y);
  };
  const double expected = std::exp(-t / 8.0) / (2.0 * M_PI * t) *
                          simpson(f, -14.0, 14.0, 6000) / std::sqrt(2.0 * M_PI * t);
  CHECK(value == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("representation invariants are enforced") {
  HeatParameters hp;
  hp.t = 1.0;
  hp.rep.dim = 1;
  hp.rep.rho_k_inv = Eigen::MatrixXcd::Identity(1, 1);
  hp.rep.shift = cd(0.0, 1.0) * Eigen::MatrixXcd::Identity(1, 1);  // not Hermitian
  const LieAlgebraModel line = build_abelian_model(1);
  Eigen::VectorXd a(1);
  a << 0.0;
  CHECK_THROWS_AS(heat_orbital_integral(line, abelian_translation(line, a), hp),
                  InvalidRepresentation);
}

TEST_CASE("quadrature refinement failure is reported") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const HeatParameters hp = geometric_heat_parameters(sl2, 1.0);
  QuadratureConfig quad;
  quad.nodes = 4;
  quad.tol = 1e-16;
  CHECK_THROWS_AS(heat_orbital_integral(sl2, identity_element(sl2), hp, quad),
                  QuadratureNotConverged);
}

TEST_CASE("symmetry and scaling properties") {
  const LieAlgebraModel sl2 = build_sl2_model();
  const HeatParameters hp = geometric_heat_parameters(sl2, 0.7);
  CHECK(heat_orbital_integral(sl2, sl2_hyperbolic(sl2, 1.1), hp).value ==
        heat_orbital_integral(sl2, sl2_hyperbolic(sl2, -1.1), hp).value);

  const LieAlgebraModel line = build_abelian_model(1);
  const double alpha = 3.7;
  Eigen::VectorXd a(1);
  a << 0.6;
  const double base =
      heat_orbital_integral(line, abelian_translation(line, a), scalar_heat_parameters(1.0, 0.3))
          .value;
  a << 0.6 * std::sqrt(alpha);
  const double scaled = heat_orbital_integral(line, abelian_translation(line, a),
                                              scalar_heat_parameters(alpha, 0.3 / alpha))
                            .value;
  CHECK(scaled == doctest::Approx(base / std::sqrt(alpha)).epsilon(1e-14));
}

TEST_CASE("property: a_hat on random paired spectra") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> mag(0.05, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int pairs = 1 + static_cast<int>(rng() % 3);
    const int zeros = static_cast<int>(rng() % 3);
    std::vector<double> eigs;
    double expected = 1.0;
    for (int p = 0; p < pairs; ++p) {
      const double lam = mag(rng);
      eigs.push_back(lam);
      eigs.push_back(-lam);
      expected *= (lam / 2.0) / std::sinh(lam / 2.0);
    }
    for (int z = 0; z < zeros; ++z) eigs.push_back(0.0);
    std::shuffle(eigs.begin(), eigs.end(), rng);
    const double value = a_hat(eigs);
    CHECK(value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(value > 0.0);
    CHECK(value <= 1.0);
    // breaking one pair must be detected
    eigs[0] += 1.0;
    CHECK_THROWS_AS(a_hat(eigs), UnpairedSpectrum);
  }
}

TEST_CASE("property: j_gamma conjugate symmetry over random angles") {
  const LieAlgebraModel sl2 = build_sl2_model();
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> angle(0.2, 2.0 * M_PI - 0.2);
  std::uniform_real_distribution<double> ys(-6.0, 6.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SemisimpleElement g = sl2_elliptic(sl2, angle(rng));
    const CentralizerDecomposition dec = centralizer_decomposition(sl2, g);
    Eigen::VectorXd y(1);
    const double yv = ys(rng);
    y << yv;
    const cd jp = j_gamma(sl2, dec, g, y);
    y << -yv;
    const cd jm = j_gamma(sl2, dec, g, y);
    CHECK(std::abs(jp - std::conj(jm)) < 1e-12 * std::max(1.0, std::abs(jp)));
  }
}

TEST_CASE("scaled-bracket model: internal method consistency survives rescaling") {
  // doubled brackets rescale the metric; no external oracle applies, but the
  // two closed-form routes must still agree
  const LieAlgebraModel scaled = build_from_brackets(
      2, 1, {{{0, 1, 2, 2.0}}, {{1, 2, 0, -2.0}}, {{2, 0, 1, -2.0}}}, "sl2-doubled");
  SemisimpleElement g;
  g.a = Eigen::VectorXd::Zero(2);
  g.a[0] = 0.7;
  g.ad_k = Eigen::MatrixXd::Identity(3, 3);
  g.kind = ElementKind::hyperbolic;
  const HeatParameters hp = geometric_heat_parameters(scaled, 1.0);
  const double v1 = heat_orbital_integral(scaled, g, hp).value;
  const double v2 = rank_one_closed_form(scaled, g, hp).value;
  CHECK(std::abs(v1 - v2) < 1e-12 * v1);
  // the displaced-geodesic factor now contracts twice as fast
  const CentralizerDecomposition dec = centralizer_decomposition(scaled, g);
  const cd j = j_gamma(scaled, dec, g, Eigen::VectorXd::Zero(0));
  CHECK(j.real() == doctest::Approx(1.0 / (2.0 * std::sinh(0.7))).epsilon(1e-12));
}
