#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "orbitalis/errors.hpp"
#include "orbitalis/hypoelliptic.hpp"
#include "orbitalis/quadrature.hpp"
#include "support/oracles.hpp"

using namespace orbitalis;

TEST_CASE("kernel normalization: y-diagonal integral identity") {
  // \int p((0,y),(a,y)) dy = (1/(1-e^{-t/b^2})) e^{-a^2/2t}/sqrt(2 pi t)
  for (double b : {0.4, 1.0, 3.0})
    for (double t : {0.5, 1.0})
      for (double a : {0.0, 1.0}) {
        const ModelKernel k = model_kernel(b, t);
        const double expected = oscillator_trace(b, t) * std::exp(-a * a / (2.0 * t)) /
                                std::sqrt(2.0 * M_PI * t);
        CHECK(k.diagonal_integral(a) == doctest::Approx(expected).epsilon(1e-12));
        // and against direct quadrature of the evaluated kernel
        const double quad =
            integrate([&](double y) { return k(0.0, y, a, y); }, -12.0, 12.0, 1e-12).value;
        CHECK(quad == doctest::Approx(expected).epsilon(1e-10));
      }
}

TEST_CASE("kernel mass from height y equals the oscillator survival factor") {
  for (double b : {0.7, 1.0})
    for (double y : {0.0, 0.5, 1.0}) {
      const double t = 1.0;
      const double tau = t / (b * b);
      const ModelKernel k = model_kernel(b, t);
      const double expected =
          std::exp(0.5 * tau) / std::sqrt(std::cosh(tau)) *
          std::exp(-0.5 * y * y * std::tanh(tau));
      CHECK(k.mass_from(y) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("supertrace: b-independence") {
  CHECK(hypo_supertrace(0.0, 2.0, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(hypo_supertrace(1.0, 1.0, 1.0) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  const double v1 = hypo_supertrace(2.0, 0.1, 0.5);
  const double v2 = hypo_supertrace(2.0, 1.0, 0.5);
  const double v3 = hypo_supertrace(2.0, 10.0, 0.5);
  CHECK(std::abs(v1 - v2) < 1e-10);
  CHECK(std::abs(v2 - v3) < 1e-10);
}

TEST_CASE("oscillator trace") {
  // t/b^2 = ln 2 gives the geometric series value 2
  CHECK(oscillator_trace(1.0, std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(oscillator_trace(0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));  // tau -> inf
  CHECK(oscillator_trace(1.0, 1.0) ==
        doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(oscillator_trace_series(1.0, 1.0) ==
        doctest::Approx(oscillator_trace(1.0, 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(oscillator_trace_series(100.0, 1.0, 100), QuadratureNotConverged);
  CHECK_THROWS_AS(model_kernel(-1.0, 1.0), PreconditionFailed);
}

TEST_CASE("flip adjoint symmetry of the kernel") {
  // conjugating by y -> -y turns the operator into its formal adjoint, so
  // p((0,y),(a,y')) = p((0,-y'),(-a,-y)); brute-force matrix check below
  for (double b : {0.6, 1.3}) {
    const ModelKernel k = model_kernel(b, 0.8);
    for (double y : {-0.7, 0.4})
      for (double yp : {0.2, 1.1})
        for (double a : {0.0, 0.9})
          CHECK(k(0.0, y, a, yp) == doctest::Approx(k(0.0, -yp, -a, -y)).epsilon(1e-12));
  }
  // discretized generator on a small periodic-x grid: flipping y conjugates
  // M_b into its transpose
  const int nx = 16, ny = 21;
  const double Lx = 4.0, Ly = 4.0;
  const double hx = 2.0 * Lx / nx;  // periodic in x
  const double hy = 2.0 * Ly / (ny - 1);
  const double b = 0.9;
  const int N = nx * ny;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  auto idx = [&](int i, int j) { return i * ny + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double y = -Ly + j * hy;
      const double inv2b2 = 1.0 / (2.0 * b * b);
      M(idx(i, j), idx(i, j)) += inv2b2 * (2.0 / (hy * hy) + y * y - 1.0);
      if (j > 0) M(idx(i, j), idx(i, j - 1)) -= inv2b2 / (hy * hy);
      if (j + 1 < ny) M(idx(i, j), idx(i, j + 1)) -= inv2b2 / (hy * hy);
      const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      M(idx(i, j), idx(ip, j)) += y / (2.0 * b * hx);
      M(idx(i, j), idx(im, j)) -= y / (2.0 * b * hx);
    }
  // flip operator in y
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) F(idx(i, j), idx(i, ny - 1 - j)) = 1.0;
  CHECK((F * M * F - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("b -> 0: vacuum matrix element approaches the flat kernel") {
  const double b = 0.05, t = 1.0;
  const ModelKernel k = model_kernel(b, t);
  // <chi_0, e^{-tM_b}(a) chi_0> with chi_0 the oscillator ground state
  const double a = 1.0;
  auto inner = [&](double y) {
    auto f = [&](double yp) {
      return k(0.0, y, a, yp) * std::exp(-0.5 * yp * yp) / std::pow(M_PI, 0.25);
    };
    return integrate(f, -8.0, 8.0, 1e-10).value * std::exp(-0.5 * y * y) /
           std::pow(M_PI, 0.25);
  };
  const double value = integrate(inner, -8.0, 8.0, 1e-9).value;
  const double flat = std::exp(-a * a / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
  CHECK(value == doctest::Approx(flat).epsilon(1e-3));
}

TEST_CASE("semigroup property at sampled points") {
  const double b = 0.8;
  const ModelKernel k1 = model_kernel(b, 0.4);
  const ModelKernel k2 = model_kernel(b, 0.7);
  const ModelKernel k12 = model_kernel(b, 1.1);
  for (const auto& pt : {std::array<double, 4>{0.0, 0.2, 0.5, -0.3},
                         std::array<double, 4>{0.0, -0.6, 1.0, 0.4}}) {
    auto over_y = [&](double xm) {
      return integrate([&](double ym) { return k1(pt[0], pt[1], xm, ym) *
                                               k2(xm, ym, pt[2], pt[3]); },
                       -9.0, 9.0, 1e-11)
          .value;
    };
    const double composed = integrate(over_y, -9.0, 9.0, 1e-10).value;
    CHECK(composed == doctest::Approx(k12(pt[0], pt[1], pt[2], pt[3])).epsilon(1e-9));
  }
}

TEST_CASE("localization profile") {
  {
    const LocalizationProfile prof = localization_profile(0.0, 1.0, 1.0);
    CHECK(std::abs(prof.argmax) < 1e-10);  // even in Y when a = 0
    const int n = static_cast<int>(prof.y.size());
    for (int i = 0; i < n / 4; ++i)
      CHECK(prof.value[i] == doctest::Approx(prof.value[n - 1 - i]).epsilon(1e-10));
  }
  {
    const LocalizationProfile coarse = localization_profile(1.0, 1.0, 1.0);
    const LocalizationProfile sharp = localization_profile(1.0, 10.0, 1.0);
    CHECK(sharp.second_moment < coarse.second_moment);
  }
  {
    // b -> 0 product-state shape: at b = 0.1 the normalized profile matches
    // the ground-state density e^{-Y^2}/sqrt(pi) about its own center (the
    // center itself drifts by -ab/t, an O(b) effect; see the drift check)
    const double a = 1.0, b = 0.1, t = 1.0;
    const LocalizationProfile prof = localization_profile(a, b, t, 4001);
    double mass = 0.0, dist = 0.0;
    const double dy = prof.y[1] - prof.y[0];
    for (int i = 0; i < prof.y.size(); ++i) mass += prof.value[i] * dy;
    for (int i = 0; i < prof.y.size(); ++i) {
      const double g = std::exp(-std::pow(prof.y[i] - prof.argmax, 2)) / std::sqrt(M_PI);
      dist += std::abs(prof.value[i] / mass - g) * dy;
    }
    CHECK(dist < 1e-2);
    CHECK(prof.argmax == doctest::Approx(-a * b / t).epsilon(1e-2));
    // centered comparison converges at the O(b) drift rate
    for (double bb : {0.1, 0.05}) {
      const LocalizationProfile p2 = localization_profile(a, bb, t, 4001);
      double m2 = 0.0, d2 = 0.0;
      const double dy2 = p2.y[1] - p2.y[0];
      for (int i = 0; i < p2.y.size(); ++i) m2 += p2.value[i] * dy2;
      for (int i = 0; i < p2.y.size(); ++i) {
        const double g = std::exp(-p2.y[i] * p2.y[i]) / std::sqrt(M_PI);
        d2 += std::abs(p2.value[i] / m2 - g) * dy2;
      }
      // shift of ab/t between unit-mass Gaussians costs about 1.13 ab/t in L1
      CHECK(d2 < 1.3 * a * bb / t + 2e-3);
    }
  }
}

TEST_CASE("reduced PDE smoke gate (full 512^2 gate runs in acceptance)") {
  const double b = 1.0, t = 1.0;
  const ModelKernel k = model_kernel(b, t);
  const test_oracles::BlobSpec blob{0.0, 0.3, 1.2};
  auto u0 = [&](double x, double y) {
    return std::exp(-((x - blob.x0) * (x - blob.x0) + (y - blob.y0) * (y - blob.y0)) /
                    (2.0 * blob.s * blob.s));
  };
  const auto pde = test_oracles::crank_nicolson_model(b, t, 128, 8.0, u0, 4e-3);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; ++j) {
      const double exact = test_oracles::exact_blob_evolution(k, blob, pde.x[i], pde.y[j]);
      num += std::pow(pde.solution(i, j) - exact, 2);
      den += exact * exact;
    }
  CHECK(std::sqrt(num / den) < 2e-3);
}

TEST_CASE("reduced Monte Carlo smoke gate (full 10^6-path gate in acceptance)") {
  const double b = 1.0, t = 1.0, y = 0.5;
  const ModelKernel k = model_kernel(b, t);
  const auto est = test_oracles::feynman_kac_mass(b, t, y, 100000, 300, 20240801);
  CHECK(std::abs(est.mean - k.mass_from(y)) < 3.0 * est.std_error + 1e-4);
}
