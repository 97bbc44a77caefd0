#pragma once

// Test-side numerical oracles, independent of the library implementations
// they gate. Nothing here consults the closed-form kernel coefficients.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "orbitalis/runtime.hpp"

namespace test_oracles {

// Thomas solve for a tridiagonal system (lower, diag, upper given per row).
inline void tridiag_solve(const Eigen::VectorXd& lower, const Eigen::VectorXd& diag,
                          const Eigen::VectorXd& upper, Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(diag.size());
  Eigen::VectorXd c(n);
  c[0] = upper[0] / diag[0];
  rhs[0] /= diag[0];
  for (int i = 1; i < n; ++i) {
    const double m = 1.0 / (diag[i] - lower[i] * c[i - 1]);
    c[i] = upper[i] * m;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * m;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
}

struct PdeGridResult {
  Eigen::MatrixXd solution;   // u(t) on the grid, x-major columns
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

// Crank-Nicolson (trapezoidal) solve of u_t = -M_b u on [-L,L]^2 with
// absorbing boundary, realized by Peaceman-Rachford ADI line splitting:
//   (1 + dt/2 A_y) u* = (1 - dt/2 A_x) u^n
//   (1 + dt/2 A_x) u^{n+1} = (1 - dt/2 A_y) u*
// A_y = (1/2b^2)(-d_yy + y^2 - 1) and A_x = (y/b) d_x, central differences.
inline PdeGridResult crank_nicolson_model(double b, double t_final, int grid, double L,
                                          const std::function<double(double, double)>& u0,
                                          double dt) {
  const int n = grid;
  const double h = 2.0 * L / (n - 1);
  PdeGridResult out;
  out.x.resize(n);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = -L + i * h;
  out.y = out.x;
  Eigen::MatrixXd u(n, n);  // u(i,j) = u(x_i, y_j)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = u0(out.x[i], out.y[j]);

  const int steps = static_cast<int>(std::round(t_final / dt));
  const double dt_eff = t_final / steps;
  const double inv2b2 = 1.0 / (2.0 * b * b);

  // y-direction operator coefficients (same for every x line)
  Eigen::VectorXd ay_lower(n), ay_diag(n), ay_upper(n);
  for (int j = 0; j < n; ++j) {
    const double yj = out.y[j];
    ay_lower[j] = -inv2b2 / (h * h);
    ay_upper[j] = -inv2b2 / (h * h);
    ay_diag[j] = inv2b2 * (2.0 / (h * h) + yj * yj - 1.0);
  }
  auto apply_ay = [&](const Eigen::VectorXd& v, Eigen::VectorXd& res) {
    for (int j = 0; j < n; ++j) {
      double acc = ay_diag[j] * v[j];
      if (j > 0) acc += ay_lower[j] * v[j - 1];
      if (j + 1 < n) acc += ay_upper[j] * v[j + 1];
      res[j] = acc;
    }
  };

  Eigen::VectorXd tmp(n), rhs(n), lower(n), diag(n), upper(n);
  Eigen::MatrixXd ustar(n, n);
  for (int step = 0; step < steps; ++step) {
    // u* from (1 + dt/2 A_y) u* = (1 - dt/2 A_x) u
    for (int j = 0; j < n; ++j) {
      const double cx = dt_eff * out.y[j] / (2.0 * b) / (2.0 * h);
      for (int i = 0; i < n; ++i) {
        double adv = 0.0;
        if (i > 0) adv -= u(i - 1, j);
        if (i + 1 < n) adv += u(i + 1, j);
        ustar(i, j) = u(i, j) - cx * adv;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        lower[j] = 0.5 * dt_eff * ay_lower[j];
        diag[j] = 1.0 + 0.5 * dt_eff * ay_diag[j];
        upper[j] = 0.5 * dt_eff * ay_upper[j];
        rhs[j] = ustar(i, j);
      }
      tridiag_solve(lower, diag, upper, rhs);
      for (int j = 0; j < n; ++j) ustar(i, j) = rhs[j];
    }
    // u^{n+1} from (1 + dt/2 A_x) u^{n+1} = (1 - dt/2 A_y) u*
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) tmp[j] = ustar(i, j);
      apply_ay(tmp, rhs);
      for (int j = 0; j < n; ++j) u(i, j) = ustar(i, j) - 0.5 * dt_eff * rhs[j];
    }
    for (int j = 0; j < n; ++j) {
      const double cx = dt_eff * out.y[j] / (2.0 * b) / (2.0 * h);
      for (int i = 0; i < n; ++i) {
        lower[i] = -cx;
        diag[i] = 1.0;
        upper[i] = cx;
        rhs[i] = u(i, j);
      }
      tridiag_solve(lower, diag, upper, rhs);
      for (int i = 0; i < n; ++i) u(i, j) = rhs[i];
    }
  }
  out.solution = std::move(u);
  return out;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long paths = 0;
};

// Feynman-Kac estimate of (e^{-tM_b} 1)(x, y) = E[ exp(-int_0^t V(Y_s) ds) ],
// V(y) = (y^2 - 1)/(2 b^2), with Y a Brownian motion of generator
// (1/2b^2) d_yy started at y. Trapezoidal weight accumulation; per-worker
// streams seeded as seed + worker index; deterministic reduction order.
inline MonteCarloEstimate feynman_kac_mass(double b, double t, double y0, long paths, int steps,
                                           std::uint64_t seed) {
  const int workers = std::max(1, orbitalis::max_threads());
  std::vector<double> sums(static_cast<size_t>(workers), 0.0);
  std::vector<double> sqsums(static_cast<size_t>(workers), 0.0);
  std::vector<long> counts(static_cast<size_t>(workers), 0);
  const double dt = t / steps;
  const double diff = std::sqrt(dt) / b;
  auto work = [&](int w) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(w));
    std::normal_distribution<double> normal(0.0, 1.0);
    const long lo = paths * w / workers;
    const long hi = paths * (w + 1) / workers;
    double s = 0.0, s2 = 0.0;
    for (long p = lo; p < hi; ++p) {
      double y = y0;
      double v_prev = (y * y - 1.0) / (2.0 * b * b);
      double integral = 0.0;
      for (int k = 0; k < steps; ++k) {
        y += diff * normal(rng);
        const double v = (y * y - 1.0) / (2.0 * b * b);
        integral += 0.5 * dt * (v_prev + v);
        v_prev = v;
      }
      const double w_path = std::exp(-integral);
      s += w_path;
      s2 += w_path * w_path;
    }
    sums[static_cast<size_t>(w)] = s;
    sqsums[static_cast<size_t>(w)] = s2;
    counts[static_cast<size_t>(w)] = hi - lo;
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();
  double s = 0.0, s2 = 0.0;
  long cnt = 0;
  for (int w = 0; w < workers; ++w) {
    s += sums[static_cast<size_t>(w)];
    s2 += sqsums[static_cast<size_t>(w)];
    cnt += counts[static_cast<size_t>(w)];
  }
  MonteCarloEstimate est;
  est.paths = cnt;
  est.mean = s / cnt;
  const double var = std::max(s2 / cnt - est.mean * est.mean, 0.0);
  est.std_error = std::sqrt(var / cnt);
  return est;
}

// Exact evolution of a Gaussian blob under the explicit model kernel: the
// 2-D Gaussian integral is done in closed form per evaluation point.
struct BlobSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double s = 1.0;
};

inline double exact_blob_evolution(const orbitalis::ModelKernel& k, const BlobSpec& blob,
                                   double x, double y) {
  const Eigen::Matrix3d& Q = k.quad;
  Eigen::Matrix2d A;
  A << Q(0, 0) + 0.5 / (blob.s * blob.s), Q(0, 2),
       Q(0, 2), Q(2, 2) + 0.5 / (blob.s * blob.s);
  Eigen::Vector2d lin;
  lin << -2.0 * Q(0, 0) * x + 2.0 * Q(0, 1) * y - blob.x0 / (blob.s * blob.s),
      2.0 * Q(1, 2) * y - 2.0 * Q(0, 2) * x - blob.y0 / (blob.s * blob.s);
  const double c = Q(0, 0) * x * x - 2.0 * Q(0, 1) * x * y + Q(1, 1) * y * y +
                   0.5 * (blob.x0 * blob.x0 + blob.y0 * blob.y0) / (blob.s * blob.s);
  const double quad_min = 0.25 * lin.dot(A.inverse() * lin);
  return std::exp(k.log_norm + quad_min - c) * M_PI / std::sqrt(A.determinant());
}

}  // namespace test_oracles
