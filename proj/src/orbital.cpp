#include "orbitalis/orbital.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

#include "orbitalis/errors.hpp"
#include "orbitalis/quadrature.hpp"

namespace orbitalis {

namespace {

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& op, const Eigen::MatrixXd& basis) {
  return basis.transpose() * op * basis;
}

double x_over_sinh(double x) {
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return 1.0 / (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return x / std::sinh(x);
}

}  // namespace

RepresentationE RepresentationE::trivial(double shift_value) {
  RepresentationE rep;
  rep.dim = 1;
  rep.rho_k_inv = Eigen::MatrixXcd::Identity(1, 1);
  rep.shift = shift_value * Eigen::MatrixXcd::Identity(1, 1);
  return rep;
}

Eigen::MatrixXcd RepresentationE::rho_of(const Eigen::VectorXd& y_k_coords) const {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < y_k_coords.size() && j < static_cast<int>(rho_k_basis.size()); ++j)
    M += y_k_coords[j] * rho_k_basis[static_cast<size_t>(j)];
  return M;
}

double RepresentationE::validation_residual() const {
  double res = 0.0;
  for (const auto& R : rho_k_basis) {
    res = std::max(res, (R + R.adjoint()).cwiseAbs().maxCoeff());
    // the shift must commute with the whole K-action, not just with rho(k^{-1})
    res = std::max(res, (shift * R - R * shift).cwiseAbs().maxCoeff());
  }
  res = std::max(res, (shift - shift.adjoint()).cwiseAbs().maxCoeff());
  res = std::max(res, (shift * rho_k_inv - rho_k_inv * shift).cwiseAbs().maxCoeff());
  return res;
}

void RepresentationE::validate(double tol) const {
  if (rho_k_inv.rows() != dim || shift.rows() != dim)
    throw InvalidRepresentation("representation matrices must be dim x dim");
  const double res = validation_residual();
  if (res > tol)
    throw InvalidRepresentation("representation invariants violated, residual " +
                                std::to_string(res));
}

HeatParameters geometric_heat_parameters(const LieAlgebraModel& model, double t) {
  auto [tr_p, tr_k] = casimir_constants(model);
  HeatParameters hp;
  hp.t = t;
  hp.rep = RepresentationE::trivial(-(tr_p / 16.0 + tr_k / 48.0));
  hp.rep.rho_k_basis.assign(static_cast<size_t>(model.dim_k()),
                            Eigen::MatrixXcd::Zero(1, 1));
  return hp;
}

HeatParameters scalar_heat_parameters(double t, double shift) {
  HeatParameters hp;
  hp.t = t;
  hp.rep = RepresentationE::trivial(shift);
  return hp;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::explicit_formula: return "explicit";
    case Method::rank_one: return "rank_one";
    case Method::closed_sl2: return "closed_sl2";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

double a_hat(std::vector<double> eigenvalues, double pair_tol) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  size_t lo = 0;
  size_t hi = eigenvalues.size();
  double prod = 1.0;
  while (lo < hi) {
    const double lmin = eigenvalues[lo];
    const double lmax = eigenvalues[hi - 1];
    if (std::abs(lmax) <= pair_tol && std::abs(lmin) <= pair_tol) break;  // zeros remain
    if (std::abs(lmax + lmin) > pair_tol * std::max(1.0, std::abs(lmax)))
      throw UnpairedSpectrum("eigenvalues do not come in +- pairs");
    prod *= x_over_sinh(lmax / 2.0);
    ++lo;
    --hi;
  }
  return prod;
}

double a_hat_of_ad(const LieAlgebraModel& model, const Eigen::VectorXd& y_full,
                   const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return 1.0;
  const Eigen::MatrixXd S = restrict_to(model.ad(y_full), basis);
  // eigenvalues of the Hermitian matrix i S are the paired spectrum
  Eigen::MatrixXcd iS = std::complex<double>(0.0, 1.0) * S.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(iS);
  std::vector<double> eigs(es.eigenvalues().data(), es.eigenvalues().data() + basis.cols());
  return a_hat(std::move(eigs));
}

namespace {

// Joint spectrum of a commuting pair (skew S, orthogonal R) on an invariant
// subspace: pairs (mu, rho) with i S v = mu v and R v = rho v. Working
// spectrally keeps every factor 1 - e^{-s mu} rho at full relative precision,
// which a matrix exponential would lose once e^{|s mu|} spreads over many
// orders of magnitude.
std::vector<std::pair<double, std::complex<double>>> joint_spectrum(const Eigen::MatrixXd& S,
                                                                    const Eigen::MatrixXd& R) {
  std::vector<std::pair<double, std::complex<double>>> out;
  const Eigen::Index n = S.rows();
  if (n == 0) return out;
  const Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * S.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::Index lo = 0;
  while (lo < n) {
    Eigen::Index hi = lo + 1;
    while (hi < n && es.eigenvalues()[hi] - es.eigenvalues()[lo] < 1e-10 * scale) ++hi;
    const Eigen::MatrixXcd V = es.eigenvectors().middleCols(lo, hi - lo);
    const Eigen::MatrixXcd Rblock = V.adjoint() * R.cast<std::complex<double>>() * V;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> er(Rblock);
    for (Eigen::Index j = 0; j < hi - lo; ++j)
      out.emplace_back(es.eigenvalues()[lo], er.eigenvalues()[j]);
    lo = hi;
  }
  return out;
}

// Value of the bracketed square-root argument at interpolation parameter s,
// as a finite product over the joint spectra of the p- and k-side blocks.
struct BranchData {
  std::vector<std::pair<double, std::complex<double>>> p_pairs, k_pairs;
  double det0 = 1.0;  // det(1 - Ad(k^{-1})) on z0_perp(gamma)

  std::complex<double> eval(double s) const {
    std::complex<double> num = 1.0, den = 1.0;
    for (const auto& [mu, rho] : k_pairs) num *= 1.0 - std::exp(-s * mu) * rho;
    for (const auto& [mu, rho] : p_pairs) den *= 1.0 - std::exp(-s * mu) * rho;
    return num / (den * det0);
  }
};

// Analytic square root of F along s in [0,1], fixed positive at s=0.
std::complex<double> tracked_sqrt(const BranchData& F) {
  std::complex<double> f0 = F.eval(0.0);
  if (std::abs(f0.imag()) > 1e-10 * std::abs(f0) || f0.real() <= 0.0)
    throw SingularCentralizer("square-root argument not positive at Y=0");
  std::complex<double> w = std::sqrt(f0.real());
  double s = 0.0;
  double step = 0.125;
  std::complex<double> fcur = f0;
  int guard = 0;
  while (s < 1.0) {
    if (++guard > 100000) throw QuadratureNotConverged("branch tracking failed to advance");
    const double snext = std::min(1.0, s + step);
    const std::complex<double> fnext = F.eval(snext);
    const std::complex<double> ratio = fnext / fcur;
    if (std::abs(ratio - 1.0) > 0.5) {
      step *= 0.5;
      continue;
    }
    w *= std::sqrt(ratio);  // principal branch; ratio stays near 1
    fcur = fnext;
    s = snext;
    if (std::abs(ratio - 1.0) < 0.1) step *= 1.5;
  }
  return w;
}

}  // namespace

std::complex<double> j_gamma(const LieAlgebraModel& model, const CentralizerDecomposition& dec,
                             const SemisimpleElement& gamma, const Eigen::VectorXd& y_coords) {
  const int d = model.dim();
  const Eigen::MatrixXd adk_inv = gamma.ad_k.transpose();  // Ad(k) is <.,.>-orthogonal
  const Eigen::VectorXd y_full =
      dec.k_gamma.cols() > 0 ? Eigen::VectorXd(dec.k_gamma * y_coords)
                             : Eigen::VectorXd(Eigen::VectorXd::Zero(d));

  // normalization over z0_perp
  double factor1 = 1.0;
  if (dec.z0_perp.cols() > 0) {
    const Eigen::MatrixXd ad_gamma = model.ad(gamma.a_full(model)).exp() * adk_inv;
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(dec.z0_perp.cols(), dec.z0_perp.cols()) -
        restrict_to(ad_gamma, dec.z0_perp);
    factor1 = 1.0 / std::sqrt(std::abs(M.partialPivLu().determinant()));
  }

  const double factor2 = a_hat_of_ad(model, y_full, dec.p_gamma) /
                         a_hat_of_ad(model, y_full, dec.k_gamma);

  BranchData F;
  const Eigen::MatrixXd adY = model.ad(y_full);
  const Eigen::MatrixXd Rp = restrict_to(adk_inv, dec.p0_perp_gamma);
  const Eigen::MatrixXd Rk = restrict_to(adk_inv, dec.k0_perp_gamma);
  const Eigen::MatrixXd Sp = restrict_to(adY, dec.p0_perp_gamma);
  const Eigen::MatrixXd Sk = restrict_to(adY, dec.k0_perp_gamma);
  const auto commute_residual = [](const Eigen::MatrixXd& R, const Eigen::MatrixXd& S) {
    return R.rows() == 0 ? 0.0 : (R * S - S * R).cwiseAbs().maxCoeff();
  };
  if (commute_residual(Rp, Sp) > 1e-10 || commute_residual(Rk, Sk) > 1e-10)
    throw UnsupportedModel("Ad(k^{-1}) and ad(Y) do not commute on z0_perp(gamma)");
  F.p_pairs = joint_spectrum(Sp, Rp);
  F.k_pairs = joint_spectrum(Sk, Rk);
  if (dec.z0_perp_gamma.cols() > 0) {
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(dec.z0_perp_gamma.cols(), dec.z0_perp_gamma.cols()) -
        restrict_to(adk_inv, dec.z0_perp_gamma);
    F.det0 = M.partialPivLu().determinant();
    if (std::abs(F.det0) < 1e-12)
      throw SingularCentralizer("det(1 - Ad(k^{-1})) vanishes on z0_perp(gamma)");
  }

  return factor1 * factor2 * tracked_sqrt(F);
}

namespace {

std::complex<double> trace_factor(const RepresentationE& rep, const Eigen::VectorXd& y_k_coords,
                                  double t) {
  const std::complex<double> mi(0.0, -1.0);
  const Eigen::MatrixXcd expo = mi * rep.rho_of(y_k_coords) - t * rep.shift;
  return (rep.rho_k_inv * expo.exp()).trace();
}

std::complex<double> integrand(const LieAlgebraModel& model, const CentralizerDecomposition& dec,
                               const SemisimpleElement& gamma, const HeatParameters& params,
                               const Eigen::VectorXd& y_coords) {
  const Eigen::VectorXd y_full = dec.k_gamma * y_coords;
  return j_gamma(model, dec, gamma, y_coords) *
         trace_factor(params.rep, y_full.tail(model.dim_k()), params.t);
}

std::complex<double> gauss_hermite_sum(const LieAlgebraModel& model,
                                       const CentralizerDecomposition& dec,
                                       const SemisimpleElement& gamma,
                                       const HeatParameters& params, int nodes) {
  const int q = dec.q;
  const GaussHermiteRule rule = gauss_hermite(nodes);
  const double scale = std::sqrt(2.0 * params.t);
  std::vector<double> re_terms, im_terms;
  re_terms.reserve(static_cast<size_t>(std::pow(nodes, q)));
  im_terms.reserve(re_terms.capacity());
  std::vector<int> idx(static_cast<size_t>(q), 0);
  while (true) {
    Eigen::VectorXd y(q);
    double w = 1.0;
    for (int ax = 0; ax < q; ++ax) {
      y[ax] = scale * rule.nodes[idx[static_cast<size_t>(ax)]];
      w *= rule.weights[idx[static_cast<size_t>(ax)]];
    }
    const std::complex<double> g = integrand(model, dec, gamma, params, y);
    re_terms.push_back(w * g.real());
    im_terms.push_back(w * g.imag());
    int ax = 0;
    for (; ax < q; ++ax) {
      if (++idx[static_cast<size_t>(ax)] < nodes) break;
      idx[static_cast<size_t>(ax)] = 0;
    }
    if (ax == q) break;
  }
  const double norm = std::pow(M_PI, -0.5 * q);
  return {norm * pairwise_sum(re_terms), norm * pairwise_sum(im_terms)};
}

}  // namespace

OrbitalIntegralResult heat_orbital_integral(const LieAlgebraModel& model,
                                            const SemisimpleElement& gamma,
                                            const HeatParameters& params,
                                            const QuadratureConfig& quad) {
  if (params.t <= 0) throw PreconditionFailed("time must be positive");
  params.rep.validate();
  const CentralizerDecomposition dec = centralizer_decomposition(model, gamma);
  if (dec.q > 3) throw UnsupportedModel("dim k(gamma) > 3 not supported by tensor quadrature");

  const double t = params.t;
  const double pref =
      std::exp(-gamma.a.squaredNorm() / (2.0 * t)) * std::pow(2.0 * M_PI * t, -0.5 * dec.p);

  OrbitalIntegralResult out;
  out.method = Method::explicit_formula;
  if (dec.q == 0) {
    const std::complex<double> g =
        integrand(model, dec, gamma, params, Eigen::VectorXd::Zero(0));
    if (std::abs(g.imag()) > 1e-10 * std::max(1.0, std::abs(g.real())))
      throw QuadratureNotConverged("integrand has a non-vanishing imaginary part");
    out.value = pref * g.real();
    out.abs_error_estimate = 0.0;
    out.nodes_used = 1;
    return out;
  }

  const std::complex<double> coarse = gauss_hermite_sum(model, dec, gamma, params, quad.nodes);
  const std::complex<double> fine = gauss_hermite_sum(model, dec, gamma, params, 2 * quad.nodes);
  if (std::abs(fine.imag()) > 1e-10 * std::max(1.0, std::abs(fine.real())))
    throw QuadratureNotConverged("integral has a non-vanishing imaginary part");
  out.value = pref * fine.real();
  out.abs_error_estimate = pref * std::abs(fine.real() - coarse.real());
  out.nodes_used = static_cast<long>(std::pow(quad.nodes, dec.q)) +
                   static_cast<long>(std::pow(2 * quad.nodes, dec.q));
  if (out.abs_error_estimate > quad.tol * std::max(std::abs(out.value), 1e-300))
    throw QuadratureNotConverged("Gauss-Hermite refinement did not converge");
  return out;
}

OrbitalIntegralResult rank_one_closed_form(const LieAlgebraModel& model,
                                           const SemisimpleElement& gamma,
                                           const HeatParameters& params) {
  if (gamma.a.norm() == 0.0) throw PreconditionFailed("rank-one form requires a != 0");
  params.rep.validate();
  const CentralizerDecomposition dec = centralizer_decomposition(model, gamma);

  // bracket condition [k(gamma), p_0] = 0
  for (Eigen::Index i = 0; i < dec.k_gamma.cols(); ++i)
    for (Eigen::Index j = 0; j < dec.p0.cols(); ++j)
      if (model.bracket(dec.k_gamma.col(i), dec.p0.col(j)).norm() > 1e-12)
        throw PreconditionFailed("[k(gamma), p_0] != 0");

  const Eigen::MatrixXd adk_inv = gamma.ad_k.transpose();
  double factor1 = 1.0;
  if (dec.z0_perp.cols() > 0) {
    const Eigen::MatrixXd ad_gamma = model.ad(gamma.a_full(model)).exp() * adk_inv;
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(dec.z0_perp.cols(), dec.z0_perp.cols()) -
        restrict_to(ad_gamma, dec.z0_perp);
    factor1 = 1.0 / std::sqrt(std::abs(M.partialPivLu().determinant()));
  }
  double factor_p = 1.0;
  if (dec.p0_perp_gamma.cols() > 0) {
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(dec.p0_perp_gamma.cols(), dec.p0_perp_gamma.cols()) -
        restrict_to(adk_inv, dec.p0_perp_gamma);
    factor_p = 1.0 / M.partialPivLu().determinant();
  }

  // Casimir of k_0 on itself and on E
  double tr_k0 = 0.0;
  Eigen::MatrixXcd c_k0_E = Eigen::MatrixXcd::Zero(params.rep.dim, params.rep.dim);
  for (Eigen::Index j = 0; j < dec.k0.cols(); ++j) {
    const Eigen::MatrixXd adv = restrict_to(model.ad(dec.k0.col(j)), dec.k0);
    tr_k0 += (adv * adv).trace();
    const Eigen::MatrixXcd r = params.rep.rho_of(dec.k0.col(j).tail(model.dim_k()));
    c_k0_E += r * r;
  }

  const double t = params.t;
  const Eigen::MatrixXcd expo =
      -t * (params.rep.shift + (tr_k0 / 48.0) * Eigen::MatrixXcd::Identity(params.rep.dim,
                                                                           params.rep.dim) +
            0.5 * c_k0_E);
  const std::complex<double> tr = (params.rep.rho_k_inv * expo.exp()).trace();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real())))
    throw InvalidRepresentation("trace factor has a non-vanishing imaginary part");

  OrbitalIntegralResult out;
  out.method = Method::rank_one;
  out.value = std::exp(-gamma.a.squaredNorm() / (2.0 * t)) * factor1 * factor_p *
              std::pow(2.0 * M_PI * t, -0.5 * dec.p) * tr.real();
  out.abs_error_estimate = 0.0;
  out.nodes_used = 0;
  return out;
}

OrbitalIntegralResult sl2_hyperbolic_closed_form(double a, double t, double shift) {
  if (a == 0.0) throw PreconditionFailed("closed form requires a != 0");
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  OrbitalIntegralResult out;
  out.method = Method::closed_sl2;
  out.value = std::exp(-a * a / (2.0 * t) - t * shift) /
              (std::sqrt(2.0 * M_PI * t) * 2.0 * std::sinh(std::abs(a) / 2.0));
  return out;
}

}  // namespace orbitalis
