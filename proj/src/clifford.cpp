#include "orbitalis/clifford.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "orbitalis/errors.hpp"

namespace orbitalis {

namespace {

int sign_below(unsigned mask, int j) {
  const unsigned below = mask & ((1u << j) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

}  // namespace

ExteriorAlgebra::ExteriorAlgebra(int d) : d_(d) {
  const int N = 1 << d;
  wedge_.reserve(static_cast<size_t>(d));
  contract_.reserve(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    for (unsigned mask = 0; mask < static_cast<unsigned>(N); ++mask) {
      const double s = sign_below(mask, j);
      if (!(mask & (1u << j))) W(mask | (1u << j), mask) = s;
      else C(mask & ~(1u << j), mask) = s;
    }
    wedge_.push_back(std::move(W));
    contract_.push_back(std::move(C));
  }
}

Eigen::MatrixXd ExteriorAlgebra::number() const {
  Eigen::VectorXd diag(dim());
  for (int mask = 0; mask < dim(); ++mask)
    diag[mask] = std::popcount(static_cast<unsigned>(mask));
  return diag.asDiagonal();
}

Eigen::MatrixXd ExteriorAlgebra::parity() const {
  Eigen::VectorXd diag(dim());
  for (int mask = 0; mask < dim(); ++mask)
    diag[mask] = (std::popcount(static_cast<unsigned>(mask)) % 2 == 0) ? 1.0 : -1.0;
  return diag.asDiagonal();
}

CliffordModel::CliffordModel(const LieAlgebraModel& model) : model_(model), ext_(model.dim()) {}

Eigen::MatrixXd CliffordModel::c(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim(), dim());
  const Eigen::VectorXd sig = model_.form_signature();
  for (int i = 0; i < model_.dim(); ++i)
    if (u[i] != 0.0) M += u[i] * (sig[i] * ext_.wedge(i) - ext_.contract(i));
  return M;
}

Eigen::MatrixXd CliffordModel::chat(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim(), dim());
  const Eigen::VectorXd sig = model_.form_signature();
  for (int i = 0; i < model_.dim(); ++i)
    if (u[i] != 0.0) M += u[i] * (sig[i] * ext_.wedge(i) + ext_.contract(i));
  return M;
}

Eigen::MatrixXd CliffordModel::c_basis(int i) const {
  return model_.form_signature()[i] * ext_.wedge(i) - ext_.contract(i);
}

Eigen::MatrixXd CliffordModel::chat_basis(int i) const {
  return model_.form_signature()[i] * ext_.wedge(i) + ext_.contract(i);
}

Eigen::MatrixXd CliffordModel::chat_kappa() const {
  const int d = model_.dim();
  const Eigen::VectorXd sig = model_.form_signature();
  std::vector<Eigen::MatrixXd> ch(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) ch[static_cast<size_t>(i)] = chat_basis(i);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        // kappa(e_i^*, e_j^*, e_k^*) with e_i^* = sign_i e_i and
        // kappa(a,b,c) = B([a,b],c)
        const double kap =
            sig[i] * sig[j] * sig[k] * sig[k] * model_.structure_constant(i, j, k);
        if (kap != 0.0)
          out += (kap / 6.0) * (ch[static_cast<size_t>(i)] * ch[static_cast<size_t>(j)] *
                                ch[static_cast<size_t>(k)]);
      }
  return out;
}

double CliffordModel::relations_residual() const {
  const int d = model_.dim();
  const int N = dim();
  const Eigen::VectorXd sig = model_.form_signature();
  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double B = (i == j) ? sig[i] : 0.0;
      const Eigen::MatrixXd ci = c_basis(i), cj = c_basis(j);
      const Eigen::MatrixXd hi = chat_basis(i), hj = chat_basis(j);
      res = std::max(res, (ci * cj + cj * ci + 2.0 * B * Eigen::MatrixXd::Identity(N, N))
                              .cwiseAbs()
                              .maxCoeff());
      res = std::max(res, (hi * hj + hj * hi - 2.0 * B * Eigen::MatrixXd::Identity(N, N))
                              .cwiseAbs()
                              .maxCoeff());
      res = std::max(res, (ci * hj + hj * ci).cwiseAbs().maxCoeff());
    }
  return res;
}

double kostant_dirac_residual(const LieAlgebraModel& model,
                              const std::vector<Eigen::MatrixXd>& rep) {
  const int d = model.dim();
  const int m = model.dim_p();
  if (rep.size() != static_cast<size_t>(d))
    throw InvalidRepresentation("expected one representation matrix per basis vector");
  const int dimE = static_cast<int>(rep[0].rows());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(dimE, dimE);
      for (int l = 0; l < d; ++l) {
        const double cl = model.structure_constant(i, j, l);
        if (cl != 0.0) lhs += cl * rep[static_cast<size_t>(l)];
      }
      const Eigen::MatrixXd rhs = rep[static_cast<size_t>(i)] * rep[static_cast<size_t>(j)] -
                                  rep[static_cast<size_t>(j)] * rep[static_cast<size_t>(i)];
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidRepresentation("bracket relations violated by the representation");
    }

  CliffordModel cl(model);
  const Eigen::VectorXd sig = model.form_signature();
  const int N = cl.dim();
  Eigen::MatrixXd Dhat = Eigen::MatrixXd::Zero(N * dimE, N * dimE);
  for (int i = 0; i < d; ++i) {
    // chat(e_i^*) = sign_i chat(e_i)
    const Eigen::MatrixXd ch = sig[i] * cl.chat_basis(i);
    Dhat += Eigen::kroneckerProduct(ch, rep[static_cast<size_t>(i)]);
  }
  Dhat -= 0.5 * Eigen::kroneckerProduct(cl.chat_kappa(), Eigen::MatrixXd::Identity(dimE, dimE));

  Eigen::MatrixXd casimirE = Eigen::MatrixXd::Zero(dimE, dimE);
  for (int i = 0; i < d; ++i) {
    const Eigen::MatrixXd sq = rep[static_cast<size_t>(i)] * rep[static_cast<size_t>(i)];
    casimirE += (i < m) ? -sq : sq;
  }
  auto [tr_p, tr_k] = casimir_constants(model);
  const Eigen::MatrixXd target =
      -Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(N, N), casimirE) -
      (tr_p / 8.0 + tr_k / 24.0) * Eigen::MatrixXd::Identity(N * dimE, N * dimE);
  return (Dhat * Dhat - target).cwiseAbs().maxCoeff();
}

LieAlgebraModel rotate_p_basis(const LieAlgebraModel& model, const Eigen::MatrixXd& rotation) {
  const int d = model.dim();
  const int m = model.dim_p();
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(d, d);
  T.topLeftCorner(m, m) = rotation;
  std::vector<Eigen::MatrixXd> ad(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    // new basis e'_i = sum_j T_{ji} e_j; operators expressed in new coordinates
    ad[static_cast<size_t>(i)] = T.transpose() * model.ad(T.col(i)) * T;
  }
  return LieAlgebraModel(m, model.dim_k(), std::move(ad), model.label() + "+rotated");
}

std::vector<Eigen::MatrixXd> rotate_p_basis_rep(const LieAlgebraModel& model,
                                                const std::vector<Eigen::MatrixXd>& rep,
                                                const Eigen::MatrixXd& rotation) {
  const int d = model.dim();
  const int m = model.dim_p();
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(d, d);
  T.topLeftCorner(m, m) = rotation;
  std::vector<Eigen::MatrixXd> out(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rep[0].rows(), rep[0].cols());
    for (int j = 0; j < d; ++j)
      if (T(j, i) != 0.0) M += T(j, i) * rep[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = M;
  }
  return out;
}

SupertraceIdentity lambda_supertrace_identity(const Eigen::MatrixXd& u) {
  const int d = static_cast<int>(u.rows());
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(u);
  if (std::abs(lu.determinant()) < 1e-12) throw SingularInput("u must be invertible");
  const Eigen::MatrixXd uinv = lu.inverse();
  const Eigen::MatrixXd A = uinv.transpose();  // dual action on p*

  SupertraceIdentity out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd minor(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor(r, c) = A(idx[static_cast<size_t>(r)],
                                                  idx[static_cast<size_t>(c)]);
    const double det = k == 0 ? 1.0 : minor.determinant();
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    out.lhs += sgn * det;
    out.lhs_n += sgn * k * det;
  }
  out.rhs = (Eigen::MatrixXd::Identity(d, d) - uinv).determinant();
  // d/ds det(1 - u^{-1} e^s) at s=0 from the eigenvalues of u^{-1}
  Eigen::EigenSolver<Eigen::MatrixXd> es(uinv);
  std::complex<double> acc = 0.0;
  for (int j = 0; j < d; ++j) {
    std::complex<double> prod = -es.eigenvalues()[j];
    for (int l = 0; l < d; ++l)
      if (l != j) prod *= 1.0 - es.eigenvalues()[l];
    acc += prod;
  }
  out.rhs_n = acc.real();
  return out;
}

std::vector<std::vector<int>> monomial_basis(int n, int D) {
  std::vector<std::vector<int>> basis;
  if (n == 0) return basis;
  std::vector<int> cur(static_cast<size_t>(n), 0);
  // enumerate by total degree, lexicographic within a degree
  std::function<void(int, int)> fill = [&](int pos, int remaining) {
    if (pos == n - 1) {
      cur[static_cast<size_t>(pos)] = remaining;
      basis.push_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur[static_cast<size_t>(pos)] = v;
      fill(pos + 1, remaining - v);
    }
  };
  for (int deg = 0; deg <= D; ++deg) fill(0, deg);
  return basis;
}

namespace {

struct LadderOperators {
  std::vector<Eigen::MatrixXd> lower;  // a_j: Y^a -> a_j Y^{a-e_j}
  std::vector<Eigen::MatrixXd> raise;  // a_j^dag: Y^a -> Y^{a+e_j}, cut at D
  Eigen::VectorXd degree;
  Eigen::VectorXd weight;  // ||Y^alpha||^2 = prod alpha_j!
  int dimS = 0;
};

LadderOperators build_ladders(int n, int D) {
  const auto basis = monomial_basis(n, D);
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  LadderOperators L;
  L.dimS = static_cast<int>(basis.size());
  L.degree.resize(L.dimS);
  L.weight.resize(L.dimS);
  L.lower.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(L.dimS, L.dimS));
  L.raise.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(L.dimS, L.dimS));
  for (int i = 0; i < L.dimS; ++i) {
    const auto& alpha = basis[static_cast<size_t>(i)];
    int deg = 0;
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      deg += alpha[static_cast<size_t>(j)];
      for (int v = 2; v <= alpha[static_cast<size_t>(j)]; ++v) w *= v;
    }
    L.degree[i] = deg;
    L.weight[i] = w;
    for (int j = 0; j < n; ++j) {
      if (alpha[static_cast<size_t>(j)] > 0) {
        auto lowered = alpha;
        --lowered[static_cast<size_t>(j)];
        L.lower[static_cast<size_t>(j)](index.at(lowered), i) =
            alpha[static_cast<size_t>(j)];
      }
      if (deg < D) {
        auto raised = alpha;
        ++raised[static_cast<size_t>(j)];
        L.raise[static_cast<size_t>(j)](index.at(raised), i) = 1.0;
      }
    }
  }
  return L;
}

}  // namespace

TruncatedWeylComplex build_weyl_complex(int n, int D) {
  if (n < 1 || D < 3) throw PreconditionFailed("Weyl complex needs n >= 1, D >= 3");
  const LadderOperators L = build_ladders(n, D);
  const ExteriorAlgebra ext(n);
  const int NL = ext.dim();
  const int dim = NL * L.dimS;

  TruncatedWeylComplex w;
  w.n = n;
  w.degree_cap = D;
  w.s_basis = monomial_basis(n, D);
  w.dbar = Eigen::MatrixXd::Zero(dim, dim);
  w.dbar_star = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    w.dbar += Eigen::kroneckerProduct(ext.wedge(j), L.lower[static_cast<size_t>(j)]);
    w.dbar_star += Eigen::kroneckerProduct(ext.contract(j), L.raise[static_cast<size_t>(j)]);
  }
  w.laplacian = Eigen::MatrixXd::Zero(dim, dim);
  w.y_squared = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::MatrixXd idL = Eigen::MatrixXd::Identity(NL, NL);
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd Y =
        (L.lower[static_cast<size_t>(j)] + L.raise[static_cast<size_t>(j)]) / std::sqrt(2.0);
    const Eigen::MatrixXd Dy =
        (L.lower[static_cast<size_t>(j)] - L.raise[static_cast<size_t>(j)]) / std::sqrt(2.0);
    w.laplacian += Eigen::kroneckerProduct(idL, Eigen::MatrixXd(Dy * Dy));
    w.y_squared += Eigen::kroneckerProduct(idL, Eigen::MatrixXd(Y * Y));
  }
  w.number_lambda =
      Eigen::kroneckerProduct(ext.number(), Eigen::MatrixXd::Identity(L.dimS, L.dimS));
  w.number_s = Eigen::kroneckerProduct(idL, Eigen::MatrixXd(L.degree.asDiagonal()));
  w.weight.resize(dim);
  w.s_degree.resize(dim);
  for (int l = 0; l < NL; ++l)
    for (int s = 0; s < L.dimS; ++s) {
      w.weight[l * L.dimS + s] = L.weight[s];
      w.s_degree[l * L.dimS + s] = L.degree[s];
    }
  return w;
}

WeitzenbockReport verify_weitzenbock(int n, int D) {
  const TruncatedWeylComplex w = build_weyl_complex(n, D);
  const int dim = w.dim();
  const Eigen::MatrixXd H = w.dbar * w.dbar_star + w.dbar_star * w.dbar;
  const Eigen::MatrixXd rhs =
      0.5 * (-w.laplacian + w.y_squared - n * Eigen::MatrixXd::Identity(dim, dim)) +
      w.number_lambda;

  // columns where truncation is exact
  std::vector<int> inner;
  for (int c = 0; c < dim; ++c)
    if (w.s_degree[c] <= D - 2) inner.push_back(c);

  WeitzenbockReport report;
  const Eigen::MatrixXd diff = H - rhs;
  for (int col : inner)
    report.commutator_residual =
        std::max(report.commutator_residual, diff.col(col).cwiseAbs().maxCoeff());
  // the squares vanish identically on the whole truncated space: lowering
  // never truncates and raising truncates symmetrically
  report.square_residual = std::max((w.dbar * w.dbar).cwiseAbs().maxCoeff(),
                                    (w.dbar_star * w.dbar_star).cwiseAbs().maxCoeff());

  // adjointness wrt the weighted inner product ||e^I Y^alpha||^2 = prod alpha_j!
  const Eigen::MatrixXd W = w.weight.asDiagonal();
  report.adjoint_residual = (w.dbar.transpose() * W - W * w.dbar_star).cwiseAbs().maxCoeff();

  // spectrum on the exact zone; symmetrize with W^{1/2}
  const int ni = static_cast<int>(inner.size());
  Eigen::MatrixXd Hs(ni, ni);
  for (int r = 0; r < ni; ++r)
    for (int c = 0; c < ni; ++c)
      Hs(r, c) = std::sqrt(w.weight[inner[static_cast<size_t>(r)]]) *
                 H(inner[static_cast<size_t>(r)], inner[static_cast<size_t>(c)]) /
                 std::sqrt(w.weight[inner[static_cast<size_t>(c)]]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Hs + Hs.transpose()));
  report.kernel_dim = 0;
  report.spectral_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < ni; ++k) {
    const double lam = es.eigenvalues()[k];
    if (lam < 0.5) ++report.kernel_dim;
    else report.spectral_gap = std::min(report.spectral_gap, lam);
  }
  return report;
}

Eigen::MatrixXd heat_coefficient_map(int n, int D, double c) {
  const auto basis = monomial_basis(n, D);
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& alpha = basis[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const int aj = alpha[static_cast<size_t>(j)];
      if (aj >= 2) {
        auto lowered = alpha;
        lowered[static_cast<size_t>(j)] -= 2;
        delta(index.at(lowered), i) = aj * (aj - 1);
      }
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 1; k <= D / 2 + 1; ++k) {
    term = (c / k) * (delta * term);
    out += term;
  }
  return out;
}

double bargmann_roundtrip(int n, int D, const Eigen::VectorXd& coefficients) {
  const auto basis = monomial_basis(n, D);
  const int dim = static_cast<int>(basis.size());
  if (coefficients.size() != dim)
    throw PreconditionFailed("coefficient vector does not match the monomial basis");
  Eigen::VectorXd scale_up(dim), scale_down(dim);
  for (int i = 0; i < dim; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) deg += basis[static_cast<size_t>(i)][static_cast<size_t>(j)];
    scale_up[i] = std::pow(std::sqrt(2.0), deg);
    scale_down[i] = 1.0 / scale_up[i];
  }
  const Eigen::MatrixXd forward = heat_coefficient_map(n, D, -0.5);
  const Eigen::MatrixXd backward = heat_coefficient_map(n, D, 0.5);
  // T: P -> Q with TP = pi^{-n/4} e^{-|Y|^2/2} Q(Y), Q = scale_sqrt2(e^{-Delta/2} P)
  const Eigen::VectorXd q = scale_up.asDiagonal() * (forward * coefficients);
  // B: Q -> e^{Delta/2}(Q(Y/sqrt2))
  const Eigen::VectorXd back = backward * (scale_down.asDiagonal() * q);
  return (back - coefficients).cwiseAbs().maxCoeff();
}

}  // namespace orbitalis
