#include "orbitalis/lie_algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "orbitalis/errors.hpp"

namespace orbitalis {

LieAlgebraModel::LieAlgebraModel(int dim_p, int dim_k, std::vector<Eigen::MatrixXd> ad_basis,
                                 std::string label)
    : m_(dim_p), n_(dim_k), ad_(std::move(ad_basis)), label_(std::move(label)) {
  if (m_ < 0 || n_ < 0 || m_ + n_ < 1) throw InvalidModel("model dimensions must be positive");
  if (ad_.size() != static_cast<size_t>(m_ + n_))
    throw InvalidModel("expected one ad matrix per basis vector");
  for (const auto& M : ad_)
    if (M.rows() != m_ + n_ || M.cols() != m_ + n_) throw InvalidModel("ad matrix shape mismatch");
  sig_.resize(m_ + n_);
  sig_.head(m_).setOnes();
  sig_.tail(n_).setConstant(-1.0);
}

Eigen::MatrixXd LieAlgebraModel::ad(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (u[i] != 0.0) M += u[i] * ad_[static_cast<size_t>(i)];
  return M;
}

Eigen::VectorXd LieAlgebraModel::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return ad(u) * v;
}

double LieAlgebraModel::form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return u.dot(sig_.asDiagonal() * v);
}

double LieAlgebraModel::validation_residual() const {
  const int d = dim();
  double res = 0.0;
  // antisymmetry
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        res = std::max(res, std::abs(structure_constant(i, j, l) + structure_constant(j, i, l)));
  // Jacobi via ad([e_i,e_j]) = [ad e_i, ad e_j]
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::VectorXd br = ad_[static_cast<size_t>(i)].col(j);
      Eigen::MatrixXd lhs = ad(br);
      Eigen::MatrixXd rhs = ad_[static_cast<size_t>(i)] * ad_[static_cast<size_t>(j)] -
                            ad_[static_cast<size_t>(j)] * ad_[static_cast<size_t>(i)];
      res = std::max(res, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  // bracket grading: [p,p] ⊂ k, [k,k] ⊂ k, [p,k] ⊂ p
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const bool pi = i < m_;
      const bool pj = j < m_;
      for (int l = 0; l < d; ++l) {
        const bool pl = l < m_;
        const bool allowed = (pi == pj) ? !pl : pl;
        if (!allowed) res = std::max(res, std::abs(structure_constant(i, j, l)));
      }
    }
  // ad-invariance of B: B([e_i,e_j],e_w) + B(e_j,[e_i,e_w]) = 0
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int w = 0; w < d; ++w)
        res = std::max(res, std::abs(structure_constant(i, j, w) * sig_[w] +
                                     structure_constant(i, w, j) * sig_[j]));
  return res;
}

void LieAlgebraModel::validate(double tol) const {
  const double res = validation_residual();
  if (res > tol)
    throw InvalidModel("model '" + label_ + "' violates Lie algebra invariants, residual " +
                       std::to_string(res));
}

Eigen::VectorXd SemisimpleElement::a_full(const LieAlgebraModel& model) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(model.dim());
  full.head(model.dim_p()) = a;
  return full;
}

double SemisimpleElement::validation_residual(const LieAlgebraModel& model) const {
  const int m = model.dim_p();
  const int n = model.dim_k();
  double res = 0.0;
  Eigen::MatrixXd S = model.form_matrix();
  res = std::max(res, (ad_k.transpose() * S * ad_k - S).cwiseAbs().maxCoeff());
  if (n > 0 && m > 0) {
    res = std::max(res, ad_k.topRightCorner(m, n).cwiseAbs().maxCoeff());
    res = std::max(res, ad_k.bottomLeftCorner(n, m).cwiseAbs().maxCoeff());
  }
  res = std::max(res, (ad_k * a_full(model) - a_full(model)).cwiseAbs().maxCoeff());
  return res;
}

void SemisimpleElement::validate(const LieAlgebraModel& model, double tol) const {
  if (a.size() != model.dim_p() || ad_k.rows() != model.dim() || ad_k.cols() != model.dim())
    throw InvalidModel("semisimple element shape mismatch");
  const double res = validation_residual(model);
  if (res > tol)
    throw NonCommutingData("semisimple element invariants violated, residual " +
                           std::to_string(res));
}

SemisimpleElement identity_element(const LieAlgebraModel& model) {
  SemisimpleElement g;
  g.a = Eigen::VectorXd::Zero(model.dim_p());
  g.ad_k = Eigen::MatrixXd::Identity(model.dim(), model.dim());
  g.kind = ElementKind::identity;
  return g;
}

SemisimpleElement sl2_hyperbolic(const LieAlgebraModel& sl2, double a) {
  SemisimpleElement g;
  g.a = Eigen::VectorXd::Zero(sl2.dim_p());
  g.a[0] = a;
  g.ad_k = Eigen::MatrixXd::Identity(sl2.dim(), sl2.dim());
  g.kind = a == 0.0 ? ElementKind::identity : ElementKind::hyperbolic;
  return g;
}

SemisimpleElement sl2_elliptic(const LieAlgebraModel& sl2, double phi) {
  SemisimpleElement g;
  g.a = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(3);
  e3[2] = 1.0;
  g.ad_k = (phi * sl2.ad(e3)).exp();
  g.kind = ElementKind::elliptic;
  return g;
}

SemisimpleElement abelian_translation(const LieAlgebraModel& model, const Eigen::VectorXd& a) {
  SemisimpleElement g;
  g.a = a;
  g.ad_k = Eigen::MatrixXd::Identity(model.dim(), model.dim());
  g.kind = a.norm() == 0.0 ? ElementKind::identity : ElementKind::hyperbolic;
  return g;
}

LieAlgebraModel build_sl2_model() {
  return build_from_brackets(2, 1,
                             {{{0, 1, 2, 1.0}}, {{1, 2, 0, -1.0}}, {{2, 0, 1, -1.0}}},
                             "sl2(R)");
}

LieAlgebraModel build_abelian_model(int m) {
  if (m < 1) throw InvalidModel("abelian model needs m >= 1");
  std::vector<Eigen::MatrixXd> ad(static_cast<size_t>(m), Eigen::MatrixXd::Zero(m, m));
  return LieAlgebraModel(m, 0, std::move(ad), "R^" + std::to_string(m));
}

LieAlgebraModel build_from_brackets(int dim_p, int dim_k,
                                    const std::vector<std::array<double, 4>>& brackets,
                                    const std::string& label) {
  const int d = dim_p + dim_k;
  std::vector<Eigen::MatrixXd> ad(static_cast<size_t>(d), Eigen::MatrixXd::Zero(d, d));
  for (const auto& b : brackets) {
    const int i = static_cast<int>(b[0]);
    const int j = static_cast<int>(b[1]);
    const int l = static_cast<int>(b[2]);
    if (i < 0 || i >= d || j < 0 || j >= d || l < 0 || l >= d)
      throw InvalidModel("bracket index out of range");
    ad[static_cast<size_t>(i)](l, j) = b[3];
    ad[static_cast<size_t>(j)](l, i) = -b[3];
  }
  return LieAlgebraModel(dim_p, dim_k, std::move(ad), label);
}

LieAlgebraModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("dim_p") || !j.contains("dim_k") || !j.contains("brackets"))
    throw InvalidModel("model file must contain dim_p, dim_k, brackets");
  const int m = j["dim_p"].get<int>();
  const int n = j["dim_k"].get<int>();
  std::vector<std::array<double, 4>> brackets;
  for (const auto& row : j["brackets"]) {
    if (!row.is_array() || row.size() != 4) throw InvalidModel("bracket rows must be [i,j,l,value]");
    // file uses 1-based indices
    brackets.push_back({row[0].get<double>() - 1, row[1].get<double>() - 1,
                        row[2].get<double>() - 1, row[3].get<double>()});
  }
  LieAlgebraModel model =
      build_from_brackets(m, n, brackets, j.value("label", std::string("unnamed")));
  model.validate(1e-12);
  return model;
}

std::pair<double, double> casimir_constants(const LieAlgebraModel& model) {
  const int m = model.dim_p();
  const int n = model.dim_k();
  double tr_p = 0.0;
  double tr_k = 0.0;
  for (int i = m; i < m + n; ++i) {
    const Eigen::MatrixXd& A = model.ad_basis(i);
    if (m > 0) tr_p += (A.topLeftCorner(m, m) * A.topLeftCorner(m, m)).trace();
    if (n > 0) tr_k += (A.bottomRightCorner(n, n) * A.bottomRightCorner(n, n)).trace();
  }
  return {tr_p, tr_k};
}

Eigen::MatrixXd joint_kernel(const std::vector<Eigen::MatrixXd>& operators, int dim,
                             double cutoff) {
  if (operators.empty()) return Eigen::MatrixXd::Identity(dim, dim);
  Eigen::Index rows = 0;
  for (const auto& M : operators) rows += M.rows();
  Eigen::MatrixXd stacked(rows, dim);
  Eigen::Index r = 0;
  for (const auto& M : operators) {
    stacked.middleRows(r, M.rows()) = M;
    r += M.rows();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] > cutoff) ++rank;
  return svd.matrixV().rightCols(dim - rank);
}

namespace {

// Orthogonal complement of span(W) inside span(S); both inputs orthonormal.
Eigen::MatrixXd complement_within(const Eigen::MatrixXd& W, const Eigen::MatrixXd& S) {
  if (S.cols() == 0) return S;
  Eigen::MatrixXd R = S;
  if (W.cols() > 0) R -= W * (W.transpose() * S);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullU);
  const Eigen::Index want = S.cols() - W.cols();
  Eigen::MatrixXd out(S.rows(), std::max<Eigen::Index>(want, 0));
  Eigen::Index taken = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size() && taken < want; ++k) {
    if (svd.singularValues()[k] > 0.5) out.col(taken++) = svd.matrixU().col(k);
  }
  if (taken != out.cols()) throw SingularCentralizer("subspace complement rank deficiency");
  return out;
}

Eigen::MatrixXd projector_onto_block(int dim, int lo, int len) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dim, dim);
  P.block(lo, lo, len, len).setIdentity();
  return P;
}

}  // namespace

CentralizerDecomposition centralizer_decomposition(const LieAlgebraModel& model,
                                                   const SemisimpleElement& gamma,
                                                   double svd_cutoff) {
  const int d = model.dim();
  const int m = model.dim_p();
  const int n = model.dim_k();
  {
    const Eigen::VectorXd af = gamma.a_full(model);
    if ((gamma.ad_k * af - af).norm() > 1e-10)
      throw NonCommutingData("Ad(k)a != a for the supplied element");
  }
  const Eigen::MatrixXd A = model.ad(gamma.a_full(model));
  const Eigen::MatrixXd K = gamma.ad_k - Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd Pp = projector_onto_block(d, 0, m);
  const Eigen::MatrixXd Pk = projector_onto_block(d, m, n);

  CentralizerDecomposition dec;
  dec.p_gamma = joint_kernel({A, K, Pk}, d, svd_cutoff);
  dec.k_gamma = joint_kernel({A, K, Pp}, d, svd_cutoff);
  dec.z0 = joint_kernel({A}, d, svd_cutoff);
  dec.p0 = joint_kernel({A, Pk}, d, svd_cutoff);
  dec.k0 = joint_kernel({A, Pp}, d, svd_cutoff);
  dec.z0_perp = complement_within(dec.z0, Eigen::MatrixXd::Identity(d, d));
  dec.p0_perp_gamma = complement_within(dec.p_gamma, dec.p0);
  dec.k0_perp_gamma = complement_within(dec.k_gamma, dec.k0);
  dec.z0_perp_gamma = Eigen::MatrixXd(d, dec.p0_perp_gamma.cols() + dec.k0_perp_gamma.cols());
  dec.z0_perp_gamma << dec.p0_perp_gamma, dec.k0_perp_gamma;
  Eigen::MatrixXd p_all = Eigen::MatrixXd::Identity(d, d).leftCols(m);
  dec.p_perp_gamma = complement_within(dec.p_gamma, p_all);
  dec.p = static_cast<int>(dec.p_gamma.cols());
  dec.q = static_cast<int>(dec.k_gamma.cols());
  if (dec.p + dec.q != dec.p0.cols() + dec.k0.cols() - dec.z0_perp_gamma.cols())
    throw SingularCentralizer("inconsistent centralizer dimensions");
  return dec;
}

}  // namespace orbitalis
