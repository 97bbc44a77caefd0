#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

namespace orbitalis {

/// Reductive Lie algebra data on an orthonormal basis: the first dim_p basis
/// vectors span p (form +1), the remaining dim_k span k (form -1). Structure
/// constants satisfy [e_i, e_j] = sum_l c(i,j,l) e_l.
class LieAlgebraModel {
 public:
  LieAlgebraModel(int dim_p, int dim_k, std::vector<Eigen::MatrixXd> ad_basis, std::string label);

  int dim_p() const { return m_; }
  int dim_k() const { return n_; }
  int dim() const { return m_ + n_; }
  const std::string& label() const { return label_; }

  /// Matrix of ad(e_i) on the basis: column j holds the coordinates of [e_i, e_j].
  const Eigen::MatrixXd& ad_basis(int i) const { return ad_[static_cast<size_t>(i)]; }

  /// ad(u) for u in basis coordinates.
  Eigen::MatrixXd ad(const Eigen::VectorXd& u) const;

  /// Bracket [u, v] in coordinates.
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  /// Invariant form B: +1 on p-basis, -1 on k-basis directions.
  double form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  Eigen::VectorXd form_signature() const { return sig_; }
  Eigen::MatrixXd form_matrix() const { return sig_.asDiagonal(); }

  /// Cartan involution: -1 on p, +1 on k.
  Eigen::MatrixXd theta_matrix() const { return (-sig_).asDiagonal(); }

  /// Structure constant c(i,j,l).
  double structure_constant(int i, int j, int l) const { return ad_[static_cast<size_t>(i)](l, j); }

  /// Largest residual among antisymmetry, Jacobi, bracket grading and
  /// ad-invariance of B checks.
  double validation_residual() const;
  /// Throws InvalidModel if validation_residual() exceeds the tolerance.
  void validate(double tol = 1e-12) const;

 private:
  int m_;
  int n_;
  std::vector<Eigen::MatrixXd> ad_;
  Eigen::VectorXd sig_;
  std::string label_;
};

enum class ElementKind { identity, hyperbolic, elliptic, mixed };

/// Semisimple group element in normal form e^a k^{-1} with Ad(k)a = a. Only
/// the adjoint matrix of k is stored; downstream formulas never need k itself.
struct SemisimpleElement {
  Eigen::VectorXd a;    // coordinates in p (length dim_p)
  Eigen::MatrixXd ad_k; // Ad(k) on the full algebra
  ElementKind kind = ElementKind::identity;

  /// Full-algebra coordinate vector of a (zeros on the k block).
  Eigen::VectorXd a_full(const LieAlgebraModel& model) const;
  double a_norm() const { return a.norm(); }

  /// Residual of the element invariants (B preservation, block structure,
  /// Ad(k)a = a) against the given model.
  double validation_residual(const LieAlgebraModel& model) const;
  void validate(const LieAlgebraModel& model, double tol = 1e-12) const;
};

SemisimpleElement identity_element(const LieAlgebraModel& model);
/// gamma = e^{a e_1} in sl2 (hyperbolic for a != 0).
SemisimpleElement sl2_hyperbolic(const LieAlgebraModel& sl2, double a);
/// gamma = k_phi^{-1} with k_phi = exp(phi e_3) in sl2 (elliptic for phi not in 2 pi Z).
SemisimpleElement sl2_elliptic(const LieAlgebraModel& sl2, double phi);
/// Translation element of an abelian model.
SemisimpleElement abelian_translation(const LieAlgebraModel& model, const Eigen::VectorXd& a);

/// Orthonormal bases (as coordinate columns) of the subspaces entering the
/// orbital-integral density, plus p = dim p(gamma), q = dim k(gamma).
struct CentralizerDecomposition {
  Eigen::MatrixXd p_gamma;        // z(gamma) ∩ p
  Eigen::MatrixXd k_gamma;        // z(gamma) ∩ k
  Eigen::MatrixXd z0;             // ker ad(a)
  Eigen::MatrixXd p0;             // z0 ∩ p
  Eigen::MatrixXd k0;             // z0 ∩ k
  Eigen::MatrixXd z0_perp;        // orthogonal of z0 in g
  Eigen::MatrixXd p0_perp_gamma;  // orthogonal of p(gamma) in p0
  Eigen::MatrixXd k0_perp_gamma;  // orthogonal of k(gamma) in k0
  Eigen::MatrixXd z0_perp_gamma;  // p0_perp_gamma ⊕ k0_perp_gamma
  Eigen::MatrixXd p_perp_gamma;   // orthogonal of p(gamma) in p
  int p = 0;
  int q = 0;
};

LieAlgebraModel build_sl2_model();
LieAlgebraModel build_abelian_model(int m);
/// Generic constructor from a sparse list of brackets (i,j,l 0-based).
LieAlgebraModel build_from_brackets(int dim_p, int dim_k,
                                    const std::vector<std::array<double, 4>>& brackets,
                                    const std::string& label);

/// Load from the JSON structure-constant format; rejects invalid models.
LieAlgebraModel load_model_json(const std::string& path);

/// (tr^p[C^{k,p}], tr^k[C^{k,k}]).
std::pair<double, double> casimir_constants(const LieAlgebraModel& model);

CentralizerDecomposition centralizer_decomposition(const LieAlgebraModel& model,
                                                   const SemisimpleElement& gamma,
                                                   double svd_cutoff = 1e-9);

/// Orthonormal basis of the joint kernel of the stacked operators; columns
/// restricted to lie in the span of `within` if given.
Eigen::MatrixXd joint_kernel(const std::vector<Eigen::MatrixXd>& operators, int dim,
                             double cutoff = 1e-9);

}  // namespace orbitalis
