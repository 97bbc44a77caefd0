#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "orbitalis/lie_algebra.hpp"

namespace orbitalis {

/// Exterior algebra over R^d with the subset basis ordered by bitmask;
/// signs follow left exterior/interior multiplication.
class ExteriorAlgebra {
 public:
  explicit ExteriorAlgebra(int d);

  int d() const { return d_; }
  int dim() const { return 1 << d_; }

  /// e^j wedge (left multiplication by the j-th dual basis vector).
  const Eigen::MatrixXd& wedge(int j) const { return wedge_[static_cast<size_t>(j)]; }
  /// Contraction i_{e_j}.
  const Eigen::MatrixXd& contract(int j) const { return contract_[static_cast<size_t>(j)]; }
  /// Number operator (degree).
  Eigen::MatrixXd number() const;
  /// Parity (-1)^degree.
  Eigen::MatrixXd parity() const;

 private:
  int d_;
  std::vector<Eigen::MatrixXd> wedge_;
  std::vector<Eigen::MatrixXd> contract_;
};

/// Clifford generators on Lambda(g*) for the invariant form of a model:
/// c(u) = phi(u) wedge - i_u, chat(u) = phi(u) wedge + i_u, with phi the
/// B-duality (phi e_i = sign_i e^i).
class CliffordModel {
 public:
  explicit CliffordModel(const LieAlgebraModel& model);

  const LieAlgebraModel& model() const { return model_; }
  const ExteriorAlgebra& exterior() const { return ext_; }
  int dim() const { return ext_.dim(); }

  Eigen::MatrixXd c(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd chat(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd c_basis(int i) const;
  Eigen::MatrixXd chat_basis(int i) const;

  /// chat of the structure 3-form kappa(a,b,c) = B([a,b],c), assembled with
  /// the B-dual starred bases and the 1/6 normalization.
  Eigen::MatrixXd chat_kappa() const;

  /// Max residual of the generator relations [c,c] = -2B, [chat,chat] = 2B,
  /// [c,chat] = 0 over all basis pairs.
  double relations_residual() const;

 private:
  LieAlgebraModel model_;
  ExteriorAlgebra ext_;
};

/// || Dhat^2 - (-C^{g,E} - tr^p[C^{k,p}]/8 - tr^k[C^{k,k}]/24) ||_max for the
/// Kostant Dirac operator Dhat = sum_i chat(e_i^*) rho(e_i) - chat(kappa)/2.
double kostant_dirac_residual(const LieAlgebraModel& model,
                              const std::vector<Eigen::MatrixXd>& rep);

/// Model with the p-basis rotated by an orthogonal matrix (k-basis fixed);
/// used for basis-independence checks.
LieAlgebraModel rotate_p_basis(const LieAlgebraModel& model, const Eigen::MatrixXd& rotation);
std::vector<Eigen::MatrixXd> rotate_p_basis_rep(const LieAlgebraModel& model,
                                                const std::vector<Eigen::MatrixXd>& rep,
                                                const Eigen::MatrixXd& rotation);

struct SupertraceIdentity {
  double lhs = 0.0;      // alternating trace of the induced map on Lambda(p*)
  double rhs = 0.0;      // det(1 - u^{-1})
  double lhs_n = 0.0;    // N-weighted alternating trace
  double rhs_n = 0.0;    // d/ds det(1 - u^{-1} e^s) at 0
};

/// Both sides of the exterior-algebra supertrace identity for an invertible u.
SupertraceIdentity lambda_supertrace_identity(const Eigen::MatrixXd& u);

/// Polynomial forms e^I (x) Y^alpha with |alpha| <= D, carrying the matrices
/// of the Bargmann-transported operators in the ladder realization:
/// multiplication by Y_j is (a_j + a_j^dag)/sqrt(2) and d/dY_j is
/// (a_j - a_j^dag)/sqrt(2), so mat(dbar) = mat(d^V) and mat(dbar*) = mat(i_Y).
struct TruncatedWeylComplex {
  int n = 1;
  int degree_cap = 3;
  std::vector<std::vector<int>> s_basis;  // monomial multi-indices
  Eigen::MatrixXd dbar;
  Eigen::MatrixXd dbar_star;
  Eigen::MatrixXd laplacian;      // Delta^V
  Eigen::MatrixXd y_squared;      // |Y|^2 .
  Eigen::MatrixXd number_lambda;  // N^Lambda
  Eigen::MatrixXd number_s;       // N^S
  Eigen::VectorXd weight;         // ||e^I Y^alpha||^2 = prod alpha_j!
  Eigen::VectorXd s_degree;       // |alpha| per basis vector

  int dim() const { return static_cast<int>(weight.size()); }
};

TruncatedWeylComplex build_weyl_complex(int n, int D);

struct WeitzenbockReport {
  double commutator_residual = 0.0;  // [dbar, dbar*] vs harmonic oscillator + N
  double square_residual = 0.0;      // dbar^2 and (dbar*)^2 on the exact zone
  double adjoint_residual = 0.0;     // dbar* vs the weighted adjoint of dbar
  int kernel_dim = 0;
  double spectral_gap = 0.0;
};

/// Finite-dimensional Weitzenbock check on Lambda(R^n) tensor polynomials of
/// degree <= D, in the Bargmann-transported (ladder) realization. The
/// identity is verified on inputs of S-degree <= D-2 where truncation is exact.
WeitzenbockReport verify_weitzenbock(int n, int D);

/// Round trip of polynomial coefficients through the Bargmann transform and
/// its inverse (finite triangular maps); returns the max coefficient residual.
double bargmann_roundtrip(int n, int D, const Eigen::VectorXd& coefficients);

/// Multi-index basis of polynomials of degree <= D in n variables.
std::vector<std::vector<int>> monomial_basis(int n, int D);

/// Matrix of e^{c Delta} on monomial coefficients (nilpotent series).
Eigen::MatrixXd heat_coefficient_map(int n, int D, double c);

}  // namespace orbitalis
