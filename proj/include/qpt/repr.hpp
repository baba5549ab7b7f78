// Representations of CP maps: Kraus sets, process matrices in an operator
// basis, Choi matrices, and exact conversions among them.
#pragma once

#include "qpt/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpt {

enum class BasisKind { standard, gellmann, rotated, traceless_with_identity };

const char* to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

/// Ordered set of d^2 complex d x d matrices spanning the operator space.
///
/// The traceless-with-identity kind holds identity/sqrt(d) followed by
/// orthonormal traceless Hermitian matrices; the estimator that uses it drops
/// the one TP equation that involves the trace.
class OperatorBasis {
 public:
  OperatorBasis(int dim, std::vector<Matrix> elements, BasisKind kind, Matrix target = Matrix());

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  BasisKind kind() const { return kind_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& operator[](int n) const { return elements_[static_cast<std::size_t>(n)]; }
  /// Target unitary of a rotated basis (empty for other kinds).
  const Matrix& target() const { return target_; }

  /// d^2 x d^2 matrix whose n-th column is vec(Y_n).
  const Matrix& columns() const { return columns_; }
  const Matrix& columns_inverse() const { return columns_inv_; }
  bool orthonormal(Real tol = 1e-10) const;
  Matrix gram() const { return columns_.adjoint() * columns_; }

 private:
  int dim_;
  std::vector<Matrix> elements_;
  BasisKind kind_;
  Matrix target_;
  Matrix columns_;
  Matrix columns_inv_;
};

OperatorBasis gellmann_basis(int d);
OperatorBasis standard_basis(int d);
OperatorBasis traceless_identity_basis(int d);
OperatorBasis rotated_basis(const Matrix& target, const OperatorBasis& base);

struct KrausSet {
  std::vector<Matrix> ops;

  int dim() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
  int size() const { return static_cast<int>(ops.size()); }
  /// ||sum_k A_k^dag A_k - I||_F
  Real tp_residual() const;
};

struct ProcessMatrix {
  OperatorBasis basis;
  Matrix chi;

  int dim() const { return basis.dim(); }
};

struct ChoiMatrix {
  int dim = 0;
  Matrix mat;
};

struct SpectralForm {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns |V_n>>, matching order

  int rank(Real threshold) const;
  Matrix reassemble() const;
};

SpectralForm spectral_form(const Matrix& hermitian);

ProcessMatrix kraus_to_process(const KrausSet& kraus, const OperatorBasis& basis);
ChoiMatrix kraus_to_choi(const KrausSet& kraus);
ChoiMatrix process_to_choi(const ProcessMatrix& p);
ProcessMatrix choi_to_process(const ChoiMatrix& c, const OperatorBasis& basis);
ProcessMatrix change_basis(const ProcessMatrix& p, const OperatorBasis& basis);

/// Spectral Kraus decomposition. Eigenvalues below -10 eps ||chi|| raise
/// not-a-CP-map; each returned operator has its largest-magnitude entry real
/// and positive.
KrausSet choi_to_kraus(const ChoiMatrix& c, Real rank_tol = 1e-10);

/// E[rho] = Tr_in{ chi_c (rho^T (x) 1) }.
Matrix apply_map(const ChoiMatrix& c, const Matrix& rho);
Matrix apply_kraus(const KrausSet& k, const Matrix& rho);

/// sum_nm chi_nm Y_m^dag Y_n; equals the identity for TP maps.
Matrix tp_operator(const ProcessMatrix& p);
/// Tr_out(chi_c); equals the identity on the input factor for TP maps.
Matrix choi_input_marginal(const ChoiMatrix& c);

struct CptpReport {
  bool cp = false;
  bool tp = false;
  Real min_eig = 0.0;
  Real tp_residual = 0.0;
};

CptpReport is_cptp(const ProcessMatrix& p, Real tol = 1e-8);

/// Process matrix of rho -> U rho U^dag.
ProcessMatrix unitary_process(const Matrix& u, const OperatorBasis& basis);

}  // namespace qpt
