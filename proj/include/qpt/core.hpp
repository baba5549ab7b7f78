// Core aliases, error type and dense Hermitian helpers shared by every module.
//
// Conventions used throughout the library:
//  * Vectorization is column stacking: vec(A)[i + d*j] = A(i, j).
//  * A process matrix is chi = sum_k |A_k>><<A_k| written in a chosen operator
//    basis, i.e. chi_nm = sum_k a_nk conj(a_mk) with A_k = sum_n a_nk Y_n.
//  * The Choi matrix is the process matrix in the standard basis ordered by
//    the column-stacking index, so it acts on input (x) output.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpt {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorCode {
  invalid_dimension,
  invalid_argument,
  dimension_mismatch,
  not_a_cp_map,
  unsupported_dimension,
  infeasible_parameters,
  inconsistent_inputs,
  inconsistent_basis,
  degenerate_spectrum,
  not_unitary_data,
  failure_set,
  unreachable_band,
  parse_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

/// Column-stacking vectorization.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tmp = m;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

/// Inverse of vec() for a square result.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(const Eigen::MatrixBase<Derived>& v,
                                                                              Eigen::Index d) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> tmp = v;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(tmp.data(), d, d);
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (0.5 * (m + m.adjoint())).eval();
}

/// Nearest positive semidefinite matrix in Frobenius norm (eigenvalue clamping).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> project_psd(const Eigen::MatrixBase<Derived>& h) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<M> es(M(hermitian_part(h)));
  auto lam = es.eigenvalues().cwiseMax(0.0);
  M out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

/// Principal square root of a PSD matrix; small negative eigenvalues are clamped.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sqrt_psd(const Eigen::MatrixBase<Derived>& h) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<M> es(M(hermitian_part(h)));
  auto lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& h) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<M> es(M(hermitian_part(h)), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Projector |psi><psi| of a (not necessarily normalized) ket.
inline Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

/// ||U^dag U - I||_F.
Real unitarity_residual(const Matrix& u);

bool is_prime(int n);

}  // namespace qpt
