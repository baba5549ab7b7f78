#include "qpt/core.hpp"

namespace qpt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::not_a_cp_map: return "not-a-CP-map";
    case ErrorCode::unsupported_dimension: return "unsupported-dimension";
    case ErrorCode::infeasible_parameters: return "infeasible-parameters";
    case ErrorCode::inconsistent_inputs: return "inconsistent-inputs";
    case ErrorCode::inconsistent_basis: return "inconsistent-basis";
    case ErrorCode::degenerate_spectrum: return "degenerate-spectrum";
    case ErrorCode::not_unitary_data: return "not-unitary-data";
    case ErrorCode::failure_set: return "failure-set";
    case ErrorCode::unreachable_band: return "unreachable-band";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Real unitarity_residual(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace qpt
