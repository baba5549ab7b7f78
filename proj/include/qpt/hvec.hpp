// Isometric real coordinates for Hermitian matrices.
//
// An N x N Hermitian H maps to a real vector of length N^2: the N diagonal
// entries, then sqrt(2) Re H_nm and sqrt(2) Im H_nm for each n < m (row
// order). Re Tr(A^dag B) equals the Euclidean inner product of the images.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>

namespace qpt {

template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> to_hvec(const Eigen::MatrixBase<Derived>& h) {
  using R = typename Derived::RealScalar;
  const Eigen::Index n = h.rows();
  const R s = std::sqrt(R(2));
  Eigen::Matrix<R, Eigen::Dynamic, 1> v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::real(h(i, i));
  Eigen::Index k = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // average the two triangles so a slightly non-Hermitian input maps to its Hermitian part
      const auto z = (h(i, j) + std::conj(h(j, i))) * R(0.5);
      v(k++) = s * std::real(z);
      v(k++) = s * std::imag(z);
    }
  return v;
}

template <typename Derived>
Eigen::Matrix<std::complex<typename Derived::Scalar>, Eigen::Dynamic, Eigen::Dynamic> from_hvec(
    const Eigen::MatrixBase<Derived>& v, Eigen::Index n) {
  using R = typename Derived::Scalar;
  using C = std::complex<R>;
  const R s = R(1) / std::sqrt(R(2));
  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = C(v(i), R(0));
  Eigen::Index k = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const C z(s * v(k), s * v(k + 1));
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

}  // namespace qpt
