#include "qpt/repr.hpp"

#include <cmath>
#include <limits>

namespace qpt {

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::standard: return "standard";
    case BasisKind::gellmann: return "gellmann";
    case BasisKind::rotated: return "rotated";
    case BasisKind::traceless_with_identity: return "traceless-with-identity";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "standard") return BasisKind::standard;
  if (s == "gellmann") return BasisKind::gellmann;
  if (s == "rotated") return BasisKind::rotated;
  if (s == "traceless-with-identity") return BasisKind::traceless_with_identity;
  throw Error(ErrorCode::parse_error, "unknown basis kind '" + s + "'");
}

OperatorBasis::OperatorBasis(int dim, std::vector<Matrix> elements, BasisKind kind, Matrix target)
    : dim_(dim), elements_(std::move(elements)), kind_(kind), target_(std::move(target)) {
  require(dim_ >= 2, ErrorCode::invalid_dimension, "basis dimension must be >= 2");
  const int n = dim_ * dim_;
  require(static_cast<int>(elements_.size()) == n, ErrorCode::dimension_mismatch,
          "operator basis needs d^2 elements");
  columns_.resize(n, n);
  for (int k = 0; k < n; ++k) {
    require(elements_[k].rows() == dim_ && elements_[k].cols() == dim_, ErrorCode::dimension_mismatch,
            "basis element has wrong shape");
    columns_.col(k) = vec(elements_[k]);
  }
  Eigen::FullPivLU<Matrix> lu(columns_);
  require(lu.isInvertible(), ErrorCode::inconsistent_basis, "basis elements do not span the operator space");
  columns_inv_ = lu.inverse();
}

bool OperatorBasis::orthonormal(Real tol) const {
  return (gram() - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff() <= tol;
}

namespace {

Matrix unit(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

std::vector<Matrix> gellmann_elements(int d) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d * d));
  out.push_back(Matrix::Identity(d, d) / std::sqrt(static_cast<Real>(d)));
  const Real s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) out.push_back(s * (unit(d, j, k) + unit(d, k, j)));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) out.push_back(s * (-kI * unit(d, j, k) + kI * unit(d, k, j)));
  for (int l = 1; l < d; ++l) {
    Matrix m = Matrix::Zero(d, d);
    for (int j = 0; j < l; ++j) m(j, j) = 1.0;
    m(l, l) = -static_cast<Real>(l);
    out.push_back(m / std::sqrt(static_cast<Real>(l * (l + 1))));
  }
  return out;
}

}  // namespace

OperatorBasis gellmann_basis(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  return OperatorBasis(d, gellmann_elements(d), BasisKind::gellmann);
}

OperatorBasis traceless_identity_basis(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  return OperatorBasis(d, gellmann_elements(d), BasisKind::traceless_with_identity);
}

OperatorBasis standard_basis(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  // Element n = i + d*j is |i><j|, so vec(Y_n) is the n-th unit vector.
  std::vector<Matrix> out;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out.push_back(unit(d, i, j));
  return OperatorBasis(d, std::move(out), BasisKind::standard);
}

OperatorBasis rotated_basis(const Matrix& target, const OperatorBasis& base) {
  const int d = base.dim();
  require(target.rows() == d && target.cols() == d, ErrorCode::dimension_mismatch, "target has wrong shape");
  require(unitarity_residual(target) <= 1e-8, ErrorCode::invalid_argument, "target is not unitary");
  require(base.orthonormal(1e-10), ErrorCode::invalid_argument, "base basis must be orthonormal");
  const Matrix id = Matrix::Identity(d, d);
  Complex overlap = (id.adjoint() * base[0]).trace() / std::sqrt(static_cast<Real>(d));
  require((base[0] - overlap * id / std::sqrt(static_cast<Real>(d))).norm() <= 1e-10, ErrorCode::invalid_argument,
          "base basis must start with the normalized identity");
  std::vector<Matrix> out;
  out.reserve(base.elements().size());
  for (const auto& y : base.elements()) out.push_back(target * y);
  // Fix the first element to exactly U_t / sqrt(d) regardless of the base's phase.
  out[0] = target / std::sqrt(static_cast<Real>(d));
  return OperatorBasis(d, std::move(out), BasisKind::rotated, target);
}

Real KrausSet::tp_residual() const {
  const int d = dim();
  Matrix s = Matrix::Zero(d, d);
  for (const auto& a : ops) s += a.adjoint() * a;
  return (s - Matrix::Identity(d, d)).norm();
}

int SpectralForm::rank(Real threshold) const {
  return static_cast<int>((eigenvalues.array() > threshold).count());
}

Matrix SpectralForm::reassemble() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralForm spectral_form(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian));
  const Eigen::Index n = hermitian.rows();
  SpectralForm out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  (void)n;
  return out;
}

ChoiMatrix kraus_to_choi(const KrausSet& kraus) {
  require(!kraus.ops.empty(), ErrorCode::invalid_argument, "empty Kraus set");
  const int d = kraus.dim();
  Matrix c = Matrix::Zero(d * d, d * d);
  for (const auto& a : kraus.ops) {
    require(a.rows() == d && a.cols() == d, ErrorCode::dimension_mismatch, "Kraus operators differ in shape");
    Vector v = vec(a);
    c.noalias() += v * v.adjoint();
  }
  return {d, c};
}

ProcessMatrix kraus_to_process(const KrausSet& kraus, const OperatorBasis& basis) {
  require(!kraus.ops.empty(), ErrorCode::invalid_argument, "empty Kraus set");
  require(kraus.dim() == basis.dim(), ErrorCode::dimension_mismatch, "Kraus/basis dimension mismatch");
  const int n = basis.size();
  Matrix chi = Matrix::Zero(n, n);
  for (const auto& a : kraus.ops) {
    require(a.rows() == basis.dim() && a.cols() == basis.dim(), ErrorCode::dimension_mismatch,
            "Kraus operator has wrong shape");
    Vector coeff = basis.columns_inverse() * vec(a);
    chi.noalias() += coeff * coeff.adjoint();
  }
  return {basis, chi};
}

ChoiMatrix process_to_choi(const ProcessMatrix& p) {
  const Matrix& c = p.basis.columns();
  return {p.dim(), hermitian_part(Matrix(c * p.chi * c.adjoint()))};
}

ProcessMatrix choi_to_process(const ChoiMatrix& c, const OperatorBasis& basis) {
  require(c.dim == basis.dim(), ErrorCode::dimension_mismatch, "Choi/basis dimension mismatch");
  require((c.mat - c.mat.adjoint()).norm() <= 1e-8 * std::max<Real>(1.0, c.mat.norm()), ErrorCode::invalid_argument,
          "Choi matrix is not Hermitian");
  const Matrix& inv = basis.columns_inverse();
  return {basis, hermitian_part(Matrix(inv * c.mat * inv.adjoint()))};
}

ProcessMatrix change_basis(const ProcessMatrix& p, const OperatorBasis& basis) {
  require((p.chi - p.chi.adjoint()).norm() <= 1e-8 * std::max<Real>(1.0, p.chi.norm()), ErrorCode::invalid_argument,
          "process matrix is not Hermitian");
  return choi_to_process(process_to_choi(p), basis);
}

namespace {

void fix_phase(Matrix& a) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  const Complex z = a(r, c);
  if (std::abs(z) > 0.0) a *= std::conj(z) / std::abs(z);
}

}  // namespace

KrausSet choi_to_kraus(const ChoiMatrix& c, Real rank_tol) {
  require((c.mat - c.mat.adjoint()).norm() <= 1e-8 * std::max<Real>(1.0, c.mat.norm()), ErrorCode::invalid_argument,
          "Choi matrix is not Hermitian");
  SpectralForm sf = spectral_form(c.mat);
  const Real clamp = -10.0 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1.0, c.mat.norm());
  // Eigen's Hermitian solver has backward error ~ eps*||chi||*n; allow that much.
  const Real floor = clamp * static_cast<Real>(c.mat.rows());
  if (sf.eigenvalues(sf.eigenvalues.size() - 1) < floor)
    throw Error(ErrorCode::not_a_cp_map,
                "Choi matrix has eigenvalue " + std::to_string(sf.eigenvalues(sf.eigenvalues.size() - 1)));
  KrausSet out;
  for (Eigen::Index k = 0; k < sf.eigenvalues.size(); ++k) {
    const Real lam = sf.eigenvalues(k);
    if (lam <= rank_tol) break;
    Matrix a = std::sqrt(lam) * unvec(sf.eigenvectors.col(k), c.dim);
    fix_phase(a);
    out.ops.push_back(std::move(a));
  }
  require(!out.ops.empty(), ErrorCode::not_a_cp_map, "Choi matrix has no eigenvalue above rank_tol");
  return out;
}

Matrix apply_map(const ChoiMatrix& c, const Matrix& rho) {
  const int d = c.dim;
  require(rho.rows() == d && rho.cols() == d, ErrorCode::dimension_mismatch, "state has wrong shape");
  Matrix out = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int jp = 0; jp < d; ++jp) {
      if (rho(j, jp) == Complex(0.0)) continue;
      out += rho(j, jp) * c.mat.block(j * d, jp * d, d, d);
    }
  return out;
}

Matrix apply_kraus(const KrausSet& k, const Matrix& rho) {
  require(k.dim() == rho.rows() && rho.rows() == rho.cols(), ErrorCode::dimension_mismatch, "state has wrong shape");
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : k.ops) out += a * rho * a.adjoint();
  return out;
}

Matrix tp_operator(const ProcessMatrix& p) {
  const int d = p.dim();
  const int n = p.basis.size();
  Matrix out = Matrix::Zero(d, d);
  for (int m = 0; m < n; ++m) {
    Matrix ym = p.basis[m].adjoint();
    Matrix acc = Matrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
      const Complex w = p.chi(k, m);
      if (w != Complex(0.0)) acc += w * p.basis[k];
    }
    out += ym * acc;
  }
  return out;
}

Matrix choi_input_marginal(const ChoiMatrix& c) {
  const int d = c.dim;
  Matrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int jp = 0; jp < d; ++jp) out(j, jp) = c.mat.block(j * d, jp * d, d, d).trace();
  return out;
}

CptpReport is_cptp(const ProcessMatrix& p, Real tol) {
  CptpReport r;
  const bool hermitian = (p.chi - p.chi.adjoint()).norm() <= tol * std::max<Real>(1.0, p.chi.norm());
  r.min_eig = min_eigenvalue(p.chi);
  r.cp = hermitian && r.min_eig >= -tol;
  r.tp_residual = (tp_operator(p) - Matrix::Identity(p.dim(), p.dim())).norm();
  r.tp = r.tp_residual <= tol;
  return r;
}

ProcessMatrix unitary_process(const Matrix& u, const OperatorBasis& basis) {
  return kraus_to_process(KrausSet{{u}}, basis);
}

}  // namespace qpt
