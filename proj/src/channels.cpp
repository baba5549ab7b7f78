#include "qpt/channels.hpp"

#include "qpt/random.hpp"

#include <cmath>

namespace qpt {

Matrix haar_unitary(int d, std::uint64_t seed) {
  require(d >= 2, ErrorCode::invalid_dimension, "dimension must be >= 2");
  Rng rng = make_rng(seed);
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Vector ph(d);
  for (int i = 0; i < d; ++i) {
    const Real m = std::abs(r(i, i));
    ph(i) = m > 0.0 ? r(i, i) / m : Complex(1.0);
  }
  return q * ph.asDiagonal();
}

Matrix random_hermitian_unit_trace(int d, std::uint64_t seed) {
  require(d >= 2, ErrorCode::invalid_dimension, "dimension must be >= 2");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = make_rng(derive_seed(seed, {attempt}));
    const Matrix g = ginibre(d, d, rng);
    const Matrix h = hermitian_part(g);
    const Real tr = h.trace().real();
    if (std::abs(tr) < 1e-6) continue;
    return h / tr;
  }
}

Matrix hermitian_exp(const Matrix& h, Real eta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  Vector ph(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::exp(kI * eta * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CoherentMap coherent_applied_map(const Matrix& target, Real eta, const Matrix& h, const OperatorBasis& basis) {
  require(eta >= 0.0, ErrorCode::invalid_argument, "eta must be non-negative");
  require(h.rows() == target.rows() && target.rows() == basis.dim(), ErrorCode::dimension_mismatch,
          "dimension mismatch");
  require((h - h.adjoint()).norm() <= 1e-10, ErrorCode::invalid_argument, "H must be Hermitian");
  const Matrix ua = hermitian_exp(h, eta) * target;
  return {ua, unitary_process(ua, basis)};
}

ProcessMatrix incoherent_applied_map(const Matrix& target, Real xi, const KrausSet& kraus, const OperatorBasis& basis) {
  require(xi >= 0.0 && xi <= 1.0, ErrorCode::invalid_argument, "xi must lie in [0, 1]");
  require(kraus.size() > 0 && kraus.dim() == target.rows(), ErrorCode::dimension_mismatch, "dimension mismatch");
  require(kraus.tp_residual() <= 1e-8, ErrorCode::invalid_argument, "error Kraus set is not trace preserving");
  KrausSet composed;
  for (const auto& a : kraus.ops) composed.ops.push_back(a * target);
  ProcessMatrix out = unitary_process(target, basis);
  out.chi = (1.0 - xi) * out.chi + xi * kraus_to_process(composed, basis).chi;
  return out;
}

KrausSet random_tp_cp_map(int d, int n_kraus, std::uint64_t seed) {
  require(d >= 2, ErrorCode::invalid_dimension, "dimension must be >= 2");
  require(n_kraus >= 1 && n_kraus <= d * d, ErrorCode::invalid_argument, "n_kraus must lie in [1, d^2]");
  Rng rng = make_rng(seed);
  const Matrix g = ginibre(d * d, n_kraus, rng);
  const Matrix w = g * g.adjoint();
  const Matrix m = choi_input_marginal({d, w});
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  const Matrix x = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().adjoint();
  const Matrix s = kron(x, Matrix::Identity(d, d));
  return choi_to_kraus({d, hermitian_part(Matrix(s * w * s.adjoint()))});
}

Real process_fidelity(const ProcessMatrix& chi_hat, const ProcessMatrix& chi_ref, Real psd_tol) {
  require(chi_hat.dim() == chi_ref.dim(), ErrorCode::dimension_mismatch, "dimension mismatch");
  const int d = chi_hat.dim();
  const Matrix a = process_to_choi(chi_ref).mat;
  const Matrix b = process_to_choi(chi_hat).mat;
  require(min_eigenvalue(a) >= -psd_tol * d && min_eigenvalue(b) >= -psd_tol * d, ErrorCode::invalid_argument,
          "fidelity argument has a negative eigenvalue");
  // Restrict to the numerical support of the reference: sqrt of eigenvalues at
  // rounding level would otherwise contribute O(sqrt(eps)) errors.
  Eigen::SelfAdjointEigenSolver<Matrix> ea(a);
  const RealVector& la = ea.eigenvalues();
  const Real cut = 1e-12 * std::max<Real>(la.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::Index r = 0;
  while (r < la.size() && la(la.size() - 1 - r) > cut) ++r;
  const Matrix v = ea.eigenvectors().rightCols(r) * la.tail(r).cwiseSqrt().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(Matrix(v.adjoint() * b * v)), Eigen::EigenvaluesOnly);
  const Real t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return t * t / (static_cast<Real>(d) * d);
}

Real unitary_fidelity(const ProcessMatrix& chi_hat, const Matrix& u) {
  const int d = chi_hat.dim();
  require(u.rows() == d, ErrorCode::dimension_mismatch, "dimension mismatch");
  const Vector v = vec(u);
  const Matrix c = process_to_choi(chi_hat).mat;
  return (v.adjoint() * c * v)(0, 0).real() / (static_cast<Real>(d) * d);
}

Real unitary_overlap_fidelity(const Matrix& u, const Matrix& v) {
  const Real d = static_cast<Real>(u.rows());
  return std::norm((u.adjoint() * v).trace()) / (d * d);
}

Real coherent_fidelity(const Matrix& h, Real eta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  Complex t = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) t += std::exp(kI * eta * es.eigenvalues()(i));
  const Real d = static_cast<Real>(h.rows());
  return std::norm(t) / (d * d);
}

const char* to_string(ErrorKind kind) { return kind == ErrorKind::coherent ? "coherent" : "incoherent"; }

ErrorKind error_kind_from_string(const std::string& s) {
  if (s == "coherent") return ErrorKind::coherent;
  if (s == "incoherent") return ErrorKind::incoherent;
  throw Error(ErrorCode::parse_error, "unknown error kind '" + s + "'");
}

ProcessMatrix ErrorSpec::applied(const OperatorBasis& basis) const {
  if (kind == ErrorKind::coherent) return coherent_applied_map(target, eta, hamiltonian, basis).chi;
  return incoherent_applied_map(target, xi, kraus, basis);
}

namespace {

// Fidelity between U_t and E_kraus o U_t: sum_n |Tr A_n|^2 / d^2.
Real error_channel_fidelity(const KrausSet& kraus) {
  const Real d = static_cast<Real>(kraus.dim());
  Real f = 0.0;
  for (const auto& a : kraus.ops) f += std::norm(a.trace());
  return f / (d * d);
}

// Smallest eta in [0, eta_max] with coherent_fidelity(h, eta) = f0, if any.
bool solve_eta(const Matrix& h, Real f0, Real eta_max, Real& eta) {
  constexpr int kGrid = 3000;
  Real lo = 0.0;
  for (int i = 1; i <= kGrid; ++i) {
    const Real hi = eta_max * i / kGrid;
    if (coherent_fidelity(h, hi) <= f0) {
      Real a = lo, b = hi;
      for (int it = 0; it < 100; ++it) {
        const Real m = 0.5 * (a + b);
        (coherent_fidelity(h, m) > f0 ? a : b) = m;
      }
      eta = 0.5 * (a + b);
      return true;
    }
    lo = hi;
  }
  return false;
}

}  // namespace

ErrorSpec calibrate_incoherent(const Matrix& target, const KrausSet& kraus, Real target_fidelity, Real width,
                               Real xi_max) {
  require(target_fidelity > 0.0 && target_fidelity <= 1.0, ErrorCode::invalid_argument,
          "target fidelity must lie in (0, 1]");
  require(width > 0.0, ErrorCode::invalid_argument, "band width must be positive");
  const Real f_err = error_channel_fidelity(kraus);
  ErrorSpec spec;
  spec.kind = ErrorKind::incoherent;
  spec.target = target;
  spec.kraus = kraus;
  if (target_fidelity >= 1.0) {
    spec.xi = 0.0;
  } else {
    require(f_err < target_fidelity, ErrorCode::unreachable_band,
            "error channel fidelity exceeds the requested band; xi would exceed 1");
    spec.xi = (1.0 - target_fidelity) / (1.0 - f_err);
  }
  require(spec.xi <= xi_max, ErrorCode::unreachable_band, "required xi exceeds its bound");
  spec.achieved_fidelity = (1.0 - spec.xi) + spec.xi * f_err;
  require(std::abs(spec.achieved_fidelity - target_fidelity) <= width, ErrorCode::unreachable_band,
          "achieved fidelity outside the band");
  return spec;
}

ErrorSpec calibrate_to_fidelity_band(ErrorKind kind, const Matrix& target, Real target_fidelity, Real width,
                                     std::uint64_t seed, const CalibrationOptions& opts) {
  require(target_fidelity > 0.0 && target_fidelity <= 1.0, ErrorCode::invalid_argument,
          "target fidelity must lie in (0, 1]");
  require(width > 0.0, ErrorCode::invalid_argument, "band width must be positive");
  const int d = static_cast<int>(target.rows());
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(attempt)});
    if (kind == ErrorKind::coherent) {
      ErrorSpec spec;
      spec.kind = kind;
      spec.target = target;
      spec.seed = s;
      spec.hamiltonian = random_hermitian_unit_trace(d, s);
      Real eta = 0.0;
      if (target_fidelity < 1.0 && !solve_eta(spec.hamiltonian, target_fidelity, opts.eta_max, eta)) continue;
      spec.eta = eta;
      spec.achieved_fidelity = coherent_fidelity(spec.hamiltonian, eta);
      if (std::abs(spec.achieved_fidelity - target_fidelity) <= width) return spec;
    } else {
      const int nk = opts.n_kraus > 0 ? opts.n_kraus : d * d;
      try {
        ErrorSpec spec = calibrate_incoherent(target, random_tp_cp_map(d, nk, s), target_fidelity, width,
                                              opts.xi_max);
        spec.seed = s;
        return spec;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::unreachable_band) throw;
      }
    }
  }
  throw Error(ErrorCode::unreachable_band, "no error draw reached the fidelity band within the retry budget");
}

}  // namespace qpt
