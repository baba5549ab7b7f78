#include "qpt/closed_form.hpp"

#include "qpt/probes.hpp"

#include <algorithm>
#include <cmath>

namespace qpt {

Matrix fix_global_phase(const Matrix& u, Real zero_tol) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const Complex z = u(i, 0);
    if (std::abs(z) > zero_tol) return u * (std::conj(z) / std::abs(z));
  }
  return u;
}

namespace {

void check_state(const Matrix& rho, int d, const char* what) {
  require(rho.rows() == d && rho.cols() == d, ErrorCode::dimension_mismatch, std::string(what) + " has wrong shape");
  require((rho - rho.adjoint()).norm() <= 1e-8, ErrorCode::invalid_argument, std::string(what) + " is not Hermitian");
  require(std::abs(rho.trace() - Complex(1.0)) <= 1e-8, ErrorCode::invalid_argument,
          std::string(what) + " does not have unit trace");
}

UnitaryEstimate finish(Matrix u, const std::string& protocol, Real tol) {
  UnitaryEstimate est;
  est.u = fix_global_phase(u);
  est.protocol = protocol;
  est.unitarity_residual = unitarity_residual(est.u);
  require(est.unitarity_residual <= std::max(tol, 1e-6), ErrorCode::not_unitary_data,
          protocol + ": reconstructed matrix is not unitary (residual " + std::to_string(est.unitarity_residual) + ")");
  est.candidates = {est.u};
  return est;
}

}  // namespace

std::pair<Matrix, Matrix> mixed_uic_outputs(const Matrix& u, const RealVector& lambda) {
  const ProbeSet s = uic_mixed(static_cast<int>(u.rows()), lambda);
  return {u * s.states[0] * u.adjoint(), u * s.states[1] * u.adjoint()};
}

UnitaryEstimate reconstruct_from_mixed_uic(const Matrix& rho0_out, const Matrix& rho1_out, const RealVector& lambda,
                                           Real tol) {
  const int d = static_cast<int>(lambda.size());
  require(d >= 2, ErrorCode::invalid_dimension, "spectrum must have at least two entries");
  check_state(rho0_out, d, "rho0_out");
  check_state(rho1_out, d, "rho1_out");
  for (int n = 0; n + 1 < d; ++n)
    require(lambda(n) - lambda(n + 1) > tol, ErrorCode::degenerate_spectrum,
            "probe spectrum must be strictly decreasing");

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho0_out));
  // Eigen sorts ascending; lambda is descending.
  Matrix ut(d, d);
  for (int n = 0; n < d; ++n) {
    const Real mu = es.eigenvalues()(d - 1 - n);
    require(std::abs(mu - lambda(n)) <= 1e-6, ErrorCode::not_unitary_data,
            "output spectrum does not match the probe spectrum");
    ut.col(n) = es.eigenvectors().col(d - 1 - n);
  }
  // d rho1 |u~_0> = e^{i t_0} sum_n |u_n>, so u~_n <u~_n|w> fixes every relative phase.
  const Vector w = static_cast<Real>(d) * (rho1_out * ut.col(0));
  Matrix u(d, d);
  for (int n = 0; n < d; ++n) {
    const Complex ov = ut.col(n).dot(w);
    require(std::abs(std::abs(ov) - 1.0) <= 1e-6, ErrorCode::not_unitary_data,
            "coherence of the second output is inconsistent with a unitary map");
    u.col(n) = ut.col(n) * ov;
  }
  return finish(u, "mixed", tol);
}

std::vector<Matrix> sequential_outputs(const Matrix& u) {
  const ProbeSet s = uic_pure_zero_n(static_cast<int>(u.rows()));
  std::vector<Matrix> out;
  for (const auto& rho : s.states) out.push_back(u * rho * u.adjoint());
  return out;
}

UnitaryEstimate reconstruct_sequential(const std::vector<Matrix>& outputs, Real tol) {
  const int d = static_cast<int>(outputs.size());
  require(d >= 2, ErrorCode::invalid_dimension, "need d >= 2 outputs");
  for (const auto& rho : outputs) check_state(rho, d, "output state");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(outputs[0]));
  require(es.eigenvalues()(d - 1) >= 1.0 - 1e-6, ErrorCode::not_unitary_data, "first output is not pure");
  Matrix u(d, d);
  u.col(0) = es.eigenvectors().col(d - 1);
  for (int n = 1; n < d; ++n) u.col(n) = 2.0 * (outputs[n] * u.col(0)) - u.col(0);
  return finish(u, "sequential", tol);
}

Vector pure_state_from_povm_probabilities(const RealVector& p, int d, Real a, Real b) {
  require(p.size() >= 2 && p.size() % 2 == 0 && p.size() <= 2 * d, ErrorCode::dimension_mismatch,
          "probability table must hold 2(d-k) entries");
  require(a > 0.0 && b > 0.0, ErrorCode::invalid_argument, "POVM weights must be positive");
  const int m = static_cast<int>(p.size()) / 2 - 1;  // measured amplitudes besides c_0
  require(p(0) / a >= 1e-6, ErrorCode::failure_set, "<0|v> vanishes; the state lies in the failure set");
  const Real c0 = std::sqrt(p(0) / a);
  Vector v = Vector::Zero(d);
  v(0) = c0;
  for (int n = 1; n <= m; ++n) {
    // <v|E_n|v> = b (1 + 2 c0 Re c_n),  <v|E~_n|v> = b (1 - 2 c0 Im c_n)
    const Real re = (p(n) / b - 1.0) / (2.0 * c0);
    const Real im = -(p(m + n) / b - 1.0) / (2.0 * c0);
    v(n) = Complex(re, im);
  }
  return v;
}

std::vector<RealVector> sequential_tables(const Matrix& u, Real a, Real b) {
  const int d = static_cast<int>(u.rows());
  const Povm povm = pure_state_povm(d, a, b);
  std::vector<RealVector> out;
  for (const auto& rho : sequential_outputs(u)) {
    RealVector p(povm.size());
    for (int l = 0; l < povm.size(); ++l) p(l) = (rho * povm.effects[l]).trace().real();
    out.push_back(p);
  }
  return out;
}

UnitaryEstimate reconstruct_sequential_from_povm(const std::vector<RealVector>& tables, Real a, Real b, Real tol) {
  const int d = static_cast<int>(tables.size());
  require(d >= 2, ErrorCode::invalid_dimension, "need d >= 2 tables");
  int consumed = 0;
  Matrix u(d, d);
  for (int n = 0; n < d; ++n) {
    require(tables[n].size() == 2 * d, ErrorCode::dimension_mismatch, "each table needs 2d probabilities");
    consumed += static_cast<int>(tables[n].size());
    const Vector v = pure_state_from_povm_probabilities(tables[n], d, a, b);
    if (n == 0) {
      u.col(0) = v;
    } else {
      // rho_n |u_0> = |v><v|u_0> = (|u_0> + |u_n>)/2
      u.col(n) = 2.0 * v * v.dot(u.col(0)) - u.col(0);
    }
  }
  UnitaryEstimate est = finish(u, "sequential", tol);
  est.outcomes_consumed = consumed;
  est.independent_outcomes = consumed - d;
  return est;
}

std::vector<RealVector> minimal_tables(const Matrix& u, Real a, Real b) {
  const int d = static_cast<int>(u.rows());
  const std::vector<Matrix> outs = sequential_outputs(u);
  std::vector<RealVector> out;
  for (int k = 0; k < d; ++k) {
    const Povm povm = truncated_povm(d, k, a, b);
    RealVector p(povm.size());
    for (int l = 0; l < povm.size(); ++l) p(l) = (outs[k] * povm.effects[l]).trace().real();
    out.push_back(p);
  }
  return out;
}

namespace {

struct Branch {
  Matrix cols;  // d x k, columns u_0..u_{k-1}
};

}  // namespace

UnitaryEstimate reconstruct_minimal(const std::vector<RealVector>& tables, Real a, Real b, Real tol) {
  const int d = static_cast<int>(tables.size());
  require(d >= 2, ErrorCode::invalid_dimension, "need d >= 2 tables");
  int consumed = 0;
  for (int k = 0; k < d; ++k) {
    require(tables[k].size() == 2 * (d - k), ErrorCode::dimension_mismatch, "table k needs 2(d-k) probabilities");
    consumed += static_cast<int>(tables[k].size());
  }

  // Step 0: the first output is |u_0> itself and is measured completely.
  const Vector u0 = pure_state_from_povm_probabilities(tables[0], d, a, b);
  require(std::abs(u0.squaredNorm() - 1.0) <= 1e-6, ErrorCode::not_unitary_data, "first output is not normalized");
  std::vector<Branch> branches{{Matrix(u0)}};

  for (int k = 1; k < d; ++k) {
    const int head = d - k;
    const Vector v = pure_state_from_povm_probabilities(tables[k], d, a, b);
    const Vector h = v.head(head);
    const Real tau = 1.0 - h.squaredNorm();
    std::vector<Branch> next;
    for (const auto& br : branches) {
      // v' = e^{i phi} (u_0 + u_k) / sqrt(2) with Q^dag v' = e^{i phi} e_0 / sqrt(2),
      // Q = [u_0 .. u_{k-1}]. The tail t solves Q_t^dag t = e^{i phi} e_0/sqrt(2) - Q_h^dag h.
      const Matrix qh = br.cols.topRows(head);
      const Matrix qt = br.cols.bottomRows(k);
      Eigen::ColPivHouseholderQR<Matrix> qr(qt.adjoint());
      if (qr.rank() < k) continue;
      Vector e0 = Vector::Zero(k);
      e0(0) = 1.0 / std::sqrt(2.0);
      const Vector alpha = qr.solve(e0);
      const Vector beta = qr.solve(Vector(-(qh.adjoint() * h)));
      // least-squares residual of the orthogonality system
      if ((qt.adjoint() * alpha - e0).norm() > 1e-8 || (qt.adjoint() * beta + qh.adjoint() * h).norm() > 1e-8) continue;
      // ||e^{i phi} alpha + beta||^2 = tau fixes cos(phi + psi)
      const Complex g = beta.dot(alpha);
      const Real rest = tau - alpha.squaredNorm() - beta.squaredNorm();
      std::vector<Real> phis;
      if (std::abs(g) < 1e-12) {
        if (std::abs(rest) > 1e-6) continue;
        phis.push_back(0.0);  // phase undetermined; any choice is consistent
      } else {
        const Real kappa = rest / (2.0 * std::abs(g));
        if (std::abs(kappa) > 1.0 + 1e-6) continue;
        const Real th = std::acos(std::clamp(kappa, -1.0, 1.0));
        const Real psi = std::arg(g);
        phis.push_back(th - psi);
        if (th > 1e-9) phis.push_back(-th - psi);
      }
      for (Real phi : phis) {
        const Complex ph = std::exp(kI * phi);
        Vector vp(d);
        vp.head(head) = h;
        vp.tail(k) = ph * alpha + beta;
        const Vector uk = std::sqrt(2.0) * std::conj(ph) * vp - br.cols.col(0);
        Branch nb;
        nb.cols.resize(d, k + 1);
        nb.cols.leftCols(k) = br.cols;
        nb.cols.col(k) = uk;
        next.push_back(std::move(nb));
      }
    }
    require(!next.empty(), ErrorCode::not_unitary_data, "orthogonality system is inconsistent at step " +
                                                            std::to_string(k));
    branches = std::move(next);
  }

  UnitaryEstimate est;
  est.protocol = "minimal";
  for (const auto& br : branches) {
    const Matrix u = fix_global_phase(br.cols);
    if (unitarity_residual(u) > std::max(tol, 1e-6)) continue;
    bool dup = false;
    for (const auto& c : est.candidates)
      if ((c - u).norm() <= 1e-8) dup = true;
    if (!dup) est.candidates.push_back(u);
  }
  require(!est.candidates.empty(), ErrorCode::not_unitary_data, "minimal: no branch yields a unitary");
  est.u = est.candidates.front();
  est.unitarity_residual = unitarity_residual(est.u);
  est.ambiguous = est.candidates.size() > 1;
  est.outcomes_consumed = consumed;
  est.independent_outcomes = consumed - d;
  return est;
}

}  // namespace qpt
