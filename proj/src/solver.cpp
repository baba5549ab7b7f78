#include "qpt/solver.hpp"

#include "qpt/hvec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace qpt {

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::ls: return "LS";
    case EstimatorKind::cs_l1: return "CS_L1";
    case EstimatorKind::cs_tr: return "CS_TR";
  }
  return "unknown";
}

EstimatorKind estimator_kind_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u += static_cast<char>(c == '-' ? '_' : std::toupper(static_cast<unsigned char>(c)));
  if (u == "LS") return EstimatorKind::ls;
  if (u == "CS_L1") return EstimatorKind::cs_l1;
  if (u == "CS_TR") return EstimatorKind::cs_tr;
  throw Error(ErrorCode::parse_error, "unknown estimator '" + s + "'");
}

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::diverged: return "diverged";
    case SolverStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

OperatorBasis estimator_basis(EstimatorKind kind, const Matrix& target) {
  const int d = static_cast<int>(target.rows());
  switch (kind) {
    case EstimatorKind::ls: return gellmann_basis(d);
    case EstimatorKind::cs_l1: return rotated_basis(target, gellmann_basis(d));
    case EstimatorKind::cs_tr: return traceless_identity_basis(d);
  }
  return gellmann_basis(d);
}

Real default_epsilon(Real sigma, int record_length) {
  require(sigma >= 0.0 && record_length >= 1, ErrorCode::invalid_argument, "need sigma >= 0 and L >= 1");
  const Real l = static_cast<Real>(record_length);
  return sigma * sigma * (l + 3.0 * std::sqrt(2.0 * l));
}

Real l1_norm(const Matrix& chi) { return chi.cwiseAbs().sum(); }

TpConstraint::TpConstraint(const OperatorBasis& basis, bool include_trace_equation) {
  require(include_trace_equation || basis.kind() == BasisKind::traceless_with_identity, ErrorCode::invalid_argument,
          "the trace equation may only be dropped in the traceless-with-identity basis");
  const int d = basis.dim();
  const int nn = d * d;
  const OperatorBasis g = gellmann_basis(d);
  const Matrix& c = basis.columns();
  const Matrix id = Matrix::Identity(d, d);
  const int first = include_trace_equation ? 0 : 1;
  const int rows = nn - first;
  RealMatrix b(rows, nn * nn);
  RealVector rhs(rows);
  for (int k = first; k < nn; ++k) {
    // Tr(G_k T(chi)) = Tr(chi X_k) with X_k = C^dag (G_k^T (x) 1) C
    const Matrix x = c.adjoint() * kron(g[k].transpose(), id) * c;
    b.row(k - first) = to_hvec(x).transpose();
    rhs(k - first) = g[k].trace().real();
  }
  const RealMatrix gram = b * b.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  require(es.eigenvalues()(0) > 1e-10 * es.eigenvalues()(rows - 1), ErrorCode::inconsistent_basis,
          "TP constraint system is singular in this basis");
  Eigen::LLT<RealMatrix> llt(gram);
  // Q = B^T L^-T has orthonormal columns and Q^T x = L^-1 B x.
  q_ = llt.matrixL().solve(b).transpose();
  rhs_ = llt.matrixL().solve(rhs);
}

ProcessMatrix project_tp_affine(const ProcessMatrix& chi, bool include_trace_equation) {
  const TpConstraint tp(chi.basis, include_trace_equation);
  const RealVector x = tp.project(to_hvec(chi.chi));
  return {chi.basis, from_hvec(x, chi.chi.rows())};
}

ProcessMatrix polish_cptp(const ProcessMatrix& chi) {
  const int d = chi.dim();
  ProcessMatrix p{chi.basis, project_psd(chi.chi)};
  ChoiMatrix c = process_to_choi(p);
  Matrix m = hermitian_part(choi_input_marginal(c));
  constexpr Real kFloor = 1e-6;
  const Real lo = min_eigenvalue(m);
  if (lo < kFloor) {
    // Near-singular marginal: mix in the completely depolarizing map (Choi = 1/d)
    // just enough to lift the smallest eigenvalue to kFloor.
    const Real t = std::clamp((kFloor - lo) / (1.0 - lo), 0.0, 1.0);
    c.mat = (1.0 - t) * c.mat + (t / d) * Matrix::Identity(d * d, d * d);
    m = hermitian_part(choi_input_marginal(c));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Matrix x = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().adjoint();
  const Matrix s = kron(x, Matrix::Identity(d, d));
  c.mat = hermitian_part(Matrix(s * c.mat * s.adjoint()));
  return choi_to_process(c, chi.basis);
}

namespace {

// Largest singular value via power iteration on A^T A.
Real spectral_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  RealVector v = RealVector::Ones(a.cols()).normalized();
  Real s = 0.0;
  for (int it = 0; it < 200; ++it) {
    RealVector w = a.transpose() * (a * v);
    const Real nw = w.norm();
    if (nw == 0.0) return 0.0;
    const Real s_new = std::sqrt(nw);
    v = w / nw;
    if (std::abs(s_new - s) <= 1e-10 * s_new) return s_new;
    s = s_new;
  }
  return s;
}

RealVector project_psd_h(const RealVector& v, Eigen::Index n, Real shift) {
  Matrix h = from_hvec(v, n);
  if (shift != 0.0) h.diagonal().array() -= shift;
  return to_hvec(project_psd(h));
}

// Per-coordinate l1 weights in hvec order. Weighting the first row and column
// of chi equals measuring the l1 norm with an unnormalized first element U_t.
RealVector l1_weights(Eigen::Index size, Eigen::Index n, int d, bool target_weight) {
  RealVector wt = RealVector::Ones(size);
  if (!target_weight) return wt;
  wt(0) = 1.0 / d;
  wt.segment(n, 2 * (n - 1)).setConstant(1.0 / std::sqrt(static_cast<Real>(d)));
  return wt;
}

void soft_threshold_h(RealVector& v, Eigen::Index n, Real tau, const RealVector& wt) {
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real a = std::abs(v(i));
    const Real t = tau * wt(i);
    v(i) = a <= t ? 0.0 : v(i) * (1.0 - t / a);
  }
  // off-diagonal pairs carry 2|chi_nm| = sqrt(2) ||(a, b)||
  for (Eigen::Index k = n; k + 1 < v.size(); k += 2) {
    const Real t2 = std::sqrt(2.0) * tau * wt(k);
    const Real m = std::hypot(v(k), v(k + 1));
    const Real f = m <= t2 ? 0.0 : 1.0 - t2 / m;
    v(k) *= f;
    v(k + 1) *= f;
  }
}

Real l1_h(const RealVector& v, Eigen::Index n, const RealVector& wt) {
  Real s = v.head(n).cwiseAbs().dot(wt.head(n));
  for (Eigen::Index k = n; k + 1 < v.size(); k += 2) s += std::sqrt(2.0) * wt(k) * std::hypot(v(k), v(k + 1));
  return s;
}

}  // namespace

Estimate admm_solve(const MeasurementRecord& rec, const DesignMatrix& dm, const EstimatorConfig& cfg) {
  const OperatorBasis& basis = dm.basis;
  const int d = basis.dim();
  const Eigen::Index nn = static_cast<Eigen::Index>(d) * d;
  const Eigen::Index n = nn * nn;
  require(rec.num_probes() == dm.num_probes && rec.num_effects() == dm.num_effects, ErrorCode::dimension_mismatch,
          "record and design matrix are not aligned");
  require(dm.rows() >= 1, ErrorCode::invalid_argument, "empty measurement record");
  require(cfg.max_iter >= 1 && cfg.rho > 0.0, ErrorCode::invalid_argument, "invalid solver configuration");

  const bool ls = cfg.kind == EstimatorKind::ls;
  const bool l1 = cfg.kind == EstimatorKind::cs_l1;
  const bool tr = cfg.kind == EstimatorKind::cs_tr;
  if (l1)
    require(basis.kind() == BasisKind::rotated, ErrorCode::inconsistent_basis, "CS_L1 needs a rotated basis");
  if (tr)
    require(basis.kind() == BasisKind::traceless_with_identity, ErrorCode::inconsistent_basis,
            "CS_TR needs the traceless-with-identity basis");

  const Eigen::Index m = dm.rows();
  RealMatrix a(m, n);
  RealVector f(m);
  for (int j = 0; j < dm.num_probes; ++j)
    for (int l = 0; l < dm.num_effects; ++l) {
      const Eigen::Index r = static_cast<Eigen::Index>(j) * dm.num_effects + l;
      a.row(r) = to_hvec(dm.at(j, l)).transpose();
      f(r) = rec.freqs(j, l);
    }

  Estimate est{.chi_hat = ProcessMatrix{basis, Matrix()}};
  est.epsilon = ls ? 0.0 : (cfg.epsilon >= 0.0 ? cfg.epsilon : default_epsilon(rec.sigma, static_cast<int>(m)));
  const Real tol_p = cfg.tol_primal > 0.0 ? cfg.tol_primal : 1e-7 * nn;
  const Real tol_d = cfg.tol_dual > 0.0 ? cfg.tol_dual : 1e-7 * nn;

  const Real sn = spectral_norm(a);
  const Real gamma = sn > 0.0 ? 1.0 / sn : 1.0;
  const RealMatrix ah = gamma * a;
  const RealVector fh = gamma * f;
  const Real radius = gamma * std::sqrt(est.epsilon);

  const TpConstraint tp(basis, !tr);
  const RealMatrix& q = tp.q();
  auto pi = [&](const RealVector& v) -> RealVector { return v - q * (q.transpose() * v); };

  // Thin SVD of Z = A Pi (Pi projects onto the TP tangent space). It solves the
  // x-update for every penalty value, so penalties adapt at no refactoring cost.
  // Built from the eigensystem of the smaller Gram matrix: symmetric probe sets
  // give heavily clustered singular values, where the bidiagonal SVD returns
  // right vectors that leak out of the tangent space.
  RealMatrix z = ah;
  z -= (ah * q) * q.transpose();
  const bool wide = z.rows() <= z.cols();
  Eigen::SelfAdjointEigenSolver<RealMatrix> gram(wide ? RealMatrix(z * z.transpose()) : RealMatrix(z.transpose() * z));
  const RealVector& ev = gram.eigenvalues();
  const Real ev_max = ev.size() > 0 ? ev(ev.size() - 1) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
    if (ev(i) > 1e-14 * ev_max && ev(i) > 0.0) keep.push_back(i);
  const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  RealVector s(k);
  RealMatrix basis_vecs(ev.size(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    s(c) = std::sqrt(ev(keep[static_cast<std::size_t>(c)]));
    basis_vecs.col(c) = gram.eigenvectors().col(keep[static_cast<std::size_t>(c)]);
  }
  const RealMatrix u_z = wide ? basis_vecs : RealMatrix((z * basis_vecs) * s.cwiseInverse().asDiagonal());
  const RealMatrix v_z = wide ? RealMatrix((z.transpose() * basis_vecs) * s.cwiseInverse().asDiagonal()) : basis_vecs;
  const RealVector s2 = s.cwiseAbs2();

  const RealVector x0 = tp.min_norm_point();
  const RealVector ux0 = u_z.transpose() * (ah * x0);

  RealVector x = x0;
  RealVector zp = x0, zl = x0, w = ah * x0;
  RealVector up = RealVector::Zero(n), ul = RealVector::Zero(n), uw = RealVector::Zero(m);
  Real rho_p = cfg.rho, rho_l = cfg.rho, rho_w = cfg.rho;
  const Real alpha = cfg.relaxation;

  const RealVector l1w = l1_weights(n, nn, d, cfg.l1_weight_target);
  auto objective = [&](const RealVector& v) {
    if (ls) return (a * v - f).squaredNorm();
    if (l1) return l1_h(v, nn, l1w);
    return v.head(nn).sum();
  };
  // Residual balancing on scale-free residuals: primal relative to the iterate
  // size, dual relative to the multiplier size.
  auto rebalance = [&](Real r, Real r_scale, Real sd, Real sd_scale, Real& rho, RealVector& u) {
    const Real rr = r / std::max(r_scale, 1e-12);
    const Real sr = sd / std::max(sd_scale, 1e-12);
    if (rr <= 0.0 || sr <= 0.0) return;
    const Real ratio = std::sqrt(rr / sr);
    if (ratio > 5.0 || ratio < 0.2) {
      const Real nr = std::clamp(rho * ratio, cfg.rho_min, cfg.rho_max);
      u *= rho / nr;
      rho = nr;
    }
  };

  int it = 0;
  Real r_norm = 0.0, s_norm = 0.0;
  for (it = 1; it <= cfg.max_iter; ++it) {
    // x-update: min (qw/2)||A x - t||^2 + (rc/2)||x - vbar||^2 over the TP set.
    const Real rc = rho_p + (l1 ? rho_l : 0.0);
    RealVector vbar = rho_p * (zp - up);
    if (l1) vbar += rho_l * (zl - ul);
    vbar /= rc;
    const Real qw = ls ? 2.0 : rho_w;
    const RealVector h = ls ? RealVector(u_z.transpose() * fh - ux0) : RealVector(u_z.transpose() * (w - uw) - ux0);
    const RealVector e = vbar - x0;
    const RealVector av = v_z.transpose() * e;
    const RealVector kap = ((qw * s.cwiseProduct(h) + rc * av).array() / (qw * s2.array() + rc)).matrix();
    x = x0 + pi(e) + v_z * (kap - av);

    // z-updates with over-relaxation
    const RealVector xp = alpha * x + (1.0 - alpha) * zp;
    const RealVector zp_old = zp;
    zp = project_psd_h(xp + up, nn, tr ? 1.0 / rho_p : 0.0);
    up += xp - zp;
    const RealVector dzp = zp - zp_old;
    Real r_p = (x - zp).norm(), s_p = rho_p * pi(dzp).norm();

    Real r_l = 0.0, s_l = 0.0;
    RealVector dual = rho_p * dzp;
    if (l1) {
      const RealVector xl = alpha * x + (1.0 - alpha) * zl;
      RealVector zl_new = xl + ul;
      soft_threshold_h(zl_new, nn, 1.0 / rho_l, l1w);
      const RealVector dzl = zl_new - zl;
      zl = zl_new;
      ul += xl - zl;
      r_l = (x - zl).norm();
      s_l = rho_l * pi(dzl).norm();
      dual += rho_l * dzl;
    }

    Real r_w = 0.0, s_w = 0.0;
    if (!ls) {
      const RealVector ax = ah * x;
      const RealVector xw = alpha * ax + (1.0 - alpha) * w;
      const RealVector w_old = w;
      const RealVector vw = xw + uw;
      const RealVector dv = vw - fh;
      const Real nd = dv.norm();
      w = nd <= radius ? vw : RealVector(fh + dv * (radius / nd));
      uw += xw - w;
      const RealVector dw = ah.transpose() * (w - w_old);
      r_w = (ax - w).norm();
      s_w = rho_w * pi(dw).norm();
      dual += rho_w * dw;
    }

    r_norm = std::sqrt(r_p * r_p + r_l * r_l + r_w * r_w);
    s_norm = pi(dual).norm();
    if (cfg.record_trace) est.trace.push_back({it, r_norm, s_norm, rho_p, objective(x)});
    if (r_norm <= tol_p && s_norm <= tol_d) break;

    if (cfg.adapt_interval > 0 && it % cfg.adapt_interval == 0) {
      Real grad = 0.0;
      if (ls) grad = 2.0 * (v_z * s.cwiseProduct(u_z.transpose() * (ah * x - fh))).norm();
      if (tr) grad = std::sqrt(static_cast<Real>(nn));
      rebalance(r_p, std::max(x.norm(), zp.norm()), s_p, std::max(rho_p * pi(up).norm(), grad), rho_p, up);
      if (l1) rebalance(r_l, std::max(x.norm(), zl.norm()), s_l, rho_l * pi(ul).norm(), rho_l, ul);
      if (!ls) rebalance(r_w, std::max((ah * x).norm(), w.norm()), s_w, rho_w * pi(ah.transpose() * uw).norm(), rho_w, uw);
    }
  }
  est.converged = it <= cfg.max_iter;
  est.iterations = std::min(it, cfg.max_iter);
  est.primal_residual = r_norm;
  est.dual_residual = s_norm;
  if (est.converged) est.status = SolverStatus::converged;
  else if (r_norm > 100.0 * tol_p && s_norm <= 10.0 * tol_d) est.status = SolverStatus::infeasible;
  else est.status = SolverStatus::diverged;

  // The PSD copy is the iterate closest to the cone; polish it onto CPTP.
  est.objective = objective(zp);
  ProcessMatrix raw{basis, from_hvec(zp, nn)};
  if (tr) {
    const Real t = raw.chi.trace().real();
    if (t > 0.0) raw.chi *= static_cast<Real>(d) / t;
  }
  est.chi_hat = polish_cptp(raw);
  est.data_fit = (a * to_hvec(est.chi_hat.chi) - f).squaredNorm();
  return est;
}

Estimate estimate_ls(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg) {
  cfg.kind = EstimatorKind::ls;
  return admm_solve(rec, d, cfg);
}

Estimate estimate_cs_l1(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg) {
  cfg.kind = EstimatorKind::cs_l1;
  return admm_solve(rec, d, cfg);
}

Estimate estimate_cs_tr(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg) {
  cfg.kind = EstimatorKind::cs_tr;
  return admm_solve(rec, d, cfg);
}

}  // namespace qpt
