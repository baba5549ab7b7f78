// Constrained convex estimators of the process matrix and the ADMM engine
// behind them.
//
// All three programs share the constraint set {chi Hermitian, chi PSD, TP}
// and differ in objective:
//   LS     min ||A chi - f||^2
//   CS_L1  min sum_nm |chi_nm|  s.t. ||A chi - f||^2 <= eps   (rotated basis)
//   CS_TR  min Tr chi           s.t. ||A chi - f||^2 <= eps   (traceless basis,
//                                   trace equation of TP dropped)
#pragma once

#include "qpt/measure.hpp"
#include "qpt/repr.hpp"

#include <string>
#include <vector>

namespace qpt {

enum class EstimatorKind { ls, cs_l1, cs_tr };

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& s);

/// Basis each estimator works in: Gell-Mann for LS, rotated(U_t) for CS_L1,
/// traceless-with-identity for CS_TR.
OperatorBasis estimator_basis(EstimatorKind kind, const Matrix& target);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::ls;
  /// Data-fit threshold; negative selects default_epsilon(sigma, L).
  Real epsilon = -1.0;
  /// Convergence tolerances; non-positive selects 1e-7 d^2.
  Real tol_primal = -1.0;
  Real tol_dual = -1.0;
  int max_iter = 50000;
  Real rho = 1.0;
  Real rho_min = 1e-6;
  Real rho_max = 1e6;
  Real relaxation = 1.6;
  int adapt_interval = 20;
  /// CS_L1 norm taken with the unnormalized first element U_t: chi_11 weighs
  /// 1/d and the rest of its row and column 1/sqrt(d). Without it a single
  /// probe leaves the l1 minimizer ambiguous.
  bool l1_weight_target = true;
  /// Keep per-iteration residuals in Estimate::trace.
  bool record_trace = false;
};

enum class SolverStatus { converged, diverged, infeasible };

const char* to_string(SolverStatus s);

struct TraceRow {
  int iter;
  Real primal;
  Real dual;
  Real rho;
  Real objective;
};

struct Estimate {
  ProcessMatrix chi_hat;
  /// Objective at the unpolished iterate (before CS_TR renormalization).
  Real objective = 0.0;
  /// ||A chi_hat - f||^2 at the polished estimate.
  Real data_fit = 0.0;
  Real epsilon = 0.0;
  int iterations = 0;
  bool converged = false;
  SolverStatus status = SolverStatus::diverged;
  Real primal_residual = 0.0;
  Real dual_residual = 0.0;
  std::vector<TraceRow> trace{};
};

/// sigma^2 (L + 3 sqrt(2L)): mean plus three standard deviations of the
/// chi-square residual of the true map.
Real default_epsilon(Real sigma, int record_length);

/// Affine TP constraint on Hermitian chi in real coordinates, Q^T x = b with
/// orthonormal Q. Built once per (basis, flag) and reused.
class TpConstraint {
 public:
  TpConstraint(const OperatorBasis& basis, bool include_trace_equation);

  const RealMatrix& q() const { return q_; }
  const RealVector& rhs() const { return rhs_; }
  /// Minimum-norm feasible point.
  RealVector min_norm_point() const { return q_ * rhs_; }
  RealVector project(const RealVector& x) const { return x - q_ * (q_.transpose() * x - rhs_); }
  Real residual(const RealVector& x) const { return (q_.transpose() * x - rhs_).norm(); }

 private:
  RealMatrix q_;
  RealVector rhs_;
};

/// Euclidean projection onto the TP affine set (or the trace-free subset of
/// its equations when include_trace_equation is false).
ProcessMatrix project_tp_affine(const ProcessMatrix& chi, bool include_trace_equation);

/// PSD clamp followed by an exact TP correction chi_c -> (X (x) 1) chi_c (X (x) 1)
/// with X = Tr_out(chi_c)^(-1/2). The result is CP and TP to rounding.
ProcessMatrix polish_cptp(const ProcessMatrix& chi);

/// ADMM on the program selected by cfg.kind. The record, design matrix and
/// basis must be aligned (D.basis is the working basis).
Estimate admm_solve(const MeasurementRecord& rec, const DesignMatrix& d, const EstimatorConfig& cfg);

Estimate estimate_ls(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg = {});
Estimate estimate_cs_l1(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg = {});
Estimate estimate_cs_tr(const MeasurementRecord& rec, const DesignMatrix& d, EstimatorConfig cfg = {});

/// Entrywise complex l1 norm sum_nm |chi_nm|.
Real l1_norm(const Matrix& chi);

}  // namespace qpt
