// Noise-free algebraic reconstruction of a unitary from the outputs of a UIC
// probe set: the mixed two-state protocol, the sequential pure-state protocol
// and the minimal-outcome protocol.
#pragma once

#include "qpt/core.hpp"

#include <string>
#include <vector>

namespace qpt {

struct UnitaryEstimate {
  /// Columns are |u_n> = U|n>; the first nonzero amplitude of |u_0> is real
  /// and positive.
  Matrix u;
  std::string protocol;
  Real unitarity_residual = 0.0;
  /// POVM effects whose probabilities were consumed (zero for protocols fed
  /// with density matrices).
  int outcomes_consumed = 0;
  /// Effects whose probability is not fixed by the others (one less per POVM).
  int independent_outcomes = 0;
  /// More than one unitary reproduces the data; `u` is candidates.front().
  bool ambiguous = false;
  std::vector<Matrix> candidates;
};

/// Multiplies U by the phase that makes the first nonzero entry of column 0
/// real and positive.
Matrix fix_global_phase(const Matrix& u, Real zero_tol = 1e-12);

/// Outputs U rho_0 U^dag and U |+><+| U^dag for the mixed UIC set.
std::pair<Matrix, Matrix> mixed_uic_outputs(const Matrix& u, const RealVector& lambda);

UnitaryEstimate reconstruct_from_mixed_uic(const Matrix& rho0_out, const Matrix& rho1_out, const RealVector& lambda,
                                           Real tol = 1e-8);

/// Outputs U|psi_n><psi_n|U^dag for the probes |0>, (|0> + |n>)/sqrt(2).
std::vector<Matrix> sequential_outputs(const Matrix& u);

/// u_0 is the principal eigenvector of the first output; the others follow
/// from rho_n |u_0> = (|u_0> + |u_n>)/2.
UnitaryEstimate reconstruct_sequential(const std::vector<Matrix>& outputs, Real tol = 1e-8);

/// Pure state with <0|v> real positive from the 2d (or truncated 2(d-k))
/// pure-state POVM probabilities; amplitudes beyond the measured head are
/// returned as zero. Throws failure-set when p_0 / a < 1e-6.
Vector pure_state_from_povm_probabilities(const RealVector& p, int d, Real a, Real b);

/// Each output of the sequential probes measured with pure_state_povm(d, a, b).
std::vector<RealVector> sequential_tables(const Matrix& u, Real a, Real b);

/// Sequential protocol driven by POVM tables; consumes d * 2d effects.
UnitaryEstimate reconstruct_sequential_from_povm(const std::vector<RealVector>& tables, Real a, Real b,
                                                 Real tol = 1e-8);

/// Table k: output k measured with truncated_povm(d, k, a, b).
std::vector<RealVector> minimal_tables(const Matrix& u, Real a, Real b);

/// Minimal protocol: d^2 + d effects in total. Each step after the first fills
/// the unmeasured amplitudes from orthogonality, which leaves a twofold phase
/// ambiguity; all consistent branches are returned in `candidates`.
UnitaryEstimate reconstruct_minimal(const std::vector<RealVector>& tables, Real a, Real b, Real tol = 1e-8);

inline int sequential_outcome_count(int d) { return 2 * d * d; }
inline int minimal_outcome_count(int d) { return d * d + d; }

}  // namespace qpt
