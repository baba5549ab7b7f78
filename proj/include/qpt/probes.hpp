// Probe-state sets, POVM constructions and the commutant (UIC) test.
#pragma once

#include "qpt/core.hpp"

#include <string>
#include <vector>

namespace qpt {

enum class ProbeKind { nc_order, mub_order, uic_0n, uic_n_plus, uic_mixed, custom };

const char* to_string(ProbeKind kind);
ProbeKind probe_kind_from_string(const std::string& s);

struct ProbeSet {
  int dim = 0;
  std::vector<Matrix> states;
  std::vector<std::string> labels;
  ProbeKind kind = ProbeKind::custom;

  int size() const { return static_cast<int>(states.size()); }
  /// First k states, order preserved.
  ProbeSet prefix(int k) const;
};

enum class PovmKind { pure_state, truncated, mub, custom };

const char* to_string(PovmKind kind);
PovmKind povm_kind_from_string(const std::string& s);

struct Povm {
  int dim = 0;
  std::vector<Matrix> effects;
  std::vector<std::string> labels;
  PovmKind kind = PovmKind::custom;

  int size() const { return static_cast<int>(effects.size()); }
  /// Outcomes carrying independent information (the last effect is fixed by
  /// completeness).
  int informative_count() const { return size() - 1; }
  Real completeness_residual() const;
  Real min_effect_eigenvalue() const;
};

/// Probe set from pure kets; labels default to "psi<j>".
ProbeSet probes_from_kets(int dim, const std::vector<Vector>& kets, ProbeKind kind,
                          std::vector<std::string> labels = {});

Vector basis_ket(int d, int k);
Vector plus_ket(int d);

ProbeSet standard_probe_kets(int d);
/// Kets |n;b> of the prime-dimension MUB construction, b = 0..d-1.
Vector mub_ket(int d, int n, int b);
ProbeSet mub_probe_kets(int d);
ProbeSet uic_pure_zero_n(int d);
ProbeSet uic_pure_plus(int d);
/// Default spectrum lambda_n proportional to (d - n).
RealVector default_mixed_spectrum(int d);
ProbeSet uic_mixed(int d, const RealVector& lambda);

/// Dimension of {X : [X, rho_j] = 0 for all j}; a set is UIC iff this is 1.
int commutant_dimension(const ProbeSet& p, Real tol = 1e-9);

/// Rank of the Gram matrix of the probe states viewed as operators.
int operator_span_rank(const std::vector<Matrix>& ops, Real tol = 1e-9);

/// Probe ordering used for the fidelity-vs-number-of-states study.
enum class ProbeOrdering { nc, uic_0n_then_nc, uic_n_plus_then_mub };

const char* to_string(ProbeOrdering o);
ProbeOrdering probe_ordering_from_string(const std::string& s);

/// The d^2 probes in the requested order: a UIC prefix (if any) followed by
/// the remaining states of the full set in their original order.
ProbeSet ordered_probes(int d, ProbeOrdering ordering);

inline Real default_povm_weight(int d) { return 1.0 / (4.0 * d); }

/// Pure-state informationally complete POVM with 2d effects:
/// E_0, E_1..E_{d-1}, E~_1..E~_{d-1}, complement.
Povm pure_state_povm(int d, Real a, Real b);
/// E_0, E_n and E~_n for n = 1..d-1-k, then the complement: 2(d-k) effects.
Povm truncated_povm(int d, int k, Real a, Real b);
/// All d(d+1) MUB projectors scaled by 1/(d+1).
Povm mub_povm(int d);

}  // namespace qpt
