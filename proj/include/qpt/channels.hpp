// Random maps, coherent and incoherent error channels, and process fidelity.
#pragma once

#include "qpt/repr.hpp"

#include <cstdint>
#include <string>

namespace qpt {

/// Haar-distributed unitary (Ginibre QR with the R-diagonal phases removed).
Matrix haar_unitary(int d, std::uint64_t seed);

/// H = (G + G^dag)/2 for a Ginibre G, rescaled to Tr H = 1. Draws with
/// |Tr| < 1e-6 are discarded and resampled.
Matrix random_hermitian_unit_trace(int d, std::uint64_t seed);

/// exp(i eta H) for Hermitian H.
Matrix hermitian_exp(const Matrix& h, Real eta);

struct CoherentMap {
  Matrix applied_unitary;
  ProcessMatrix chi;
};

/// U_a = exp(i eta H) U_t.
CoherentMap coherent_applied_map(const Matrix& target, Real eta, const Matrix& h, const OperatorBasis& basis);

/// (1 - xi) chi(U_t) + xi chi(E_kraus o U_t).
ProcessMatrix incoherent_applied_map(const Matrix& target, Real xi, const KrausSet& kraus, const OperatorBasis& basis);

/// TP CP map of Kraus rank n_kraus from the Ginibre-Choi ensemble.
KrausSet random_tp_cp_map(int d, int n_kraus, std::uint64_t seed);

/// Uhlmann process fidelity (Tr sqrt(sqrt(ref) hat sqrt(ref)))^2 / d^2.
Real process_fidelity(const ProcessMatrix& chi_hat, const ProcessMatrix& chi_ref, Real psd_tol = 1e-6);

/// <<U|chi_hat|U>> / d^2, the rank-1 reference special case.
Real unitary_fidelity(const ProcessMatrix& chi_hat, const Matrix& u);

/// |Tr(U^dag V)|^2 / d^2.
Real unitary_overlap_fidelity(const Matrix& u, const Matrix& v);

/// F(chi_t, chi_a) of the coherent error: |Tr exp(i eta H)|^2 / d^2.
Real coherent_fidelity(const Matrix& h, Real eta);

enum class ErrorKind { coherent, incoherent };

const char* to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& s);

/// Fully specified error model on top of a target unitary.
struct ErrorSpec {
  ErrorKind kind = ErrorKind::coherent;
  Matrix target;
  Real eta = 0.0;     // coherent
  Matrix hamiltonian; // coherent, Hermitian with unit trace
  Real xi = 0.0;      // incoherent
  KrausSet kraus;     // incoherent, TP
  std::uint64_t seed = 0;
  /// F(chi_t, chi_a) realised by this spec.
  Real achieved_fidelity = 1.0;

  ProcessMatrix applied(const OperatorBasis& basis) const;
};

struct CalibrationOptions {
  Real eta_max = 3.0;
  Real xi_max = 1.0;
  int n_kraus = -1;  // default d^2
  int retries = 64;
};

/// Draws an error of the given kind whose F(chi_t, chi_a) lies in
/// [target_fidelity - width, target_fidelity + width]. Resamples H or the
/// Kraus set when the band is out of reach; throws unreachable-band once the
/// retry budget is spent.
ErrorSpec calibrate_to_fidelity_band(ErrorKind kind, const Matrix& target, Real target_fidelity, Real width,
                                     std::uint64_t seed, const CalibrationOptions& opts = {});

/// Incoherent calibration against a fixed Kraus set (no resampling).
ErrorSpec calibrate_incoherent(const Matrix& target, const KrausSet& kraus, Real target_fidelity, Real width,
                               Real xi_max = 1.0);

}  // namespace qpt
