#include "qpt/validate.hpp"

#include "qpt/channels.hpp"
#include "qpt/closed_form.hpp"
#include "qpt/measure.hpp"
#include "qpt/probes.hpp"
#include "qpt/random.hpp"
#include "qpt/repr.hpp"
#include "qpt/solver.hpp"

#include <cstdio>
#include <functional>

namespace qpt {

namespace {

std::string sci(Real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void check(std::vector<CheckResult>& out, const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult r = body();
    r.name = name;
    out.push_back(std::move(r));
  } catch (const std::exception& e) {
    out.push_back({name, false, std::string("exception: ") + e.what()});
  }
}

CheckResult bound(Real value, Real limit, const std::string& what) {
  return {"", value < limit, what + " = " + sci(value) + " (limit " + sci(limit) + ")"};
}

}  // namespace

std::vector<CheckResult> run_validation(int d, std::uint64_t seed) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  std::vector<CheckResult> out;
  const OperatorBasis gm = gellmann_basis(d);

  check(out, "repr round trip", [&] {
    Real worst = 0.0;
    for (int n = 0; n < 10; ++n) {
      const KrausSet k = random_tp_cp_map(d, 1 + n % (d * d), derive_seed(seed, {1, static_cast<std::uint64_t>(n)}));
      const ProcessMatrix chi = kraus_to_process(k, gm);
      const ChoiMatrix c = process_to_choi(chi);
      const ProcessMatrix back = kraus_to_process(choi_to_kraus(c), gm);
      worst = std::max(worst, (back.chi - chi.chi).cwiseAbs().maxCoeff());
    }
    return bound(worst, 1e-10, "max entry error");
  });

  check(out, "basis orthonormality", [&] {
    const Matrix u = haar_unitary(d, derive_seed(seed, {2}));
    const bool ok = gm.orthonormal() && standard_basis(d).orthonormal() && traceless_identity_basis(d).orthonormal() &&
                    rotated_basis(u, gm).orthonormal();
    return CheckResult{"", ok, ok ? "all bases orthonormal" : "a basis is not orthonormal"};
  });

  check(out, "UIC commutant", [&] {
    std::vector<Vector> kets;
    for (int n = 0; n < d; ++n) kets.push_back(basis_ket(d, n));
    const int c_basis = commutant_dimension(probes_from_kets(d, kets, ProbeKind::custom));
    const int c0n = commutant_dimension(uic_pure_zero_n(d));
    const int cnp = commutant_dimension(uic_pure_plus(d));
    const int cmx = commutant_dimension(uic_mixed(d, default_mixed_spectrum(d)));
    const bool ok = c0n == 1 && cnp == 1 && cmx == 1 && c_basis == d;
    return CheckResult{"", ok,
                       "0+n " + std::to_string(c0n) + ", n+ " + std::to_string(cnp) + ", mixed " + std::to_string(cmx) +
                           ", computational " + std::to_string(c_basis)};
  });

  check(out, "POVM validity", [&] {
    const Real w = default_povm_weight(d);
    Real res = pure_state_povm(d, w, w).completeness_residual();
    Real neg = -pure_state_povm(d, w, w).min_effect_eigenvalue();
    for (int k = 0; k < d; ++k) {
      const Povm t = truncated_povm(d, k, w, w);
      res = std::max(res, t.completeness_residual());
      neg = std::max(neg, -t.min_effect_eigenvalue());
    }
    if (is_prime(d)) {
      const Povm m = mub_povm(d);
      res = std::max(res, m.completeness_residual());
      neg = std::max(neg, -m.min_effect_eigenvalue());
    }
    CheckResult r = bound(std::max(res, neg), 1e-12, "completeness / negativity");
    return r;
  });

  check(out, "design matrix consistency", [&] {
    const KrausSet k = random_tp_cp_map(d, d, derive_seed(seed, {3}));
    const ProbeSet probes = standard_probe_kets(d);
    const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
    const RealMatrix a = probabilities(kraus_to_process(k, gm), design_matrices(probes, povm, gm));
    const RealMatrix b = probabilities_from_choi(kraus_to_choi(k), probes, povm);
    const Real row_sum = (a.rowwise().sum().array() - 1.0).abs().maxCoeff();
    return bound(std::max((a - b).cwiseAbs().maxCoeff(), row_sum), 1e-12, "probability mismatch");
  });

  check(out, "closed-form exactness", [&] {
    const Real w = default_povm_weight(d);
    Real worst = 0.0;
    for (int n = 0; n < 5; ++n) {
      const Matrix u = haar_unitary(d, derive_seed(seed, {4, static_cast<std::uint64_t>(n)}));
      const RealVector lambda = default_mixed_spectrum(d);
      const auto [r0, r1] = mixed_uic_outputs(u, lambda);
      worst = std::max(worst, 1.0 - unitary_overlap_fidelity(u, reconstruct_from_mixed_uic(r0, r1, lambda).u));
      worst = std::max(worst, 1.0 - unitary_overlap_fidelity(u, reconstruct_sequential(sequential_outputs(u)).u));
      const UnitaryEstimate e = reconstruct_sequential_from_povm(sequential_tables(u, w, w), w, w);
      worst = std::max(worst, 1.0 - unitary_overlap_fidelity(u, e.u));
    }
    return bound(worst, 1e-8, "worst infidelity");
  });

  check(out, "fidelity identities", [&] {
    const Matrix u = haar_unitary(d, derive_seed(seed, {5}));
    const ProcessMatrix chi = unitary_process(u, gm);
    const KrausSet k = random_tp_cp_map(d, 2, derive_seed(seed, {6}));
    const ProcessMatrix other = kraus_to_process(k, gm);
    const Real e1 = std::abs(process_fidelity(chi, chi) - 1.0);
    const Real e2 = std::abs(process_fidelity(other, chi) - unitary_fidelity(other, u));
    return bound(std::max(e1, e2), 1e-8, "identity error");
  });

  check(out, "CPTP polish", [&] {
    const KrausSet k = random_tp_cp_map(d, 2, derive_seed(seed, {7}));
    ProcessMatrix chi = kraus_to_process(k, gm);
    Rng rng = make_rng(derive_seed(seed, {8}));
    chi.chi += 1e-3 * hermitian_part(ginibre(d * d, d * d, rng));
    const CptpReport rep = is_cptp(polish_cptp(chi), 1e-9);
    return CheckResult{"", rep.cp && rep.tp,
                       "min eig " + sci(rep.min_eig) + ", tp residual " + sci(rep.tp_residual)};
  });

  check(out, "LS exact-data recovery", [&] {
    const Matrix u = haar_unitary(d, derive_seed(seed, {9}));
    const ProbeSet probes = uic_pure_zero_n(d);
    const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
    const DesignMatrix dm = design_matrices(probes, povm, gm);
    const MeasurementRecord rec = simulate_record(probabilities(unitary_process(u, gm), dm), 0.0, 0);
    const Estimate e = estimate_ls(rec, dm);
    return bound(1.0 - unitary_fidelity(e.chi_hat, u), 1e-4, "infidelity");
  });

  return out;
}

}  // namespace qpt
