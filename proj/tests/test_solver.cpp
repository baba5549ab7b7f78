#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpt/channels.hpp"
#include "qpt/hvec.hpp"
#include "qpt/measure.hpp"
#include "qpt/random.hpp"
#include "qpt/solver.hpp"
#include "oracle_instances.hpp"

#include <cmath>

using namespace qpt;

using qpt_test::Instance;
using qpt_test::qubit_instance;

TEST_CASE("default epsilon is mean plus three deviations of the residual") {
  CHECK(default_epsilon(1e-4, 150) == doctest::Approx(1e-8 * (150 + 3 * std::sqrt(300.0))));
  CHECK(default_epsilon(1e-4, 150) == doctest::Approx(2.0196e-6).epsilon(1e-4));
  CHECK(default_epsilon(0.0, 10) == 0.0);
  CHECK_THROWS_AS(default_epsilon(-1.0, 10), Error);
}

TEST_CASE("true map satisfies the default data-fit bound in nearly all records") {
  const Real sigma = 1e-3;
  const int rows = 10, cols = 15;
  const RealMatrix p = RealMatrix::Constant(rows, cols, 0.2);
  const Real eps = default_epsilon(sigma, rows * cols);
  int inside = 0;
  const int n = 2000;
  for (int s = 0; s < n; ++s) {
    const MeasurementRecord r = simulate_record(p, sigma, static_cast<std::uint64_t>(s) + 100);
    inside += (r.freqs - p).squaredNorm() <= eps;
  }
  CHECK(static_cast<Real>(inside) / n > 0.985);
}

TEST_CASE("PSD projection clamps negative eigenvalues") {
  Matrix h(2, 2);
  h << 1, 0, 0, -1;
  const Matrix p = project_psd(h);
  CHECK(std::abs(p(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(p(1, 1)) < 1e-14);
  Rng rng = make_rng(5);
  const Matrix g = ginibre(6, 6, rng);
  const Matrix herm = (g + g.adjoint()) / 2.0;
  const Matrix once = project_psd(herm);
  CHECK((project_psd(once) - once).norm() < 1e-12);
  CHECK(min_eigenvalue(once) > -1e-12);
}

TEST_CASE("TP constraint projection") {
  for (int d : {2, 3}) {
    const OperatorBasis b = gellmann_basis(d);
    const TpConstraint tp(b, true);
    CHECK(tp.q().cols() == d * d);
    const RealMatrix qtq = tp.q().transpose() * tp.q();
    CHECK((qtq - RealMatrix::Identity(d * d, d * d)).norm() < 1e-10);

    const RealVector x0 = tp.min_norm_point();
    const ProcessMatrix p0{b, from_hvec(x0, d * d)};
    CHECK((tp_operator(p0) - Matrix::Identity(d, d)).norm() < 1e-10);
    // The completely depolarizing map is the minimum-norm TP process.
    const Matrix marginal = choi_input_marginal(process_to_choi(p0));
    CHECK((marginal - Matrix::Identity(d, d)).norm() < 1e-10);

    Rng rng = make_rng(static_cast<std::uint64_t>(d));
    const Matrix g = ginibre(d * d, d * d, rng);
    const RealVector x = to_hvec((g + g.adjoint()).eval());
    const RealVector y = tp.project(x);
    CHECK(tp.residual(y) < 1e-10);
    CHECK((tp.project(y) - y).norm() < 1e-10);
    // A TP unitary process is a fixed point.
    const ProcessMatrix u = unitary_process(haar_unitary(d, 3), b);
    const RealVector xu = to_hvec(u.chi);
    CHECK((tp.project(xu) - xu).norm() < 1e-10);
  }
  CHECK_THROWS_AS(TpConstraint(gellmann_basis(2), false), Error);
  const TpConstraint partial(traceless_identity_basis(3), false);
  CHECK(partial.q().cols() == 8);
}

TEST_CASE("polish_cptp returns a CPTP map") {
  const OperatorBasis b = gellmann_basis(3);
  const ProcessMatrix u = unitary_process(haar_unitary(3, 11), b);
  Rng rng = make_rng(12);
  const Matrix g = ginibre(9, 9, rng);
  const ProcessMatrix noisy{b, u.chi + 0.01 * (g + g.adjoint())};
  const ProcessMatrix p = polish_cptp(noisy);
  const CptpReport r = is_cptp(p, 1e-9);
  CHECK(r.cp);
  CHECK(r.tp);
  CHECK(process_fidelity(p, u) > 0.9);
}

TEST_CASE("least squares recovers a unitary from exact complete data") {
  const int d = 5;
  const Matrix u = haar_unitary(d, 21);
  const OperatorBasis b = estimator_basis(EstimatorKind::ls, u);
  const ChoiMatrix truth = process_to_choi(unitary_process(u, standard_basis(d)));

  SUBCASE("informationally complete probes") {
    const ProbeSet probes = mub_probe_kets(d).prefix(d * d);
    const Povm povm = mub_povm(d);
    const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 0.0, 1);
    const Estimate e = estimate_ls(rec, design_matrices(probes, povm, b));
    CHECK(e.status == SolverStatus::converged);
    CHECK(unitary_fidelity(e.chi_hat, u) > 1 - 1e-5);
    CHECK(is_cptp(e.chi_hat, 1e-8).tp);
  }
  SUBCASE("unitarily informationally complete probes") {
    const ProbeSet probes = uic_pure_zero_n(d);
    const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
    const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 0.0, 1);
    const Estimate e = estimate_ls(rec, design_matrices(probes, povm, b));
    CHECK(unitary_fidelity(e.chi_hat, u) > 1 - 1e-4);
  }
  SUBCASE("a commuting probe set does not determine the unitary") {
    const ProbeSet probes = ordered_probes(d, ProbeOrdering::nc).prefix(d);
    const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
    const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 0.0, 1);
    const Estimate e = estimate_ls(rec, design_matrices(probes, povm, b));
    CHECK(unitary_fidelity(e.chi_hat, u) < 0.99);
  }
}

TEST_CASE("compressed sensing estimators on exact data") {
  const int d = 3;
  const Matrix u = haar_unitary(d, 31);
  const ChoiMatrix truth = process_to_choi(unitary_process(u, standard_basis(d)));
  const ProbeSet probes = uic_pure_zero_n(d);
  const Povm povm = mub_povm(d);
  const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 1e-4, 2);
  for (EstimatorKind k : {EstimatorKind::cs_l1, EstimatorKind::cs_tr}) {
    CAPTURE(std::string(to_string(k)));
    const Estimate e = k == EstimatorKind::cs_l1 ? estimate_cs_l1(rec, design_matrices(probes, povm, estimator_basis(k, u)))
                                                 : estimate_cs_tr(rec, design_matrices(probes, povm, estimator_basis(k, u)));
    CHECK(e.status == SolverStatus::converged);
    CHECK(unitary_fidelity(e.chi_hat, u) > 0.99);
    CHECK(e.epsilon == doctest::Approx(default_epsilon(1e-4, rec.freqs.size())));
    // Rank of the estimate stays close to one.
    const SpectralForm s = spectral_form(e.chi_hat.chi);
    CHECK(s.eigenvalues(0) > 0.98 * d);
    CHECK(is_cptp(e.chi_hat, 1e-8).cp);
  }
}

TEST_CASE("residual trace is recorded and decreases") {
  const Instance in = qubit_instance(7, true, 1e-3);
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::cs_tr;
  cfg.record_trace = true;
  const Estimate e = admm_solve(in.record, design_matrices(in.probes, in.povm, estimator_basis(cfg.kind, in.target)), cfg);
  REQUIRE(!e.trace.empty());
  CHECK(static_cast<int>(e.trace.size()) == e.iterations);
  CHECK(e.trace.back().primal < e.trace.front().primal);
  CHECK(e.trace.back().primal <= 1e-7 * 4 * 1.0001);
}

TEST_CASE("invalid configurations are rejected") {
  const Instance in = qubit_instance(8, true, 1e-3);
  const DesignMatrix d = design_matrices(in.probes, in.povm, gellmann_basis(2));
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::cs_tr;  // needs the traceless-with-identity basis
  CHECK_THROWS_AS(admm_solve(in.record, d, cfg), Error);
  cfg.kind = EstimatorKind::ls;
  cfg.max_iter = 0;
  CHECK_THROWS_AS(admm_solve(in.record, d, cfg), Error);
}

TEST_CASE("ADMM agrees with an independent interior-point solver") {
  for (int s = 0; s < 4; ++s) {
    const Instance in = qubit_instance(100 + static_cast<std::uint64_t>(s), s % 2 == 0, 1e-4);
    for (EstimatorKind kind : {EstimatorKind::ls, EstimatorKind::cs_l1, EstimatorKind::cs_tr}) {
      CAPTURE(s);
      CAPTURE(std::string(to_string(kind)));
      CHECK(qpt_test::oracle_agreement(kind, in) >= 1 - 1e-4);
    }
  }
}

TEST_CASE("reference solver reproduces known optima") {
  // Noiseless data from a unitary: every program's optimum is the true map.
  const Instance in = qubit_instance(300, true, 0.0);
  qpt_ref::Problem p = qpt_test::reference_problem(in, EstimatorKind::ls);
  const qpt_ref::Result r = qpt_ref::solve(p);
  REQUIRE(r.converged);
  CHECK(qpt_ref::choi_fidelity(r.choi, in.truth.mat, 2) > 1 - 1e-6);
  CHECK(r.data_fit < 1e-10);
}

TEST_CASE("CS_L1 identifies the target from a single probe on exact data") {
  const int d = 3;
  const Matrix u = haar_unitary(d, 41);
  const ChoiMatrix truth = process_to_choi(unitary_process(u, standard_basis(d)));
  const ProbeSet probes = uic_pure_zero_n(d).prefix(1);
  const Povm povm = mub_povm(d);
  const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 0.0, 1);
  const Estimate e = estimate_cs_l1(rec, design_matrices(probes, povm, estimator_basis(EstimatorKind::cs_l1, u)));
  CHECK(unitary_fidelity(e.chi_hat, u) > 1 - 1e-4);
  // A single entry d in the rotated basis.
  CHECK(std::abs(e.chi_hat.chi(0, 0) - static_cast<Real>(d)) < 1e-3 * d);
  CHECK(l1_norm(e.chi_hat.chi) < d * (1 + 1e-3));
}

TEST_CASE("CS_TR estimate of exact unitary data has rank one") {
  const int d = 3;
  const Matrix u = haar_unitary(d, 43);
  const ChoiMatrix truth = process_to_choi(unitary_process(u, standard_basis(d)));
  const ProbeSet probes = uic_pure_zero_n(d);
  const Povm povm = mub_povm(d);
  const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 0.0, 1);
  const Estimate e = estimate_cs_tr(rec, design_matrices(probes, povm, estimator_basis(EstimatorKind::cs_tr, u)));
  CHECK(unitary_fidelity(e.chi_hat, u) > 1 - 1e-3);
  CHECK(spectral_form(e.chi_hat.chi).rank(1e-3 * d) == 1);
  CHECK(e.chi_hat.chi.trace().real() == doctest::Approx(d).epsilon(1e-9));
}

TEST_CASE("least squares is basis covariant") {
  const int d = 3;
  const Matrix u = haar_unitary(d, 47);
  const KrausSet k = random_tp_cp_map(d, 2, 48);
  const ChoiMatrix truth = kraus_to_choi(k);
  const ProbeSet probes = mub_probe_kets(d).prefix(6);
  const Povm povm = mub_povm(d);
  const MeasurementRecord rec = simulate_record(probabilities_from_choi(truth, probes, povm), 1e-3, 3);
  const Estimate a = estimate_ls(rec, design_matrices(probes, povm, gellmann_basis(d)));
  const Estimate b = estimate_ls(rec, design_matrices(probes, povm, standard_basis(d)));
  CHECK(process_fidelity(a.chi_hat, change_basis(b.chi_hat, gellmann_basis(d))) > 1 - 1e-6);
  // The estimate is no worse than the true map on its own objective.
  const ProcessMatrix chi_a = choi_to_process(truth, gellmann_basis(d));
  const RealMatrix p_true = probabilities(chi_a, design_matrices(probes, povm, gellmann_basis(d)));
  CHECK(a.data_fit <= (p_true - rec.freqs).squaredNorm() + 1e-8);
}
