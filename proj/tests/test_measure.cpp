#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpt/channels.hpp"
#include "qpt/measure.hpp"
#include "qpt/random.hpp"

#include <sstream>

using namespace qpt;

namespace {

Matrix kron_loops(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

Matrix act(const KrausSet& k, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : k.ops) out += a * rho * a.adjoint();
  return out;
}

}  // namespace

TEST_CASE("standard-basis design matrices are rho^T (x) E") {
  const int d = 3;
  const ProbeSet probes = standard_probe_kets(d);
  const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
  const DesignMatrix dm = design_matrices(probes, povm, standard_basis(d));
  Real worst = 0.0;
  for (int j = 0; j < probes.size(); ++j)
    for (int l = 0; l < povm.size(); ++l) {
      const Matrix expect = kron_loops(probes.states[static_cast<std::size_t>(j)].transpose(), povm.effects[static_cast<std::size_t>(l)]);
      worst = std::max(worst, (dm.at(j, l).adjoint() - expect).cwiseAbs().maxCoeff());
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("probabilities agree with direct map application in every basis") {
  const int d = 3;
  const KrausSet k = random_tp_cp_map(d, 4, 2);
  const ProbeSet probes = mub_probe_kets(d);
  const Povm povm = mub_povm(d);
  RealMatrix expect(probes.size(), povm.size());
  for (int j = 0; j < probes.size(); ++j) {
    const Matrix out = act(k, probes.states[static_cast<std::size_t>(j)]);
    for (int l = 0; l < povm.size(); ++l) expect(j, l) = (povm.effects[static_cast<std::size_t>(l)] * out).trace().real();
  }
  for (const auto& basis : {standard_basis(d), gellmann_basis(d), traceless_identity_basis(d),
                            rotated_basis(haar_unitary(d, 1), gellmann_basis(d))}) {
    const RealMatrix p = probabilities(kraus_to_process(k, basis), design_matrices(probes, povm, basis));
    CHECK((p - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK((probabilities_from_choi(kraus_to_choi(k), probes, povm) - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((expect.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("maximally mixed probe with the trivial effect has probability 1") {
  const int d = 4;
  ProbeSet probes;
  probes.dim = d;
  probes.states = {Matrix::Identity(d, d) / Real(d)};
  probes.labels = {"I/d"};
  Povm povm;
  povm.dim = d;
  povm.effects = {Matrix::Identity(d, d)};
  povm.labels = {"I"};
  const OperatorBasis gm = gellmann_basis(d);
  const KrausSet k = random_tp_cp_map(d, 3, 8);
  const RealMatrix p = probabilities(kraus_to_process(k, gm), design_matrices(probes, povm, gm));
  CHECK(p(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity channel, probe |0>, MUB POVM") {
  const int d = 5;
  const RealMatrix p =
      probabilities_from_choi(kraus_to_choi(KrausSet{{Matrix::Identity(d, d)}}), standard_probe_kets(d).prefix(1), mub_povm(d));
  CHECK(p(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("pure-state POVM first outcome is a |c_00|^2") {
  const int d = 5;
  const Real w = default_povm_weight(d);
  const Matrix u = haar_unitary(d, 3);
  const RealMatrix p = probabilities_from_choi(kraus_to_choi(KrausSet{{u}}), standard_probe_kets(d).prefix(1),
                                               pure_state_povm(d, w, w));
  CHECK(p(0, 0) == doctest::Approx(w * std::norm(u(0, 0))).epsilon(1e-12));
}

TEST_CASE("prefixes keep the leading rows") {
  const int d = 3;
  const DesignMatrix dm = design_matrices(standard_probe_kets(d), mub_povm(d), gellmann_basis(d));
  const DesignMatrix pre = dm.prefix(2);
  CHECK(pre.num_probes == 2);
  CHECK(pre.rows() == 2 * dm.num_effects);
  CHECK((pre.at(1, 3) - dm.at(1, 3)).norm() == 0.0);
  CHECK_THROWS_AS(dm.prefix(dm.num_probes + 1), Error);
}

TEST_CASE("noise model") {
  RealMatrix p = RealMatrix::Constant(3, 4, 0.25);
  SUBCASE("sigma = 0 reproduces p") {
    CHECK((simulate_record(p, 0.0, 5).freqs - p).norm() == 0.0);
  }
  SUBCASE("same seed gives identical records, prefixes share noise") {
    const MeasurementRecord a = simulate_record(p, 1e-3, 11);
    const MeasurementRecord b = simulate_record(p, 1e-3, 11);
    CHECK((a.freqs - b.freqs).norm() == 0.0);
    const MeasurementRecord c = simulate_record(p.topRows(2), 1e-3, 11);
    CHECK((c.freqs - a.freqs.topRows(2)).norm() == 0.0);
    CHECK((simulate_record(p, 1e-3, 12).freqs - a.freqs).norm() > 0.0);
  }
  SUBCASE("sample mean and standard deviation of one cell") {
    const Real sigma = 1e-4;
    const int n = 10000;
    RealMatrix one = RealMatrix::Constant(1, 1, 0.3);
    Real sum = 0.0;
    Real sq = 0.0;
    for (int s = 0; s < n; ++s) {
      const Real f = simulate_record(one, sigma, derive_seed(99, {static_cast<std::uint64_t>(s)})).freqs(0, 0);
      sum += f;
      sq += f * f;
    }
    const Real mean = sum / n;
    const Real sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean - 0.3) < 5.0 * sigma / std::sqrt(Real(n)));
    CHECK(std::abs(sd - sigma) < 0.1 * sigma);
  }
  SUBCASE("negative sigma is rejected") { CHECK_THROWS_AS(simulate_record(p, -1.0, 1), Error); }
}

TEST_CASE("record CSV round trip is exact") {
  RealMatrix p(2, 3);
  p << 0.1, 0.2, 0.7, 1.0 / 3.0, 1e-17, -2e-5;
  MeasurementRecord rec = simulate_record(p, 1e-4, 42);
  rec.dim = 2;
  rec.probe_kind = "uic-0n";
  rec.povm_kind = "mub";
  std::stringstream ss;
  write_record_csv(ss, rec);
  const MeasurementRecord back = read_record_csv(ss);
  CHECK(back.freqs == rec.freqs);
  CHECK(back.sigma == rec.sigma);
  CHECK(back.seed == rec.seed);
  CHECK(back.dim == 2);
  CHECK(back.probe_kind == "uic-0n");
  CHECK(back.povm_kind == "mub");

  std::stringstream bad("not a record\n");
  CHECK_THROWS_AS(read_record_csv(bad), Error);
}
