#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpt/harness.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace qpt;

namespace {

ExperimentSpec small(const std::string& name) {
  ExperimentSpec s = default_spec(name);
  s.dim = 3;
  s.trials = 2;
  s.seed = 42;
  if (s.experiment == Experiment::fig2) s.points_per_trial = 2;
  if (s.experiment == Experiment::fig3) {
    s.bands = {0.9};
    s.max_probes = 3;
  }
  return s;
}

int count_lines(const std::string& text) {
  int n = 0;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) n += !line.empty() && line[0] != '#';
  return n;
}

}  // namespace

TEST_CASE("default specs") {
  CHECK(default_spec("fig1").experiment == Experiment::fig1);
  CHECK(default_spec("fig1-noiseless").sigmas == std::vector<Real>{0.0});
  CHECK(default_spec("fig1-noisy").sigmas == std::vector<Real>{1e-4});
  CHECK(default_spec("fig2").sigmas == std::vector<Real>{1e-4});
  CHECK(default_spec("fig2-coherent").error_kinds == std::vector<ErrorKind>{ErrorKind::coherent});
  CHECK(default_spec("fig2-incoherent").error_kinds == std::vector<ErrorKind>{ErrorKind::incoherent});
  CHECK(default_spec("fig3").bands == std::vector<Real>{0.97, 0.90, 0.83});
  CHECK(default_spec("fig3").dim == 5);
  CHECK_THROWS_AS(default_spec("fig4"), Error);
}

TEST_CASE("spec JSON round trip and validation") {
  for (const char* name : {"fig1", "fig2", "fig3"}) {
    const ExperimentSpec s = small(name);
    const ExperimentSpec t = spec_from_json(Json::parse(spec_to_json(s).dump()));
    CHECK(spec_to_json(t) == spec_to_json(s));
  }
  const ExperimentSpec over = spec_from_json(Json::parse(R"({"trials": 7, "sigma": 0.001})"), small("fig2"));
  CHECK(over.trials == 7);
  CHECK(over.sigmas == std::vector<Real>{1e-3});
  CHECK(over.experiment == Experiment::fig2);

  ExperimentSpec bad = small("fig1");
  bad.dim = 1;
  CHECK_THROWS_AS(validate_spec(bad), Error);
  bad = small("fig3");
  bad.max_probes = 10;
  CHECK_THROWS_AS(validate_spec(bad), Error);
  bad = small("fig2");
  bad.sigmas = {-1.0};
  CHECK_THROWS_AS(validate_spec(bad), Error);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"trials": "many"})"), small("fig1")), Error);
}

TEST_CASE("fig1 output") {
  const ExperimentSpec s = small("fig1");
  const std::string csv = run_experiment(s);
  CHECK(count_lines(csv) - 1 == s.trials * rows_per_trial(s));
  CHECK(rows_per_trial(s) == 2 * 3 * 9);
  const ExperimentTable t = parse_experiment_csv(csv);
  CHECK(t.columns == csv_columns(Experiment::fig1));
  CHECK(t.build == build_tag());
  CHECK(t.spec == spec_to_json(s));
  REQUIRE(t.rows.size() == static_cast<std::size_t>(s.trials * rows_per_trial(s)));
  std::set<std::string> orderings;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    orderings.insert(t.text(r, "ordering"));
    const Real f = t.number(r, "fidelity");
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-9);
    const int k = static_cast<int>(t.number(r, "k"));
    const Real sigma = t.number(r, "sigma");
    // Complete probe sets fix the map on noiseless data.
    if (k == 9 && sigma == 0.0) CHECK(f > 1 - 1e-4);
    // UIC prefixes identify the unitary on noiseless data.
    if (sigma == 0.0 && k >= 3 && t.text(r, "ordering") != "nc") CHECK(f > 1 - 1e-3);
    // Commuting prefixes leave the phases free.
    if (sigma == 0.0 && k <= 3 && t.text(r, "ordering") == "nc") CHECK(f < 0.999);
  }
  CHECK(orderings == std::set<std::string>{"nc", "uic-0n-then-nc", "uic-n+-then-mub"});
}

TEST_CASE("fig2 output") {
  const ExperimentSpec s = small("fig2");
  const ExperimentTable t = parse_experiment_csv(run_experiment(s));
  REQUIRE(t.rows.size() == static_cast<std::size_t>(s.trials * rows_per_trial(s)));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.text(r, "status") == "converged");
    const Real fta = t.number(r, "fid_target_applied");
    const Real fea = t.number(r, "fid_est_applied");
    const Real fet = t.number(r, "fid_est_target");
    CHECK(fta > 0.0);
    CHECK(fta <= 1.0 + 1e-12);
    CHECK(fea > 0.3);
    CHECK(fea <= 1.0 + 1e-9);
    CHECK(fet >= 0.0);
    // Parameter ranges of the error draws.
    const Real p = t.number(r, "param");
    if (t.text(r, "kind") == "coherent") CHECK(p <= s.eta_max);
    else CHECK(p <= s.xi_max);
  }
  // Every estimator sees the same error maps.
  for (std::size_t r = 0; r + 2 < t.rows.size(); r += 3) {
    CHECK(t.number(r, "fid_target_applied") == t.number(r + 1, "fid_target_applied"));
    CHECK(t.number(r, "fid_target_applied") == t.number(r + 2, "fid_target_applied"));
  }
}

TEST_CASE("fig3 output") {
  const ExperimentSpec s = small("fig3");
  const ExperimentTable t = parse_experiment_csv(run_experiment(s));
  REQUIRE(t.rows.size() == static_cast<std::size_t>(s.trials * rows_per_trial(s)));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Real fta = t.number(r, "fid_target_applied");
    CHECK(std::abs(fta - 0.9) <= s.band_width + 1e-12);
    CHECK(t.number(r, "k") >= 1);
    CHECK(t.number(r, "k") <= 3);
  }
}

TEST_CASE("runs are deterministic and independent of thread count") {
  const ExperimentSpec s = small("fig2");
  const std::string a = run_experiment(s);
  CHECK(run_experiment(s) == a);
  RunOptions two;
  two.threads = 2;
  CHECK(run_experiment(s, two) == a);
  ExperimentSpec other = s;
  other.seed = 43;
  CHECK(run_experiment(other) != a);
}

TEST_CASE("resume reproduces a full run") {
  ExperimentSpec s = small("fig1");
  s.sigmas = {1e-4};
  s.trials = 3;
  const std::string full = run_experiment(s);
  // Drop the last trial and half of the middle one.
  const ExperimentTable t = parse_experiment_csv(full);
  const int per = rows_per_trial(s);
  std::string partial;
  {
    std::istringstream is(full);
    int data = -1;
    for (std::string line; std::getline(is, line);) {
      if (!line.empty() && line[0] != '#') ++data;
      if (data >= per + per / 2) break;
      partial += line + "\n";
    }
  }
  RunOptions opts;
  opts.resume_from = partial;
  CHECK(run_experiment(s, opts) == full);
  // A mismatched header is ignored.
  ExperimentSpec other = s;
  other.seed = 7;
  opts.resume_from = partial;
  CHECK(run_experiment(other, opts) == run_experiment(other));
  CHECK(t.rows.size() == static_cast<std::size_t>(3 * per));
}

TEST_CASE("experiment CSV parsing") {
  const std::string text =
      "# qpt experiment fig1\n# build: x\n# spec: {\"experiment\":\"fig1\"}\n"
      "ordering,trial,k,fidelity,sigma,seed,status,iterations\n"
      "nc,0,1,nan,0,5,diverged,10\n";
  const ExperimentTable t = parse_experiment_csv(text);
  CHECK(t.build == "x");
  CHECK(t.spec.at("experiment") == "fig1");
  CHECK(std::isnan(t.number(0, "fidelity")));
  CHECK(t.number(0, "iterations") == 10);
  CHECK_THROWS_AS(t.column("missing"), Error);
  CHECK_THROWS_AS(parse_experiment_csv("a,b\n1,2,3\n"), Error);
}

TEST_CASE("plot job description") {
  const ExperimentSpec s = small("fig3");
  const Json j = plots_job(s, "out/fig3.csv", "out/fig3.png");
  CHECK(j.at("figure") == "fig3");
  CHECK(j.at("inputs") == Json::array({"out/fig3.csv"}));
  CHECK(j.at("output") == "out/fig3.png");
  CHECK(j.at("style").at("x") == "k");
  CHECK(j.at("style").at("x_range") == Json::array({1, 3}));
  CHECK(j.at("style").at("series") == Json::array({"LS", "CS_L1", "CS_TR"}));
  CHECK(csv_file_name(s) == "fig3.csv");
  const Json f1 = plots_job(small("fig1"), "a.csv", "a.png");
  CHECK(f1.at("style").at("panels") == Json::array({0.0, 1e-4}));
}
