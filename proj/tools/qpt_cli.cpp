// qpt: command-line front end for probe/POVM dumps, simulation, estimation,
// closed-form unitary reconstruction, experiments and self-validation.

#include "qpt/channels.hpp"
#include "qpt/closed_form.hpp"
#include "qpt/harness.hpp"
#include "qpt/io.hpp"
#include "qpt/measure.hpp"
#include "qpt/probes.hpp"
#include "qpt/random.hpp"
#include "qpt/solver.hpp"
#include "qpt/validate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace qpt;

namespace {

// sysexits(3) codes
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::parse_error:
    case ErrorCode::inconsistent_inputs:
    case ErrorCode::inconsistent_basis:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::not_a_cp_map:
    case ErrorCode::not_unitary_data:
    case ErrorCode::failure_set:
    case ErrorCode::degenerate_spectrum: return kExitData;
    case ErrorCode::invalid_dimension:
    case ErrorCode::invalid_argument:
    case ErrorCode::unsupported_dimension:
    case ErrorCode::infeasible_parameters: return kExitUsage;
    case ErrorCode::unreachable_band: return kExitSoftware;
  }
  return kExitSoftware;
}

void emit(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), ErrorCode::invalid_argument, "cannot create output directory " + dir);
}

std::string read_text(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::invalid_argument, "cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Probe set by ordering name (nc, uic-0n-then-nc, uic-n+-then-mub) or probe kind.
ProbeSet probe_set_by_name(int d, const std::string& name) {
  if (name == "nc" || name == "uic-0n-then-nc" || name == "uic-n+-then-mub")
    return ordered_probes(d, probe_ordering_from_string(name));
  switch (probe_kind_from_string(name)) {
    case ProbeKind::nc_order: return standard_probe_kets(d);
    case ProbeKind::mub_order: return mub_probe_kets(d);
    case ProbeKind::uic_0n: return uic_pure_zero_n(d);
    case ProbeKind::uic_n_plus: return uic_pure_plus(d);
    case ProbeKind::uic_mixed: return uic_mixed(d, default_mixed_spectrum(d));
    case ProbeKind::custom: break;
  }
  throw Error(ErrorCode::invalid_argument, "no built-in probe set named '" + name + "'");
}

Povm povm_by_name(int d, const std::string& name, int k, Real a, Real b) {
  const Real w = default_povm_weight(d);
  if (a <= 0.0) a = w;
  if (b <= 0.0) b = w;
  switch (povm_kind_from_string(name)) {
    case PovmKind::pure_state: return pure_state_povm(d, a, b);
    case PovmKind::truncated: return truncated_povm(d, k, a, b);
    case PovmKind::mub: return mub_povm(d);
    case PovmKind::custom: break;
  }
  throw Error(ErrorCode::invalid_argument, "no built-in POVM named '" + name + "'");
}

struct Options {
  int dim = 5;
  Real sigma = 0.0;
  std::uint64_t seed = 1;
  std::string out;

  // probe / povm
  std::string kind;
  std::string ordering;
  int step = 0;
  Real a = -1.0;
  Real b = -1.0;

  // simulate
  std::string probes = "uic-0n";
  std::string povm = "pure-state";
  std::string map = "haar";
  std::string map_file;
  std::string protocol;

  // estimate
  std::string record;
  std::string estimator = "LS";
  std::string target;
  std::string config;
  bool trace = false;

  // validate
  int validate_dim = 3;

  // reconstruct-unitary
  std::string input;

  // experiment
  std::string experiment;
  std::optional<int> trials;
  std::optional<int> exp_dim;
  std::optional<Real> exp_sigma;
  std::optional<std::uint64_t> exp_seed;
  std::vector<std::string> estimators;
  std::vector<std::string> orderings;
  int threads = 1;
  bool emit_plots = false;
  bool resume = false;
  bool quiet = false;
};

int cmd_probe(const Options& o) {
  const std::string name = !o.ordering.empty() ? o.ordering : (o.kind.empty() ? "uic-0n" : o.kind);
  ProbeSet p = probe_set_by_name(o.dim, name);
  emit(probes_to_json(p), o.out);
  return 0;
}

int cmd_povm(const Options& o) {
  const Povm p = povm_by_name(o.dim, o.kind.empty() ? "pure-state" : o.kind, o.step, o.a, o.b);
  emit(povm_to_json(p), o.out);
  return 0;
}

int cmd_simulate(const Options& o) {
  ensure_dir(o.out);
  const int d = o.dim;
  Json truth{{"dim", d}};
  KrausSet kraus;
  Matrix unitary;
  if (!o.map_file.empty()) {
    const Json j = read_json_file(o.map_file);
    if (j.contains("unitary")) {
      unitary = matrix_from_json(j.at("unitary"));
      kraus.ops = {unitary};
    } else if (j.contains("kraus")) {
      kraus = kraus_from_json(j);
    } else {
      kraus = choi_to_kraus(choi_from_json(j));
    }
  } else if (o.map == "haar") {
    unitary = haar_unitary(d, derive_seed(o.seed, {0x6d6170}));
    kraus.ops = {unitary};
  } else if (o.map == "random-cptp") {
    kraus = random_tp_cp_map(d, d * d, derive_seed(o.seed, {0x6d6170}));
  } else if (o.map == "identity") {
    unitary = Matrix::Identity(d, d);
    kraus.ops = {unitary};
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown map '" + o.map + "' (haar, random-cptp, identity)");
  }
  require(kraus.dim() == d, ErrorCode::dimension_mismatch, "map dimension does not match --dim");
  if (unitary.size() > 0) truth["unitary"] = matrix_to_json(unitary);
  truth["kraus"] = kraus_to_json(kraus)["kraus"];
  truth["choi"] = matrix_to_json(kraus_to_choi(kraus).mat);

  const std::string probe_name = !o.ordering.empty() ? o.ordering : o.probes;
  const ProbeSet probes = probe_set_by_name(d, probe_name);
  const Povm povm = povm_by_name(d, o.povm, 0, o.a, o.b);
  MeasurementRecord rec = simulate_record(probabilities_from_choi(kraus_to_choi(kraus), probes, povm), o.sigma,
                                          derive_seed(o.seed, {0x6e6f}));
  rec.dim = d;
  rec.probe_kind = probe_name;
  rec.povm_kind = to_string(povm.kind);
  {
    std::ofstream os(fs::path(o.out) / "record.csv");
    require(static_cast<bool>(os), ErrorCode::invalid_argument, "cannot write record.csv");
    write_record_csv(os, rec);
  }
  write_json_file((fs::path(o.out) / "truth.json").string(), truth);

  if (!o.protocol.empty()) {
    require(unitary.size() > 0, ErrorCode::invalid_argument, "--protocol needs a unitary map");
    const Real w = default_povm_weight(d);
    Json tables{{"dim", d}, {"protocol", o.protocol}};
    if (o.protocol == "sequential" || o.protocol == "minimal") {
      const auto t = o.protocol == "sequential" ? sequential_tables(unitary, w, w) : minimal_tables(unitary, w, w);
      tables["a"] = w;
      tables["b"] = w;
      tables["tables"] = Json::array();
      for (const auto& row : t) tables["tables"].push_back(real_vector_to_json(row));
    } else if (o.protocol == "mixed") {
      const RealVector lambda = default_mixed_spectrum(d);
      const auto [r0, r1] = mixed_uic_outputs(unitary, lambda);
      tables["lambda"] = real_vector_to_json(lambda);
      tables["outputs"] = Json::array({matrix_to_json(r0), matrix_to_json(r1)});
    } else if (o.protocol == "sequential-states") {
      tables["outputs"] = Json::array();
      for (const auto& m : sequential_outputs(unitary)) tables["outputs"].push_back(matrix_to_json(m));
    } else {
      throw Error(ErrorCode::invalid_argument,
                  "unknown protocol '" + o.protocol + "' (sequential, minimal, mixed, sequential-states)");
    }
    write_json_file((fs::path(o.out) / "tables.json").string(), tables);
  }
  std::cout << (fs::path(o.out) / "record.csv").string() << '\n';
  return 0;
}

int cmd_estimate(const Options& o) {
  ensure_dir(o.out);
  std::ifstream is(o.record);
  require(static_cast<bool>(is), ErrorCode::invalid_argument, "cannot open " + o.record);
  const MeasurementRecord rec = read_record_csv(is);
  const int d = rec.dim;
  const ProbeSet probes = probe_set_by_name(d, rec.probe_kind).prefix(rec.num_probes());
  const Povm povm = povm_by_name(d, rec.povm_kind, 0, o.a, o.b);
  require(povm.size() == rec.num_effects(), ErrorCode::inconsistent_inputs, "record does not match its POVM");

  EstimatorConfig cfg;
  if (!o.config.empty()) {
    const Json j = read_json_file(o.config);
    cfg = estimator_config_from_json(j.contains("solver") ? j.at("solver") : j, cfg);
  }
  cfg.kind = estimator_kind_from_string(o.estimator);
  cfg.record_trace = o.trace;
  Matrix target = Matrix::Identity(d, d);
  if (!o.target.empty()) {
    const Json j = read_json_file(o.target);
    target = matrix_from_json(j.contains("unitary") ? j.at("unitary") : j);
  } else {
    require(cfg.kind != EstimatorKind::cs_l1, ErrorCode::invalid_argument, "CS_L1 needs --target");
  }
  const DesignMatrix dm = design_matrices(probes, povm, estimator_basis(cfg.kind, target));
  const Estimate e = admm_solve(rec, dm, cfg);
  Json j = estimate_to_json(e);
  j["estimator"] = to_string(cfg.kind);
  j["choi"] = choi_to_json(process_to_choi(e.chi_hat));
  if (!o.target.empty()) j["fidelity_to_target"] = unitary_fidelity(e.chi_hat, target);
  write_json_file((fs::path(o.out) / "estimate.json").string(), j);
  if (o.trace) {
    std::ofstream ts(fs::path(o.out) / "trace.csv");
    ts << "iter,primal,dual,rho,objective\n";
    ts.precision(17);
    for (const auto& r : e.trace)
      ts << r.iter << ',' << r.primal << ',' << r.dual << ',' << r.rho << ',' << r.objective << '\n';
  }
  std::cout << to_string(cfg.kind) << " status=" << to_string(e.status) << " iterations=" << e.iterations
            << " data_fit=" << e.data_fit << '\n';
  return 0;
}

int cmd_reconstruct(const Options& o) {
  const Json j = read_json_file(o.input);
  const std::string protocol = j.value("protocol", std::string("sequential"));
  UnitaryEstimate e;
  if (protocol == "sequential" || protocol == "minimal") {
    const Real a = j.at("a").get<Real>();
    const Real b = j.at("b").get<Real>();
    std::vector<RealVector> tables;
    for (const auto& t : j.at("tables")) tables.push_back(real_vector_from_json(t));
    e = protocol == "sequential" ? reconstruct_sequential_from_povm(tables, a, b) : reconstruct_minimal(tables, a, b);
  } else if (protocol == "mixed") {
    const auto& outs = j.at("outputs");
    require(outs.size() == 2, ErrorCode::parse_error, "mixed protocol needs two output states");
    e = reconstruct_from_mixed_uic(matrix_from_json(outs[0]), matrix_from_json(outs[1]),
                                   real_vector_from_json(j.at("lambda")));
  } else if (protocol == "sequential-states") {
    std::vector<Matrix> outs;
    for (const auto& m : j.at("outputs")) outs.push_back(matrix_from_json(m));
    e = reconstruct_sequential(outs);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown protocol '" + protocol + "'");
  }
  emit(unitary_estimate_to_json(e), o.out);
  return 0;
}

int cmd_experiment(const Options& o) {
  ExperimentSpec s = default_spec(o.experiment);
  if (!o.config.empty()) {
    const Json j = read_json_file(o.config);
    if (j.contains("experiment")) {
      const ExperimentSpec named = default_spec(j.at("experiment").get<std::string>());
      require(named.experiment == s.experiment, ErrorCode::invalid_argument,
              "config is for a different experiment than '" + o.experiment + "'");
    }
    s = spec_from_json(j, s);
  }
  if (o.trials) s.trials = *o.trials;
  if (o.exp_dim) s.dim = *o.exp_dim;
  if (o.exp_sigma) s.sigmas = {*o.exp_sigma};
  if (o.exp_seed) s.seed = *o.exp_seed;
  if (!o.estimators.empty()) {
    s.estimators.clear();
    for (const auto& e : o.estimators) s.estimators.push_back(estimator_kind_from_string(e));
  }
  if (!o.orderings.empty()) {
    s.orderings.clear();
    for (const auto& e : o.orderings) s.orderings.push_back(probe_ordering_from_string(e));
  }
  validate_spec(s);

  ensure_dir(o.out);
  const fs::path csv = fs::path(o.out) / csv_file_name(s);
  RunOptions ro;
  ro.threads = o.threads;
  if (!o.quiet) ro.log = &std::cerr;
  if (o.resume && fs::exists(csv)) ro.resume_from = read_text(csv.string());
  const std::string text = run_experiment(s, ro);
  {
    std::ofstream os(csv, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::invalid_argument, "cannot write " + csv.string());
    os << text;
  }
  if (o.emit_plots) {
    const fs::path job = fs::path(o.out) / (std::string(to_string(s.experiment)) + ".plot.json");
    const std::string image = std::string(to_string(s.experiment)) + ".png";
    write_json_file(job.string(), plots_job(s, csv.filename().string(), image));
    std::cout << job.string() << '\n';
  }
  std::cout << csv.string() << '\n';
  return 0;
}

int cmd_validate(const Options& o) {
  const auto results = run_validation(o.validate_dim, o.seed);
  for (const auto& r : results)
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  const bool ok = all_passed(results);
  std::cout << (ok ? "all checks passed" : "validation failed") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process tomography of unitary and near-unitary maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", build_tag());
  Options o;

  auto* probe = app.add_subcommand("probe", "Dump a built-in probe set as JSON");
  probe->add_option("--dim", o.dim, "Hilbert-space dimension")->capture_default_str();
  probe->add_option("--kind", o.kind, "nc-order, mub-order, uic-0n, uic-n+, uic-mixed");
  probe->add_option("--ordering", o.ordering, "nc, uic-0n-then-nc, uic-n+-then-mub");
  probe->add_option("--out", o.out, "Output file (default stdout)");

  auto* povm = app.add_subcommand("povm", "Dump a built-in POVM as JSON");
  povm->add_option("--dim", o.dim, "Hilbert-space dimension")->capture_default_str();
  povm->add_option("--kind", o.kind, "pure-state, truncated, mub");
  povm->add_option("--step", o.step, "Truncation step k for the truncated POVM");
  povm->add_option("--a", o.a, "Weight of E_0 (default 1/(4d))");
  povm->add_option("--b", o.b, "Weight of E_n (default 1/(4d))");
  povm->add_option("--out", o.out, "Output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate a measurement record of a map");
  sim->add_option("--dim", o.dim, "Hilbert-space dimension")->capture_default_str();
  sim->add_option("--sigma", o.sigma, "Gaussian noise scale")->capture_default_str();
  sim->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sim->add_option("--map", o.map, "haar, random-cptp, identity")->capture_default_str();
  sim->add_option("--map-file", o.map_file, "JSON map with 'unitary', 'kraus' or 'choi'");
  sim->add_option("--probes", o.probes, "Probe set name")->capture_default_str();
  sim->add_option("--ordering", o.ordering, "Probe ordering (overrides --probes)");
  sim->add_option("--povm", o.povm, "pure-state or mub")->capture_default_str();
  sim->add_option("--protocol", o.protocol, "Also write closed-form tables: sequential, minimal, mixed, sequential-states");
  sim->add_option("--out", o.out, "Output directory")->required();

  auto* est = app.add_subcommand("estimate", "Estimate the process matrix from a record");
  est->add_option("--record", o.record, "Record CSV written by simulate")->required();
  est->add_option("--estimator", o.estimator, "LS, CS_L1, CS_TR")->capture_default_str();
  est->add_option("--target", o.target, "JSON file with the target 'unitary'");
  est->add_option("--config", o.config, "Solver config JSON");
  est->add_flag("--trace", o.trace, "Write per-iteration residuals to trace.csv");
  est->add_option("--out", o.out, "Output directory")->required();

  auto* rec = app.add_subcommand("reconstruct-unitary", "Closed-form unitary from a probability table");
  rec->add_option("--input", o.input, "Table JSON (see simulate --protocol)")->required();
  rec->add_option("--out", o.out, "Output file (default stdout)");

  auto* exp = app.add_subcommand("experiment", "Run a figure experiment and write its CSV");
  exp->add_option("name", o.experiment, "fig1, fig2, fig3 (or fig1-noiseless, fig1-noisy, fig2-coherent, fig2-incoherent)")
      ->required();
  exp->add_option("--config", o.config, "Experiment spec JSON");
  exp->add_option("--trials", o.trials, "Number of trials");
  exp->add_option("--dim", o.exp_dim, "Hilbert-space dimension");
  exp->add_option("--sigma", o.exp_sigma, "Single noise scale");
  exp->add_option("--seed", o.exp_seed, "Master seed");
  exp->add_option("--estimator", o.estimators, "Estimators (repeatable)");
  exp->add_option("--ordering", o.orderings, "Probe orderings for fig1 (repeatable)");
  exp->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_flag("--emit-plots-input", o.emit_plots, "Also write the plotting job file");
  exp->add_flag("--resume", o.resume, "Keep complete trials of an existing CSV with the same spec");
  exp->add_flag("--quiet", o.quiet, "No progress messages");
  exp->add_option("--out", o.out, "Output directory")->required();

  auto* val = app.add_subcommand("validate", "Run the invariant suites");
  val->add_option("--dim", o.validate_dim, "Hilbert-space dimension")->capture_default_str();
  val->add_option("--seed", o.seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.back()->help());
    return kExitUsage;
  }

  try {
    if (probe->parsed()) return cmd_probe(o);
    if (povm->parsed()) return cmd_povm(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (est->parsed()) return cmd_estimate(o);
    if (rec->parsed()) return cmd_reconstruct(o);
    if (exp->parsed()) return cmd_experiment(o);
    return cmd_validate(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSoftware;
  }
}
