#include "qpt/harness.hpp"

#include "qpt/random.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef QPT_BUILD_TAG
#define QPT_BUILD_TAG "unknown"
#endif

namespace qpt {

namespace {

constexpr std::uint64_t kTagTarget = 0x7461;
constexpr std::uint64_t kTagError = 0x6572;
constexpr std::uint64_t kTagNoise = 0x6e6f;

std::uint64_t experiment_tag(Experiment e) { return static_cast<std::uint64_t>(e) + 1; }
std::uint64_t real_tag(Real x) { return std::bit_cast<std::uint64_t>(x); }

std::string fmt(Real x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t n = 0; n < cells.size(); ++n) {
    if (n) out += ',';
    out += cells[n];
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct Solved {
  Estimate est;
  std::string status;
  bool ok = false;
};

Solved solve(const MeasurementRecord& rec, const DesignMatrix& dm, EstimatorConfig cfg, EstimatorKind kind) {
  cfg.kind = kind;
  cfg.record_trace = false;
  Solved s{Estimate{.chi_hat = ProcessMatrix{dm.basis, Matrix()}}, "", false};
  try {
    s.est = admm_solve(rec, dm, cfg);
    s.status = to_string(s.est.status);
    s.ok = true;
  } catch (const Error& e) {
    s.status = to_string(e.code());
  }
  return s;
}

Real safe_process(const Solved& s, const ProcessMatrix& ref) {
  if (!s.ok) return std::nan("");
  try {
    return process_fidelity(s.est.chi_hat, ref);
  } catch (const Error&) {
    return std::nan("");
  }
}

Real safe_unitary(const Solved& s, const Matrix& u) { return s.ok ? unitary_fidelity(s.est.chi_hat, u) : std::nan(""); }

// ---- fig1 ----------------------------------------------------------------

struct Fig1Context {
  std::vector<ProbeOrdering> orderings;
  std::vector<DesignMatrix> designs;
};

Fig1Context fig1_context(const ExperimentSpec& s) {
  Fig1Context c;
  const int d = s.dim;
  const OperatorBasis basis = gellmann_basis(d);
  const Povm povm = pure_state_povm(d, default_povm_weight(d), default_povm_weight(d));
  for (auto o : s.orderings) {
    c.orderings.push_back(o);
    c.designs.push_back(design_matrices(ordered_probes(d, o), povm, basis));
  }
  return c;
}

std::vector<std::string> fig1_trial(const ExperimentSpec& s, const Fig1Context& c, int trial) {
  const int d = s.dim;
  const auto et = experiment_tag(s.experiment);
  const auto t = static_cast<std::uint64_t>(trial);
  const Matrix u = haar_unitary(d, derive_seed(s.seed, {et, t, kTagTarget}));
  std::vector<std::string> rows;
  for (std::size_t si = 0; si < s.sigmas.size(); ++si) {
    const Real sigma = s.sigmas[si];
    for (std::size_t oi = 0; oi < c.orderings.size(); ++oi) {
      const DesignMatrix& dm = c.designs[oi];
      const auto otag = static_cast<std::uint64_t>(c.orderings[oi]);
      const std::uint64_t noise_seed = derive_seed(s.seed, {et, t, kTagNoise, real_tag(sigma), otag});
      const MeasurementRecord rec = simulate_record(probabilities(unitary_process(u, dm.basis), dm), sigma, noise_seed);
      for (int k = 1; k <= dm.num_probes; ++k) {
        const Solved r = solve(rec.prefix(k), dm.prefix(k), s.solver, EstimatorKind::ls);
        rows.push_back(join({to_string(c.orderings[oi]), std::to_string(trial), std::to_string(k),
                             fmt(safe_unitary(r, u)), fmt(sigma), std::to_string(noise_seed), r.status,
                             std::to_string(r.ok ? r.est.iterations : 0)}));
      }
    }
  }
  return rows;
}

// ---- fig2 / fig3 shared -------------------------------------------------

struct EstimatorSetup {
  EstimatorKind kind;
  DesignMatrix design;
};

std::vector<EstimatorSetup> estimator_setups(const ExperimentSpec& s, const Matrix& target, const ProbeSet& probes,
                                             const Povm& povm) {
  std::vector<EstimatorSetup> out;
  for (auto k : s.estimators) out.push_back({k, design_matrices(probes, povm, estimator_basis(k, target))});
  return out;
}

// ---- fig2 ----------------------------------------------------------------

int kraus_rank(const ExperimentSpec& s) { return s.n_kraus > 0 ? s.n_kraus : s.dim * s.dim; }

std::vector<std::string> fig2_trial(const ExperimentSpec& s, int trial) {
  const int d = s.dim;
  const auto et = experiment_tag(s.experiment);
  const auto t = static_cast<std::uint64_t>(trial);
  const Matrix u = haar_unitary(d, derive_seed(s.seed, {et, t, kTagTarget}));
  const ProbeSet probes = uic_pure_zero_n(d);
  const Povm povm = mub_povm(d);
  const auto setups = estimator_setups(s, u, probes, povm);
  const OperatorBasis std_basis = standard_basis(d);
  std::vector<std::string> rows;
  for (auto kind : s.error_kinds) {
    const auto ktag = static_cast<std::uint64_t>(kind);
    for (int p = 0; p < s.points_per_trial; ++p) {
      const auto ptag = static_cast<std::uint64_t>(p);
      ErrorSpec e;
      e.kind = kind;
      e.target = u;
      e.seed = derive_seed(s.seed, {et, t, kTagError, ktag, ptag});
      Rng rng = make_rng(e.seed);
      Real param = 0.0;
      if (kind == ErrorKind::coherent) {
        param = e.eta = std::uniform_real_distribution<Real>(0.0, s.eta_max)(rng);
        e.hamiltonian = random_hermitian_unit_trace(d, derive_seed(e.seed, {1}));
        e.achieved_fidelity = coherent_fidelity(e.hamiltonian, e.eta);
      } else {
        param = e.xi = std::uniform_real_distribution<Real>(0.0, s.xi_max)(rng);
        e.kraus = random_tp_cp_map(d, kraus_rank(s), derive_seed(e.seed, {2}));
      }
      const ProcessMatrix chi_a = e.applied(std_basis);
      if (kind == ErrorKind::incoherent) e.achieved_fidelity = unitary_fidelity(chi_a, u);
      const RealMatrix prob = probabilities_from_choi(process_to_choi(chi_a), probes, povm);
      for (std::size_t si = 0; si < s.sigmas.size(); ++si) {
        const Real sigma = s.sigmas[si];
        const std::uint64_t noise_seed = derive_seed(s.seed, {et, t, kTagNoise, ktag, ptag, real_tag(sigma)});
        MeasurementRecord rec = simulate_record(prob, sigma, noise_seed);
        rec.dim = d;
        for (const auto& st : setups) {
          const Solved r = solve(rec, st.design, s.solver, st.kind);
          rows.push_back(join({to_string(kind), std::to_string(trial), std::to_string(p), fmt(e.achieved_fidelity),
                               to_string(st.kind), fmt(safe_process(r, chi_a)), fmt(safe_unitary(r, u)),
                               fmt(param), fmt(sigma), std::to_string(e.seed), r.status,
                               std::to_string(r.ok ? r.est.iterations : 0)}));
        }
      }
    }
  }
  return rows;
}

// ---- fig3 ----------------------------------------------------------------

int fig3_probes(const ExperimentSpec& s) { return s.max_probes > 0 ? s.max_probes : s.dim * s.dim; }

std::vector<std::string> fig3_trial(const ExperimentSpec& s, int trial) {
  const int d = s.dim;
  const int kmax = fig3_probes(s);
  const auto et = experiment_tag(s.experiment);
  const auto t = static_cast<std::uint64_t>(trial);
  const Matrix u = haar_unitary(d, derive_seed(s.seed, {et, t, kTagTarget}));
  const ProbeSet probes = ordered_probes(d, ProbeOrdering::uic_0n_then_nc).prefix(kmax);
  const Povm povm = mub_povm(d);
  const auto setups = estimator_setups(s, u, probes, povm);
  const OperatorBasis std_basis = standard_basis(d);
  CalibrationOptions copts;
  copts.eta_max = s.eta_max;
  copts.n_kraus = kraus_rank(s);
  std::vector<std::string> rows;
  for (auto kind : s.error_kinds) {
    const auto ktag = static_cast<std::uint64_t>(kind);
    for (Real band : s.bands) {
      const std::uint64_t eseed = derive_seed(s.seed, {et, t, kTagError, ktag, real_tag(band)});
      ErrorSpec e;
      std::string failure;
      try {
        e = calibrate_to_fidelity_band(kind, u, band, s.band_width, eseed, copts);
      } catch (const Error& ex) {
        failure = to_string(ex.code());
      }
      if (!failure.empty()) {
        for (std::size_t si = 0; si < s.sigmas.size(); ++si)
          for (const auto& st : setups)
            for (int k = 1; k <= kmax; ++k)
              rows.push_back(join({to_string(kind), fmt(band), std::to_string(trial), to_string(st.kind),
                                   std::to_string(k), "nan", "nan", "nan", fmt(s.sigmas[si]), std::to_string(eseed),
                                   failure, "0"}));
        continue;
      }
      const ProcessMatrix chi_a = e.applied(std_basis);
      const RealMatrix prob = probabilities_from_choi(process_to_choi(chi_a), probes, povm);
      for (std::size_t si = 0; si < s.sigmas.size(); ++si) {
        const Real sigma = s.sigmas[si];
        const std::uint64_t noise_seed = derive_seed(s.seed, {et, t, kTagNoise, ktag, real_tag(band), real_tag(sigma)});
        MeasurementRecord rec = simulate_record(prob, sigma, noise_seed);
        rec.dim = d;
        for (const auto& st : setups) {
          for (int k = 1; k <= kmax; ++k) {
            const Solved r = solve(rec.prefix(k), st.design.prefix(k), s.solver, st.kind);
            rows.push_back(join({to_string(kind), fmt(band), std::to_string(trial), to_string(st.kind),
                                 std::to_string(k), fmt(e.achieved_fidelity), fmt(safe_process(r, chi_a)),
                                 fmt(safe_unitary(r, u)), fmt(sigma), std::to_string(e.seed), r.status,
                                 std::to_string(r.ok ? r.est.iterations : 0)}));
          }
        }
      }
    }
  }
  return rows;
}

std::string header_block(const ExperimentSpec& s) {
  std::string h = std::string("# qpt experiment ") + to_string(s.experiment) + "\n";
  h += "# build: " + build_tag() + "\n";
  h += "# spec: " + spec_to_json(s).dump() + "\n";
  h += join(csv_columns(s.experiment)) + "\n";
  return h;
}

template <class E>
std::vector<std::string> names(const std::vector<E>& v) {
  std::vector<std::string> out;
  for (auto x : v) out.emplace_back(to_string(x));
  return out;
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::fig1: return "fig1";
    case Experiment::fig2: return "fig2";
    case Experiment::fig3: return "fig3";
  }
  return "unknown";
}

ExperimentSpec default_spec(const std::string& name) {
  ExperimentSpec s;
  if (name == "fig1" || name == "fig1-noiseless" || name == "fig1-noisy") {
    s.experiment = Experiment::fig1;
    s.trials = 50;
    if (name == "fig1-noiseless") s.sigmas = {0.0};
    if (name == "fig1-noisy") s.sigmas = {1e-4};
  } else if (name == "fig2" || name == "fig2-coherent" || name == "fig2-incoherent") {
    s.experiment = Experiment::fig2;
    s.trials = 20;
    s.sigmas = {1e-4};
    if (name == "fig2-coherent") s.error_kinds = {ErrorKind::coherent};
    if (name == "fig2-incoherent") s.error_kinds = {ErrorKind::incoherent};
  } else if (name == "fig3") {
    s.experiment = Experiment::fig3;
    s.trials = 20;
    s.sigmas = {1e-4};
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown experiment '" + name + "'");
  }
  return s;
}

Json spec_to_json(const ExperimentSpec& s) {
  Json j{{"experiment", to_string(s.experiment)},
         {"dim", s.dim},
         {"trials", s.trials},
         {"sigmas", s.sigmas},
         {"seed", s.seed},
         {"solver", estimator_config_to_json(s.solver)}};
  switch (s.experiment) {
    case Experiment::fig1:
      j["orderings"] = names(s.orderings);
      break;
    case Experiment::fig2:
      j["estimators"] = names(s.estimators);
      j["error_kinds"] = names(s.error_kinds);
      j["points_per_trial"] = s.points_per_trial;
      j["eta_max"] = s.eta_max;
      j["xi_max"] = s.xi_max;
      j["n_kraus"] = s.n_kraus;
      break;
    case Experiment::fig3:
      j["estimators"] = names(s.estimators);
      j["error_kinds"] = names(s.error_kinds);
      j["bands"] = s.bands;
      j["band_width"] = s.band_width;
      j["eta_max"] = s.eta_max;
      j["n_kraus"] = s.n_kraus;
      j["max_probes"] = fig3_probes(s);
      break;
  }
  return j;
}

ExperimentSpec spec_from_json(const Json& j) {
  require(j.is_object() && j.contains("experiment"), ErrorCode::parse_error, "spec needs an 'experiment' field");
  return spec_from_json(j, default_spec(j.at("experiment").get<std::string>()));
}

ExperimentSpec spec_from_json(const Json& j, ExperimentSpec s) {
  require(j.is_object(), ErrorCode::parse_error, "spec must be an object");
  try {
    if (j.contains("experiment")) {
      const ExperimentSpec named = default_spec(j.at("experiment").get<std::string>());
      if (named.experiment != s.experiment) s = named;
    }
    s.dim = j.value("dim", s.dim);
    s.trials = j.value("trials", s.trials);
    if (j.contains("sigma")) s.sigmas = {j.at("sigma").get<Real>()};
    if (j.contains("sigmas")) s.sigmas = j.at("sigmas").get<std::vector<Real>>();
    s.seed = j.value("seed", s.seed);
    if (j.contains("orderings")) {
      s.orderings.clear();
      for (const auto& o : j.at("orderings")) s.orderings.push_back(probe_ordering_from_string(o.get<std::string>()));
    }
    if (j.contains("estimators")) {
      s.estimators.clear();
      for (const auto& e : j.at("estimators")) s.estimators.push_back(estimator_kind_from_string(e.get<std::string>()));
    }
    if (j.contains("error_kinds")) {
      s.error_kinds.clear();
      for (const auto& e : j.at("error_kinds")) s.error_kinds.push_back(error_kind_from_string(e.get<std::string>()));
    }
    s.points_per_trial = j.value("points_per_trial", s.points_per_trial);
    s.eta_max = j.value("eta_max", s.eta_max);
    s.xi_max = j.value("xi_max", s.xi_max);
    s.n_kraus = j.value("n_kraus", s.n_kraus);
    if (j.contains("bands")) s.bands = j.at("bands").get<std::vector<Real>>();
    s.band_width = j.value("band_width", s.band_width);
    s.max_probes = j.value("max_probes", s.max_probes);
    if (j.contains("solver")) s.solver = estimator_config_from_json(j.at("solver"), s.solver);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::parse_error, ex.what());
  }
  validate_spec(s);
  return s;
}

void validate_spec(const ExperimentSpec& s) {
  require(s.dim >= 2, ErrorCode::invalid_dimension, "dim must be >= 2");
  require(s.trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
  require(!s.sigmas.empty(), ErrorCode::invalid_argument, "at least one sigma is required");
  for (Real x : s.sigmas) require(x >= 0.0, ErrorCode::invalid_argument, "sigma must be non-negative");
  if (s.experiment == Experiment::fig1) {
    require(!s.orderings.empty(), ErrorCode::invalid_argument, "at least one ordering is required");
  } else {
    require(!s.estimators.empty() && !s.error_kinds.empty(), ErrorCode::invalid_argument,
            "estimators and error kinds must be non-empty");
    require(is_prime(s.dim), ErrorCode::unsupported_dimension, "the MUB measurement needs a prime dimension");
    require(s.n_kraus >= 0 && s.n_kraus <= s.dim * s.dim, ErrorCode::invalid_argument, "n_kraus must be in [0, d^2]");
  }
  if (s.experiment == Experiment::fig2) {
    require(s.points_per_trial >= 1, ErrorCode::invalid_argument, "points_per_trial must be >= 1");
    require(s.eta_max >= 0.0 && s.xi_max >= 0.0 && s.xi_max <= 1.0, ErrorCode::invalid_argument,
            "eta_max >= 0 and xi_max in [0, 1] required");
  }
  if (s.experiment == Experiment::fig3) {
    require(!s.bands.empty() && s.band_width > 0.0, ErrorCode::invalid_argument, "bands and band_width required");
    for (Real b : s.bands) require(b > 0.0 && b <= 1.0, ErrorCode::invalid_argument, "band centre must be in (0, 1]");
    require(s.max_probes >= 0 && s.max_probes <= s.dim * s.dim, ErrorCode::invalid_argument,
            "max_probes must be in [0, d^2]");
  }
}

std::string build_tag() { return QPT_BUILD_TAG; }

std::vector<std::string> csv_columns(Experiment e) {
  switch (e) {
    case Experiment::fig1: return {"ordering", "trial", "k", "fidelity", "sigma", "seed", "status", "iterations"};
    case Experiment::fig2:
      return {"kind",  "trial", "point", "fid_target_applied", "estimator", "fid_est_applied", "fid_est_target",
              "param", "sigma", "seed",  "status",             "iterations"};
    case Experiment::fig3:
      return {"kind",           "band",  "trial", "estimator", "k",      "fid_target_applied", "fid_est_applied",
              "fid_est_target", "sigma", "seed",  "status",    "iterations"};
  }
  return {};
}

int rows_per_trial(const ExperimentSpec& s) {
  const int ns = static_cast<int>(s.sigmas.size());
  const int ne = static_cast<int>(s.estimators.size());
  const int nk = static_cast<int>(s.error_kinds.size());
  switch (s.experiment) {
    case Experiment::fig1: return ns * static_cast<int>(s.orderings.size()) * s.dim * s.dim;
    case Experiment::fig2: return ns * ne * nk * s.points_per_trial;
    case Experiment::fig3: return ns * ne * nk * static_cast<int>(s.bands.size()) * fig3_probes(s);
  }
  return 0;
}

std::string run_experiment(const ExperimentSpec& s, const RunOptions& opts) {
  validate_spec(s);
  const std::string header = header_block(s);
  const int trial_col = [&] {
    const auto cols = csv_columns(s.experiment);
    for (std::size_t n = 0; n < cols.size(); ++n)
      if (cols[n] == "trial") return static_cast<int>(n);
    return -1;
  }();

  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(s.trials));
  std::vector<bool> done(static_cast<std::size_t>(s.trials), false);
  if (!opts.resume_from.empty() && opts.resume_from.compare(0, header.size(), header) == 0) {
    const ExperimentTable prev = parse_experiment_csv(opts.resume_from);
    std::map<int, std::vector<std::string>> by_trial;
    for (const auto& r : prev.rows) by_trial[std::stoi(r[static_cast<std::size_t>(trial_col)])].push_back(join(r));
    for (auto& [t, lines] : by_trial)
      if (t >= 0 && t < s.trials && static_cast<int>(lines.size()) == rows_per_trial(s)) {
        rows[static_cast<std::size_t>(t)] = std::move(lines);
        done[static_cast<std::size_t>(t)] = true;
      }
  }

  Fig1Context fig1;
  if (s.experiment == Experiment::fig1) fig1 = fig1_context(s);

  std::vector<int> pending;
  for (int t = 0; t < s.trials; ++t)
    if (!done[static_cast<std::size_t>(t)]) pending.push_back(t);

  std::atomic<std::size_t> next{0};
  std::atomic<int> finished{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const int t = pending[i];
      try {
        std::vector<std::string> r;
        switch (s.experiment) {
          case Experiment::fig1: r = fig1_trial(s, fig1, t); break;
          case Experiment::fig2: r = fig2_trial(s, t); break;
          case Experiment::fig3: r = fig3_trial(s, t); break;
        }
        rows[static_cast<std::size_t>(t)] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next.store(pending.size());
        return;
      }
      const int n = ++finished;
      if (opts.log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *opts.log << to_string(s.experiment) << ": trial " << t << " done (" << n << "/" << pending.size() << ")\n";
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(pending.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int n = 0; n < nthreads; ++n) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::string out = header;
  for (const auto& trial_rows : rows)
    for (const auto& line : trial_rows) out += line + "\n";
  return out;
}

std::string run_fig1(const ExperimentSpec& s, const RunOptions& opts) {
  require(s.experiment == Experiment::fig1, ErrorCode::invalid_argument, "spec is not a fig1 spec");
  return run_experiment(s, opts);
}

std::string run_fig2(const ExperimentSpec& s, const RunOptions& opts) {
  require(s.experiment == Experiment::fig2, ErrorCode::invalid_argument, "spec is not a fig2 spec");
  return run_experiment(s, opts);
}

std::string run_fig3(const ExperimentSpec& s, const RunOptions& opts) {
  require(s.experiment == Experiment::fig3, ErrorCode::invalid_argument, "spec is not a fig3 spec");
  return run_experiment(s, opts);
}

int ExperimentTable::column(const std::string& name) const {
  for (std::size_t n = 0; n < columns.size(); ++n)
    if (columns[n] == name) return static_cast<int>(n);
  throw Error(ErrorCode::parse_error, "no column '" + name + "'");
}

const std::string& ExperimentTable::text(std::size_t row, const std::string& name) const {
  return rows.at(row).at(static_cast<std::size_t>(column(name)));
}

Real ExperimentTable::number(std::size_t row, const std::string& name) const {
  const std::string& cell = text(row, name);
  if (cell == "nan") return std::nan("");
  try {
    return std::stod(cell);
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "non-numeric cell '" + cell + "' in column " + name);
  }
}

ExperimentTable parse_experiment_csv(const std::string& text) {
  ExperimentTable t;
  std::istringstream is(text);
  std::string line;
  bool have_columns = false;
  bool have_spec = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# build: ", 0) == 0) t.build = line.substr(9);
      if (line.rfind("# spec: ", 0) == 0) {
        try {
          t.spec = Json::parse(line.substr(8));
        } catch (const Json::exception& ex) {
          throw Error(ErrorCode::parse_error, std::string("bad spec header: ") + ex.what());
        }
        have_spec = true;
      }
      continue;
    }
    if (!have_columns) {
      t.columns = split(line);
      have_columns = true;
      continue;
    }
    auto cells = split(line);
    require(cells.size() == t.columns.size(), ErrorCode::parse_error, "row width does not match the column line");
    t.rows.push_back(std::move(cells));
  }
  require(have_spec && have_columns, ErrorCode::parse_error, "missing spec header or column line");
  return t;
}

ExperimentTable read_experiment_csv(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::invalid_argument, "cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_csv(ss.str());
}

std::string csv_file_name(const ExperimentSpec& s) { return std::string(to_string(s.experiment)) + ".csv"; }

Json plots_job(const ExperimentSpec& s, const std::string& csv_path, const std::string& image_path) {
  Json j{{"figure", to_string(s.experiment)}, {"inputs", Json::array({csv_path})}, {"output", image_path}};
  Json style;
  switch (s.experiment) {
    case Experiment::fig1:
      style["panels"] = s.sigmas;
      style["panel_column"] = "sigma";
      style["series_column"] = "ordering";
      style["series"] = names(s.orderings);
      style["x"] = "k";
      style["y"] = "fidelity";
      style["x_range"] = {1, s.dim * s.dim};
      break;
    case Experiment::fig2:
      style["panels"] = names(s.error_kinds);
      style["panel_column"] = "kind";
      style["series_column"] = "estimator";
      style["series"] = names(s.estimators);
      style["x"] = "fid_target_applied";
      style["y"] = "fid_est_applied";
      break;
    case Experiment::fig3:
      style["rows"] = names(s.error_kinds);
      style["columns"] = s.bands;
      style["series_column"] = "estimator";
      style["series"] = names(s.estimators);
      style["x"] = "k";
      style["y"] = "fid_est_applied";
      style["inset_y"] = "fid_est_target";
      style["x_range"] = {1, fig3_probes(s)};
      break;
  }
  style["y_range"] = {0.0, 1.0};
  j["style"] = style;
  return j;
}

}  // namespace qpt
