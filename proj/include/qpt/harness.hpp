// Seeded experiment runner for the fidelity studies: fidelity vs. number of
// probes (fig1), estimate vs. error-magnitude scatter (fig2) and fidelity
// curves at calibrated error bands (fig3). Output is CSV with a '#' header
// block carrying the full spec and the build tag.
#pragma once

#include "qpt/channels.hpp"
#include "qpt/io.hpp"
#include "qpt/probes.hpp"
#include "qpt/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qpt {

enum class Experiment { fig1, fig2, fig3 };

const char* to_string(Experiment e);

struct ExperimentSpec {
  Experiment experiment = Experiment::fig1;
  int dim = 5;
  int trials = 5;
  /// Every listed sigma is run; rows carry their sigma.
  std::vector<Real> sigmas{0.0, 1e-4};
  std::uint64_t seed = 1;
  /// fig1
  std::vector<ProbeOrdering> orderings{ProbeOrdering::nc, ProbeOrdering::uic_0n_then_nc,
                                       ProbeOrdering::uic_n_plus_then_mub};
  /// fig2, fig3
  std::vector<EstimatorKind> estimators{EstimatorKind::ls, EstimatorKind::cs_l1, EstimatorKind::cs_tr};
  std::vector<ErrorKind> error_kinds{ErrorKind::coherent, ErrorKind::incoherent};
  /// fig2: error maps drawn per (trial, kind); eta ~ U[0, eta_max], xi ~ U[0, xi_max].
  int points_per_trial = 10;
  Real eta_max = 3.0;
  Real xi_max = 0.6;
  /// Kraus rank of the incoherent error map (0 means d^2).
  int n_kraus = 0;
  /// fig3
  std::vector<Real> bands{0.97, 0.90, 0.83};
  Real band_width = 0.005;
  /// fig3 probe count limit (0 means d^2).
  int max_probes = 0;
  EstimatorConfig solver{};
};

/// Defaults for an experiment name. Accepts fig1, fig2, fig3 and the variants
/// fig1-noiseless, fig1-noisy, fig2-coherent, fig2-incoherent.
ExperimentSpec default_spec(const std::string& name);

Json spec_to_json(const ExperimentSpec& s);
/// Keys absent from j keep the values of `base`.
ExperimentSpec spec_from_json(const Json& j, ExperimentSpec base);
ExperimentSpec spec_from_json(const Json& j);
void validate_spec(const ExperimentSpec& s);

std::string build_tag();

/// Column names of the experiment CSV.
std::vector<std::string> csv_columns(Experiment e);
/// Number of data rows a single trial produces.
int rows_per_trial(const ExperimentSpec& s);

struct RunOptions {
  int threads = 1;
  /// Previous CSV for the same spec; complete trials are copied verbatim.
  std::string resume_from;
  /// Progress messages, one per finished trial (may be null).
  std::ostream* log = nullptr;
};

/// Full CSV text: header block, column line, rows ordered by trial and then
/// by the experiment's inner loops, independent of thread scheduling.
std::string run_experiment(const ExperimentSpec& s, const RunOptions& opts = {});
std::string run_fig1(const ExperimentSpec& s, const RunOptions& opts = {});
std::string run_fig2(const ExperimentSpec& s, const RunOptions& opts = {});
std::string run_fig3(const ExperimentSpec& s, const RunOptions& opts = {});

/// Parsed experiment CSV.
struct ExperimentTable {
  Json spec;
  std::string build;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
  /// Numeric value of a cell; "nan" parses to NaN.
  Real number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

ExperimentTable parse_experiment_csv(const std::string& text);
ExperimentTable read_experiment_csv(const std::string& path);

/// File name of the experiment's CSV inside an output directory.
std::string csv_file_name(const ExperimentSpec& s);

/// Job description for the plotting component: input CSVs, figure kind,
/// output image and series/axis styling.
Json plots_job(const ExperimentSpec& s, const std::string& csv_path, const std::string& image_path);

}  // namespace qpt
