// Design matrices, outcome probabilities and the Gaussian measurement model.
#pragma once

#include "qpt/probes.hpp"
#include "qpt/repr.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qpt {

/// D_jl for every (probe j, effect l), in the basis of the process matrix:
/// (D_jl)_mn = Tr(rho_j Y_m^dag E_l Y_n), so p_jl = Tr(D_jl^dag chi).
/// In the standard basis D_jl^dag = rho_j^T (x) E_l.
struct DesignMatrix {
  OperatorBasis basis;
  int num_probes = 0;
  int num_effects = 0;
  std::vector<Matrix> entries;  // row-major in (j, l)
  std::string probe_kind;
  std::string povm_kind;

  const Matrix& at(int j, int l) const { return entries[static_cast<std::size_t>(j * num_effects + l)]; }
  int rows() const { return num_probes * num_effects; }
  /// First k probes only.
  DesignMatrix prefix(int k) const;
};

DesignMatrix design_matrices(const ProbeSet& probes, const Povm& povm, const OperatorBasis& basis);

/// Outcome table p_jl (probes x effects).
RealMatrix probabilities(const ProcessMatrix& p, const DesignMatrix& d);

/// p_jl = Tr{ chi_c (rho_j^T (x) E_l) } computed directly from the Choi matrix.
RealMatrix probabilities_from_choi(const ChoiMatrix& c, const ProbeSet& probes, const Povm& povm);

struct MeasurementRecord {
  RealMatrix freqs;  // probes x effects
  Real sigma = 0.0;
  std::uint64_t seed = 0;
  std::string probe_kind;
  std::string povm_kind;
  int dim = 0;

  int num_probes() const { return static_cast<int>(freqs.rows()); }
  int num_effects() const { return static_cast<int>(freqs.cols()); }
  MeasurementRecord prefix(int k) const;
};

/// f_jl = p_jl + sigma W_jl. Row j draws from its own stream derived from
/// (seed, j), so a prefix of the probes sees the same noise as the full set.
MeasurementRecord simulate_record(const RealMatrix& p, Real sigma, std::uint64_t seed);

void write_record_csv(std::ostream& os, const MeasurementRecord& rec);
MeasurementRecord read_record_csv(std::istream& is);

}  // namespace qpt
