#include "qpt/measure.hpp"

#include "qpt/random.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qpt {

DesignMatrix DesignMatrix::prefix(int k) const {
  require(k >= 0 && k <= num_probes, ErrorCode::invalid_argument, "prefix length out of range");
  DesignMatrix out{basis, k, num_effects, {}, probe_kind, povm_kind};
  out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(k) * num_effects);
  return out;
}

DesignMatrix design_matrices(const ProbeSet& probes, const Povm& povm, const OperatorBasis& basis) {
  require(probes.dim == povm.dim && povm.dim == basis.dim(), ErrorCode::dimension_mismatch,
          "probe, POVM and basis dimensions differ");
  DesignMatrix out{basis, probes.size(), povm.size(), {}, to_string(probes.kind), to_string(povm.kind)};
  out.entries.reserve(static_cast<std::size_t>(out.rows()));
  const Matrix& c = basis.columns();
  const bool standard = basis.kind() == BasisKind::standard;
  for (const auto& rho : probes.states) {
    const Matrix rho_t = rho.transpose();
    for (const auto& e : povm.effects) {
      Matrix k = kron(rho_t, e);
      if (!standard) k = c.adjoint() * k * c;
      out.entries.push_back(hermitian_part(k));
    }
  }
  return out;
}

RealMatrix probabilities(const ProcessMatrix& p, const DesignMatrix& d) {
  require(p.basis.kind() == d.basis.kind() && (p.basis.columns() - d.basis.columns()).norm() <= 1e-12,
          ErrorCode::inconsistent_inputs, "process matrix and design matrices use different bases");
  RealMatrix out(d.num_probes, d.num_effects);
  for (int j = 0; j < d.num_probes; ++j)
    for (int l = 0; l < d.num_effects; ++l) {
      // Tr(D^dag chi) = sum_mn conj(D_mn) chi_mn
      const Complex v = d.at(j, l).cwiseProduct(p.chi.conjugate()).sum();
      const Complex z = std::conj(v);
      if (std::abs(z.imag()) > 1e-8)
        throw Error(ErrorCode::inconsistent_inputs, "probability has imaginary part " + std::to_string(z.imag()));
      out(j, l) = z.real();
    }
  return out;
}

RealMatrix probabilities_from_choi(const ChoiMatrix& c, const ProbeSet& probes, const Povm& povm) {
  require(c.dim == probes.dim && c.dim == povm.dim, ErrorCode::dimension_mismatch, "dimension mismatch");
  RealMatrix out(probes.size(), povm.size());
  for (int j = 0; j < probes.size(); ++j)
    for (int l = 0; l < povm.size(); ++l)
      out(j, l) = (c.mat * kron(probes.states[j].transpose(), povm.effects[l])).trace().real();
  return out;
}

MeasurementRecord MeasurementRecord::prefix(int k) const {
  require(k >= 0 && k <= num_probes(), ErrorCode::invalid_argument, "prefix length out of range");
  MeasurementRecord out = *this;
  out.freqs = freqs.topRows(k);
  return out;
}

MeasurementRecord simulate_record(const RealMatrix& p, Real sigma, std::uint64_t seed) {
  require(sigma >= 0.0, ErrorCode::invalid_argument, "sigma must be non-negative");
  MeasurementRecord rec;
  rec.freqs = p;
  rec.sigma = sigma;
  rec.seed = seed;
  if (sigma == 0.0) return rec;
  for (Eigen::Index j = 0; j < p.rows(); ++j) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    std::normal_distribution<Real> w(0.0, 1.0);
    for (Eigen::Index l = 0; l < p.cols(); ++l) rec.freqs(j, l) += sigma * w(rng);
  }
  return rec;
}

namespace {

std::string format_double(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_record_csv(std::ostream& os, const MeasurementRecord& rec) {
  os << "# dim: " << rec.dim << "\n";
  os << "# sigma: " << format_double(rec.sigma) << "\n";
  os << "# seed: " << rec.seed << "\n";
  os << "# probe_kind: " << rec.probe_kind << "\n";
  os << "# povm_kind: " << rec.povm_kind << "\n";
  os << "# num_probes: " << rec.num_probes() << "\n";
  os << "# num_effects: " << rec.num_effects() << "\n";
  os << "probe_index,effect_index,frequency\n";
  for (int j = 0; j < rec.num_probes(); ++j)
    for (int l = 0; l < rec.num_effects(); ++l) os << j << "," << l << "," << format_double(rec.freqs(j, l)) << "\n";
}

MeasurementRecord read_record_csv(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  bool header_seen = false;
  std::vector<std::tuple<int, int, Real>> cells;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      meta[trim(key)] = trim(value);
      continue;
    }
    if (!header_seen) {
      require(line.rfind("probe_index,effect_index,frequency", 0) == 0, ErrorCode::parse_error,
              "record CSV is missing its column header");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c), ErrorCode::parse_error,
            "malformed record row: " + line);
    try {
      cells.emplace_back(std::stoi(a), std::stoi(b), std::stod(c));
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "malformed record row: " + line);
    }
  }
  require(header_seen, ErrorCode::parse_error, "record CSV has no data header");
  for (const char* key : {"sigma", "seed", "num_probes", "num_effects", "dim"})
    require(meta.count(key) > 0, ErrorCode::parse_error, std::string("record CSV missing metadata '") + key + "'");
  MeasurementRecord rec;
  rec.dim = std::stoi(meta["dim"]);
  rec.sigma = std::stod(meta["sigma"]);
  rec.seed = std::stoull(meta["seed"]);
  rec.probe_kind = meta["probe_kind"];
  rec.povm_kind = meta["povm_kind"];
  const int jn = std::stoi(meta["num_probes"]);
  const int ln = std::stoi(meta["num_effects"]);
  require(static_cast<int>(cells.size()) == jn * ln, ErrorCode::parse_error, "record CSV has wrong number of rows");
  rec.freqs = RealMatrix::Zero(jn, ln);
  for (const auto& [j, l, v] : cells) {
    require(j >= 0 && j < jn && l >= 0 && l < ln, ErrorCode::parse_error, "record index out of range");
    rec.freqs(j, l) = v;
  }
  return rec;
}

}  // namespace qpt
