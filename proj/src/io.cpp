#include "qpt/io.hpp"

#include <fstream>

namespace qpt {

namespace {

void expect(bool cond, const std::string& what) { require(cond, ErrorCode::parse_error, what); }

const Json& field(const Json& j, const char* key) {
  expect(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<Matrix> matrices_from_json(const Json& j) {
  expect(j.is_array(), "expected an array of matrices");
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

int dim_of(const Json& j) {
  const int d = field(j, "dim").get<int>();
  require(d >= 1, ErrorCode::invalid_dimension, "dim must be positive");
  return d;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  expect(j.is_array(), "matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    expect(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, "ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = Complex(e.get<Real>(), 0.0);
      } else {
        expect(e.is_array() && e.size() == 2, "complex entry must be [re, im]");
        m(i, k) = Complex(e[0].get<Real>(), e[1].get<Real>());
      }
    }
  }
  return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
  expect(j.is_array(), "matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    expect(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, "ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<Real>();
  }
  return m;
}

Json real_vector_to_json(const RealVector& v) { return Json(std::vector<Real>(v.data(), v.data() + v.size())); }

RealVector real_vector_from_json(const Json& j) {
  expect(j.is_array(), "expected a numeric array");
  const auto v = j.get<std::vector<Real>>();
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json basis_to_json(const OperatorBasis& b) {
  Json j{{"dim", b.dim()}, {"kind", to_string(b.kind())}, {"elements", matrices_to_json(b.elements())}};
  if (b.target().size() > 0) j["target"] = matrix_to_json(b.target());
  return j;
}

OperatorBasis basis_from_json(const Json& j) {
  const int d = dim_of(j);
  const BasisKind kind = basis_kind_from_string(field(j, "kind").get<std::string>());
  if (!j.contains("elements")) {
    switch (kind) {
      case BasisKind::standard: return standard_basis(d);
      case BasisKind::gellmann: return gellmann_basis(d);
      case BasisKind::traceless_with_identity: return traceless_identity_basis(d);
      case BasisKind::rotated: return rotated_basis(matrix_from_json(field(j, "target")), gellmann_basis(d));
    }
  }
  Matrix target = j.contains("target") ? matrix_from_json(j.at("target")) : Matrix();
  return OperatorBasis(d, matrices_from_json(j.at("elements")), kind, target);
}

Json process_to_json(const ProcessMatrix& p) {
  return Json{{"dim", p.dim()},
              {"basis_kind", to_string(p.basis.kind())},
              {"basis", basis_to_json(p.basis)},
              {"chi", matrix_to_json(p.chi)}};
}

ProcessMatrix process_from_json(const Json& j) {
  OperatorBasis basis = basis_from_json(field(j, "basis"));
  Matrix chi = matrix_from_json(field(j, "chi"));
  const Eigen::Index n = basis.size();
  require(chi.rows() == n && chi.cols() == n, ErrorCode::dimension_mismatch, "chi does not match the basis size");
  return ProcessMatrix{std::move(basis), std::move(chi)};
}

Json choi_to_json(const ChoiMatrix& c) {
  return Json{{"dim", c.dim}, {"basis_kind", "standard"}, {"choi", matrix_to_json(c.mat)}};
}

ChoiMatrix choi_from_json(const Json& j) {
  ChoiMatrix c{dim_of(j), matrix_from_json(field(j, "choi"))};
  require(c.mat.rows() == c.dim * c.dim && c.mat.cols() == c.dim * c.dim, ErrorCode::dimension_mismatch,
          "Choi matrix must be d^2 x d^2");
  return c;
}

Json kraus_to_json(const KrausSet& k) { return Json{{"dim", k.dim()}, {"kraus", matrices_to_json(k.ops)}}; }

KrausSet kraus_from_json(const Json& j) {
  KrausSet k{matrices_from_json(field(j, "kraus"))};
  const int d = dim_of(j);
  for (const auto& a : k.ops)
    require(a.rows() == d && a.cols() == d, ErrorCode::dimension_mismatch, "Kraus operator must be d x d");
  return k;
}

Json probes_to_json(const ProbeSet& p) {
  return Json{{"dim", p.dim}, {"kind", to_string(p.kind)}, {"labels", p.labels}, {"states", matrices_to_json(p.states)}};
}

ProbeSet probes_from_json(const Json& j) {
  ProbeSet p;
  p.dim = dim_of(j);
  p.kind = probe_kind_from_string(field(j, "kind").get<std::string>());
  p.states = matrices_from_json(field(j, "states"));
  p.labels = j.contains("labels") ? j.at("labels").get<std::vector<std::string>>() : std::vector<std::string>{};
  if (p.labels.empty())
    for (int n = 0; n < p.size(); ++n) p.labels.push_back("psi" + std::to_string(n));
  require(p.labels.size() == p.states.size(), ErrorCode::parse_error, "labels do not match states");
  return p;
}

Json povm_to_json(const Povm& p) {
  return Json{{"dim", p.dim},
              {"kind", to_string(p.kind)},
              {"labels", p.labels},
              {"effects", matrices_to_json(p.effects)},
              {"informative_outcomes", p.informative_count()}};
}

Povm povm_from_json(const Json& j) {
  Povm p;
  p.dim = dim_of(j);
  p.kind = povm_kind_from_string(field(j, "kind").get<std::string>());
  p.effects = matrices_from_json(field(j, "effects"));
  p.labels = j.contains("labels") ? j.at("labels").get<std::vector<std::string>>() : std::vector<std::string>{};
  if (p.labels.empty())
    for (int n = 0; n < p.size(); ++n) p.labels.push_back("E" + std::to_string(n));
  require(p.labels.size() == p.effects.size(), ErrorCode::parse_error, "labels do not match effects");
  return p;
}

Json error_spec_to_json(const ErrorSpec& e) {
  Json j{{"kind", to_string(e.kind)},
         {"dim", static_cast<int>(e.target.rows())},
         {"seed", e.seed},
         {"achieved_fidelity", e.achieved_fidelity},
         {"target", matrix_to_json(e.target)}};
  if (e.kind == ErrorKind::coherent) {
    j["eta"] = e.eta;
    j["hamiltonian"] = matrix_to_json(e.hamiltonian);
  } else {
    j["xi"] = e.xi;
    j["kraus"] = matrices_to_json(e.kraus.ops);
  }
  return j;
}

ErrorSpec error_spec_from_json(const Json& j) {
  ErrorSpec e;
  e.kind = error_kind_from_string(field(j, "kind").get<std::string>());
  e.target = matrix_from_json(field(j, "target"));
  e.seed = j.value("seed", std::uint64_t{0});
  e.achieved_fidelity = j.value("achieved_fidelity", 1.0);
  if (e.kind == ErrorKind::coherent) {
    e.eta = field(j, "eta").get<Real>();
    e.hamiltonian = matrix_from_json(field(j, "hamiltonian"));
  } else {
    e.xi = field(j, "xi").get<Real>();
    e.kraus.ops = matrices_from_json(field(j, "kraus"));
  }
  return e;
}

Json estimator_config_to_json(const EstimatorConfig& c) {
  return Json{{"kind", to_string(c.kind)},
              {"epsilon", c.epsilon},
              {"tol_primal", c.tol_primal},
              {"tol_dual", c.tol_dual},
              {"max_iter", c.max_iter},
              {"rho", c.rho},
              {"rho_min", c.rho_min},
              {"rho_max", c.rho_max},
              {"relaxation", c.relaxation},
              {"adapt_interval", c.adapt_interval},
              {"l1_weight_target", c.l1_weight_target}};
}

EstimatorConfig estimator_config_from_json(const Json& j, EstimatorConfig c) {
  expect(j.is_object(), "estimator config must be an object");
  if (j.contains("kind")) c.kind = estimator_kind_from_string(j.at("kind").get<std::string>());
  c.epsilon = j.value("epsilon", c.epsilon);
  c.tol_primal = j.value("tol_primal", c.tol_primal);
  c.tol_dual = j.value("tol_dual", c.tol_dual);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.rho = j.value("rho", c.rho);
  c.rho_min = j.value("rho_min", c.rho_min);
  c.rho_max = j.value("rho_max", c.rho_max);
  c.relaxation = j.value("relaxation", c.relaxation);
  c.adapt_interval = j.value("adapt_interval", c.adapt_interval);
  c.record_trace = j.value("record_trace", c.record_trace);
  c.l1_weight_target = j.value("l1_weight_target", c.l1_weight_target);
  require(c.max_iter > 0 && c.rho > 0.0 && c.rho_min > 0.0 && c.rho_min <= c.rho_max && c.relaxation > 0.0 &&
              c.relaxation < 2.0 && c.adapt_interval >= 0,
          ErrorCode::invalid_argument, "estimator config out of range");
  return c;
}

Json estimate_to_json(const Estimate& e) {
  return Json{{"process", process_to_json(e.chi_hat)},
              {"objective", e.objective},
              {"data_fit", e.data_fit},
              {"epsilon", e.epsilon},
              {"iterations", e.iterations},
              {"converged", e.converged},
              {"status", to_string(e.status)},
              {"primal_residual", e.primal_residual},
              {"dual_residual", e.dual_residual}};
}

Json unitary_estimate_to_json(const UnitaryEstimate& e) {
  Json j{{"protocol", e.protocol},
         {"dim", static_cast<int>(e.u.rows())},
         {"unitary", matrix_to_json(e.u)},
         {"unitarity_residual", e.unitarity_residual},
         {"outcomes_consumed", e.outcomes_consumed},
         {"independent_outcomes", e.independent_outcomes},
         {"ambiguous", e.ambiguous}};
  if (e.ambiguous) j["candidates"] = matrices_to_json(e.candidates);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::invalid_argument, "cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::parse_error, path + ": " + ex.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::invalid_argument, "cannot write " + path);
  os << j.dump(2) << '\n';
}

}  // namespace qpt
