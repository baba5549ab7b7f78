// Structured-text (JSON) serialization of matrices, bases, maps, probe sets,
// POVMs and error specs. Complex entries are [re, im] pairs, matrices are
// row-major arrays of rows.
#pragma once

#include "qpt/channels.hpp"
#include "qpt/closed_form.hpp"
#include "qpt/probes.hpp"
#include "qpt/repr.hpp"
#include "qpt/solver.hpp"

#include <json.hpp>

#include <string>

namespace qpt {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j);
Json real_vector_to_json(const RealVector& v);
RealVector real_vector_from_json(const Json& j);

/// {"dim", "kind", "elements", "target"?}
Json basis_to_json(const OperatorBasis& b);
OperatorBasis basis_from_json(const Json& j);

/// {"dim", "basis_kind", "basis", "chi"}
Json process_to_json(const ProcessMatrix& p);
ProcessMatrix process_from_json(const Json& j);

/// {"dim", "basis_kind": "standard", "choi"}
Json choi_to_json(const ChoiMatrix& c);
ChoiMatrix choi_from_json(const Json& j);

/// {"dim", "kraus": [...]}
Json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const Json& j);

/// {"dim", "kind", "labels", "states"}
Json probes_to_json(const ProbeSet& p);
ProbeSet probes_from_json(const Json& j);

/// {"dim", "kind", "labels", "effects", "informative_outcomes"}
Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j);

Json error_spec_to_json(const ErrorSpec& e);
ErrorSpec error_spec_from_json(const Json& j);

Json estimator_config_to_json(const EstimatorConfig& c);
/// Missing keys keep the defaults of `base`.
EstimatorConfig estimator_config_from_json(const Json& j, EstimatorConfig base = {});

/// Estimate plus diagnostics; the process matrix is included in full.
Json estimate_to_json(const Estimate& e);
Json unitary_estimate_to_json(const UnitaryEstimate& e);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace qpt
