#pragma once

#include <string>

#include <json.hpp>

#include "collapse_oracle/discrimination.hpp"
#include "collapse_oracle/montecarlo.hpp"
#include "collapse_oracle/state.hpp"

namespace collapse_oracle {

/// All vectors and matrices share one schema:
/// {"dim": d, "re": [...], "im": [...]} with row-major matrix order.
/// nlohmann::json emits shortest round-trip decimals, so dump/parse cycles
/// reproduce every double bit-exactly.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const StateVector& psi);
StateVector state_from_json(const nlohmann::json& j);

nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

nlohmann::json effect_to_json(const Effect& e);
Effect effect_from_json(const nlohmann::json& j);

nlohmann::json empirical_reliability_to_json(const EmpiricalReliability& r);
nlohmann::json lambda_estimate_to_json(const LambdaEstimate& est);
nlohmann::json conjecture_scan_to_json(const ConjectureScanReport& report);

nlohmann::json load_json_file(const std::string& path);

}  // namespace collapse_oracle
