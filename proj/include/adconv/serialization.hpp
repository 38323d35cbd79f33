#pragma once

#include <nlohmann/json.hpp>

#include "adconv/pipeline.hpp"
#include "adconv/states.hpp"

namespace adconv {

// Debug format: {"layout": [{"role": "cv-mode"|"qubit", "dim": N, "label": "A"}, ...],
//                "amplitudes": [[re, im], ...]}            for pure states
//                "matrix": [[re, im], ...] (row-major)      for density matrices

nlohmann::json to_json(const RegisterLayout& layout);
RegisterLayout layout_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PureState& psi);
PureState pure_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QubitPairState& pair);
QubitPairState qubit_pair_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConversionLedger& ledger);

}  // namespace adconv
