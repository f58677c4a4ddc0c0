#pragma once

#include <json.hpp>

#include "hesim/hqis.hpp"

namespace hesim {

/// {"trial", "alice_outcome", "recoverer", "helper_outcomes", "corrections",
///  "fidelity", "branch_probabilities", "helper_probabilities", "secret"}
nlohmann::json to_json(const HQISTranscript& t);
nlohmann::json to_json(const CorrectionTable& table, Recoverer who);
nlohmann::json to_json(const BellDecompositionReport& r);

}  // namespace hesim
