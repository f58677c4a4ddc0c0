// JSON form of a HybridState:
// {"alpha", "modes": [{"name", "kind"}], "terms": [{"re", "im", "labels": [...]}]}
// Coherent labels are {"a": [num, den], "b": [num, den]}; polarization labels "+" or "-".

#pragma once

#include <json.hpp>

#include "hesim/state.hpp"

namespace hesim {

nlohmann::json to_json(const HybridState& s);
/// Throws std::invalid_argument on malformed input.
HybridState state_from_json(const nlohmann::json& j, double prune_threshold = kDefaultPruneThreshold);

}  // namespace hesim
