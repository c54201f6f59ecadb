#pragma once

// JSON encodings shared by the memory file and the round log.

#include "aisr/plan.hpp"
#include "aisr/situation.hpp"

#include <json.hpp>

namespace aisr {

nlohmann::ordered_json to_json(const Situation& situation);
nlohmann::ordered_json to_json(const Action& action);
nlohmann::ordered_json to_json(const Plan& plan);

// These throw std::invalid_argument with a field name on bad input.
Situation situation_from_json(const nlohmann::json& j);
Action action_from_json(const nlohmann::json& j);
Plan plan_from_json(const nlohmann::json& j);

} // namespace aisr
