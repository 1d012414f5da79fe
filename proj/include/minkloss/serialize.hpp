#pragma once

#include <json.hpp>

#include "minkloss/theory.hpp"

namespace minkloss {

void to_json(nlohmann::json& j, const InequalityCheck& c);
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const StepBoundReport& r);

}  // namespace minkloss
