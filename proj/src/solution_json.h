#pragma once

#include "json.hpp"
#include "parkroute/solution.h"

namespace parkroute::detail {

nlohmann::ordered_json solution_json(const Solution& sol);
Solution solution_from(const nlohmann::json& doc);

}  // namespace parkroute::detail
