#pragma once

#include <json.hpp>

#include "precmon/model.hpp"

namespace precmon::detail {

MonitoringInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const MonitoringInstance& inst);

}  // namespace precmon::detail
