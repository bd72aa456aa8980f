#pragma once

#include <string>

#include <json.hpp>

#include "pandora/instance.hpp"

namespace pandora {

// JSON wire format "pandora-time/1". Rationals travel as "num/den" strings;
// constant cost/reward tables collapse to a {"const": ...} entry on write.
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace pandora
