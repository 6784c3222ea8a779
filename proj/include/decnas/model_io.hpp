#pragma once

#include <string>

#include "decnas/nn.hpp"

#include <json.hpp>

namespace decnas {

nlohmann::ordered_json architecture_to_json(const Architecture& arch);
Architecture architecture_from_json(const nlohmann::json& j);

// Architecture + parameters as a single JSON document.
void save_model(const std::string& path, const Architecture& arch,
                const Parameters& params);
std::pair<Architecture, Parameters> load_model(const std::string& path);

}  // namespace decnas
