#pragma once

#include <json.hpp>

#include <string>

#include "negdep/measure.hpp"

namespace negdep {

// Measure wire format:
//   {"n": 2, "weights": [{"set": "10", "w": "1/4"}, ...], "label": "..."}
// "set" is an n-character 0/1 string, coordinate 1 leftmost. Configurations
// missing from "weights" carry weight zero; a duplicated "set" is an error.
Measure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const Measure& m);

Measure measure_from_json_text(const std::string& text);

Config config_from_bitstring(const std::string& s, int n);
std::string config_to_bitstring(Config c, int n);

}  // namespace negdep
