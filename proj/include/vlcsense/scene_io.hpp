#pragma once
// Scenario JSON serialization. The document mirrors the Scenario type
// field-for-field; Vec3 values are [x, y, z] arrays, lengths in meters,
// angles in radians, power in watts.

#include <string>

#include "vlcsense/scene.hpp"

namespace vlcs {

Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

// Throws io_error for unreadable files or malformed JSON (message carries the
// parser's position context) and invalid_input for schema violations.
Scenario load_scenario(const std::string& path);
void save_scenario(const std::string& path, const Scenario& s);

}  // namespace vlcs
