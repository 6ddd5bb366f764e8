#pragma once

#include <string>

#include <json.hpp>

#include "secisac/scenario.hpp"

namespace secisac {

// Config files are JSON objects whose keys mirror SystemConfig field names;
// the scene geometry lives in a nested "geometry" section and angles are given
// in degrees. Missing keys keep the values of the base preset.
//
//   {
//     "preset": "paper-default",
//     "n_ris_elements": 16,
//     "geometry": { "target_angles_deg": [30, -30], "target_distances_m": [50, 50] }
//   }
nlohmann::json config_to_json(const SystemConfig& config);
SystemConfig config_from_json(const nlohmann::json& j);

// Accepts a preset name ("paper-default", "desk") or a path to a JSON file.
SystemConfig load_config(const std::string& name_or_path);
void save_config(const SystemConfig& config, const std::string& path);

SystemConfig preset_config(const std::string& name);

}  // namespace secisac
