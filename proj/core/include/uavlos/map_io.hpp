#pragma once

#include <filesystem>
#include <string>

#include "uavlos/environment.hpp"

namespace uavlos {

// Map files are JSON:
//   {"bounds": [xmin, ymin, xmax, ymax], "h_min": number,
//    "buildings": [{"footprint": [[x, y], ...], "height": number}, ...]}
// in meters. Loading validates every building and environment invariant.

Environment map_from_json_string(const std::string& text);
std::string map_to_json_string(const Environment& env);

Environment load_map(const std::filesystem::path& path);
void save_map(const Environment& env, const std::filesystem::path& path);

}  // namespace uavlos
