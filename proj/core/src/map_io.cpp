#include "uavlos/map_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavlos/error.hpp"

namespace uavlos {

using nlohmann::json;

Environment map_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const auto& bj = j.at("bounds");
    if (!bj.is_array() || bj.size() != 4) {
      throw Error(ErrorCode::kInvalidMap, "bounds must be [xmin, ymin, xmax, ymax]");
    }
    const Rect bounds{bj[0].get<double>(), bj[1].get<double>(), bj[2].get<double>(),
                      bj[3].get<double>()};
    const double h_min = j.at("h_min").get<double>();
    std::vector<Building> buildings;
    for (const auto& b : j.at("buildings")) {
      std::vector<Vec2> fp;
      for (const auto& v : b.at("footprint")) {
        if (!v.is_array() || v.size() != 2) {
          throw Error(ErrorCode::kInvalidMap, "footprint vertices must be [x, y]");
        }
        fp.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      buildings.emplace_back(std::move(fp), b.at("height").get<double>());
    }
    return Environment(bounds, h_min, std::move(buildings));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidMap, e.what());
  }
}

std::string map_to_json_string(const Environment& env) {
  json j;
  const Rect& b = env.bounds();
  j["bounds"] = {b.xmin, b.ymin, b.xmax, b.ymax};
  j["h_min"] = env.h_min();
  json arr = json::array();
  for (const Building& bld : env.buildings()) {
    json fp = json::array();
    for (const Vec2& v : bld.footprint()) fp.push_back({v.x, v.y});
    arr.push_back({{"footprint", std::move(fp)}, {"height", bld.height()}});
  }
  j["buildings"] = std::move(arr);
  return j.dump(1);
}

Environment load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open map file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return map_from_json_string(ss.str());
}

void save_map(const Environment& env, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write map file " + path.string());
  }
  out << map_to_json_string(env) << '\n';
}

}  // namespace uavlos
