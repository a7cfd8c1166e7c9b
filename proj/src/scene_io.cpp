#include "vlcsense/scene_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vlcsense/errors.hpp"

namespace vlcs {

namespace {

using nlohmann::ordered_json;

Vec3 parse_vec3(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw invalid_input("scenario: field '" + field + "' must be a [x, y, z] number array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw invalid_input("scenario: missing field '" + key + "' in " + where);
  return *it;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(std::string("scenario parse error: ") + e.what());
  }

  try {
    Scenario s;
    const auto& room = require(j, "room", "document");
    s.room.width = require(room, "width", "room").get<double>();
    s.room.depth = require(room, "depth", "room").get<double>();
    s.room.height = require(room, "height", "room").get<double>();
    const auto& refl = require(room, "wall_reflectivity", "room");
    if (!refl.is_array() || refl.size() != 6)
      throw invalid_input(
          "scenario: room.wall_reflectivity must list 6 surfaces "
          "[x_min, x_max, y_min, y_max, floor, ceiling]");
    for (int i = 0; i < 6; ++i) s.room.wall_reflectivity[i] = refl[i].get<double>();

    const auto& lum = require(j, "luminaire", "document");
    s.luminaire.position = parse_vec3(require(lum, "position", "luminaire"), "luminaire.position");
    s.luminaire.orientation =
        parse_vec3(require(lum, "orientation", "luminaire"), "luminaire.orientation");
    s.luminaire.lambertian_order = require(lum, "lambertian_order", "luminaire").get<double>();
    s.luminaire.optical_power = require(lum, "optical_power", "luminaire").get<double>();
    s.luminaire.led_cutoff_hz = require(lum, "led_cutoff_hz", "luminaire").get<double>();

    const auto& pds = require(j, "pds", "document");
    if (!pds.is_array()) throw invalid_input("scenario: pds must be an array");
    for (std::size_t i = 0; i < pds.size(); ++i) {
      std::ostringstream where;
      where << "pds[" << i << "]";
      const auto& pj = pds[i];
      Photodetector pd;
      pd.position = parse_vec3(require(pj, "position", where.str()), where.str() + ".position");
      pd.orientation =
          parse_vec3(require(pj, "orientation", where.str()), where.str() + ".orientation");
      pd.area = require(pj, "area", where.str()).get<double>();
      pd.fov_half_angle = require(pj, "fov_half_angle", where.str()).get<double>();
      pd.responsivity = require(pj, "responsivity", where.str()).get<double>();
      s.pds.push_back(pd);
    }

    const auto& events = require(j, "events", "document");
    if (!events.is_array()) throw invalid_input("scenario: events must be an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      std::ostringstream where;
      where << "events[" << i << "]";
      const auto& ej = events[i];
      Event ev;
      ev.event_id = require(ej, "event_id", where.str()).get<int>();
      ev.label = ej.value("label", std::string{});
      const auto& ref = require(ej, "reference_point", where.str());
      if (!ref.is_null()) ev.reference_point = parse_vec3(ref, where.str() + ".reference_point");
      const auto& obstacles = require(ej, "obstacles", where.str());
      if (!obstacles.is_array())
        throw invalid_input("scenario: " + where.str() + ".obstacles must be an array");
      for (std::size_t o = 0; o < obstacles.size(); ++o) {
        std::ostringstream owhere;
        owhere << where.str() << ".obstacles[" << o << "]";
        const auto& oj = obstacles[o];
        Obstacle box;
        box.min_corner =
            parse_vec3(require(oj, "min_corner", owhere.str()), owhere.str() + ".min_corner");
        box.max_corner =
            parse_vec3(require(oj, "max_corner", owhere.str()), owhere.str() + ".max_corner");
        ev.obstacles.push_back(box);
      }
      s.events.push_back(std::move(ev));
    }

    s.patch_size = require(j, "patch_size", "document").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("scenario: malformed field: ") + e.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["room"] = {{"width", s.room.width},
               {"depth", s.room.depth},
               {"height", s.room.height},
               {"wall_reflectivity", s.room.wall_reflectivity}};
  j["luminaire"] = {{"position", vec3_json(s.luminaire.position)},
                    {"orientation", vec3_json(s.luminaire.orientation)},
                    {"lambertian_order", s.luminaire.lambertian_order},
                    {"optical_power", s.luminaire.optical_power},
                    {"led_cutoff_hz", s.luminaire.led_cutoff_hz}};
  j["pds"] = ordered_json::array();
  for (const auto& pd : s.pds) {
    j["pds"].push_back({{"position", vec3_json(pd.position)},
                        {"orientation", vec3_json(pd.orientation)},
                        {"area", pd.area},
                        {"fov_half_angle", pd.fov_half_angle},
                        {"responsivity", pd.responsivity}});
  }
  j["events"] = ordered_json::array();
  for (const auto& ev : s.events) {
    ordered_json ej;
    ej["event_id"] = ev.event_id;
    ej["label"] = ev.label;
    ej["obstacles"] = ordered_json::array();
    for (const auto& box : ev.obstacles) {
      ej["obstacles"].push_back(
          {{"min_corner", vec3_json(box.min_corner)}, {"max_corner", vec3_json(box.max_corner)}});
    }
    if (ev.reference_point)
      ej["reference_point"] = vec3_json(*ev.reference_point);
    else
      ej["reference_point"] = nullptr;
    j["events"].push_back(std::move(ej));
  }
  j["patch_size"] = s.patch_size;
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void save_scenario(const std::string& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write scenario file: " + path);
  out << scenario_to_json(s);
}

}  // namespace vlcs
