#include "vlcsense/scene.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace vlcs {

namespace {

bool unit_length(const Vec3& v) { return std::fabs(norm(v) - 1.0) <= 1e-9; }

constexpr double kPi = 3.141592653589793;

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  auto add = [&out](const std::string& msg) { out.push_back(msg); };

  if (!(s.room.width > 0.0)) add("room.width not positive");
  if (!(s.room.depth > 0.0)) add("room.depth not positive");
  if (!(s.room.height > 0.0)) add("room.height not positive");
  for (int i = 0; i < 6; ++i) {
    const double r = s.room.wall_reflectivity[i];
    if (!(r >= 0.0 && r <= 1.0)) {
      std::ostringstream os;
      os << "room.wall_reflectivity[" << i << "] outside [0,1]";
      add(os.str());
    }
  }

  if (!is_finite(s.luminaire.position) || !s.room.contains(s.luminaire.position))
    add("luminaire.position outside room");
  if (!unit_length(s.luminaire.orientation)) add("luminaire.orientation not unit length");
  if (!(s.luminaire.lambertian_order >= 1.0)) add("luminaire.lambertian_order below 1");
  if (!(s.luminaire.optical_power > 0.0)) add("luminaire.optical_power not positive");
  if (!(s.luminaire.led_cutoff_hz > 0.0)) add("luminaire.led_cutoff_hz not positive");

  if (s.pds.empty()) add("pds empty (need P >= 1)");
  for (size_t i = 0; i < s.pds.size(); ++i) {
    const auto& pd = s.pds[i];
    std::ostringstream pre;
    pre << "pd[" << i << "].";
    if (!is_finite(pd.position) || !s.room.contains(pd.position))
      add(pre.str() + "position outside room");
    if (!unit_length(pd.orientation)) add(pre.str() + "orientation not unit length");
    if (!(pd.area > 0.0)) add(pre.str() + "area not positive");
    if (!(pd.fov_half_angle > 0.0 && pd.fov_half_angle <= kPi / 2.0 + 1e-12))
      add(pre.str() + "fov_half_angle outside (0, pi/2]");
    if (!(pd.responsivity > 0.0)) add(pre.str() + "responsivity not positive");
  }

  if (s.events.size() < 2) add("events: fewer than 2 events");
  std::set<int> seen_ids;
  for (size_t e = 0; e < s.events.size(); ++e) {
    const auto& ev = s.events[e];
    std::ostringstream pre;
    pre << "event[" << e << "].";
    if (ev.event_id < 0) add(pre.str() + "event_id negative");
    if (!seen_ids.insert(ev.event_id).second) {
      std::ostringstream os;
      os << "duplicate event_id " << ev.event_id;
      add(os.str());
    }
    for (size_t o = 0; o < ev.obstacles.size(); ++o) {
      const auto& box = ev.obstacles[o];
      std::ostringstream opre;
      opre << pre.str() << "obstacles[" << o << "].";
      const bool ordered = box.min_corner.x < box.max_corner.x &&
                           box.min_corner.y < box.max_corner.y &&
                           box.min_corner.z < box.max_corner.z;
      if (!ordered) add(opre.str() + "corners not ordered (need min < max componentwise)");
      if (!s.room.contains(box.min_corner) || !s.room.contains(box.max_corner))
        add(opre.str() + "box outside room");
    }
    if (ev.reference_point && !s.room.contains(*ev.reference_point))
      add(pre.str() + "reference_point outside room");
  }

  if (!(s.patch_size > 0.0)) add("patch_size not positive");
  return out;
}

Scenario make_default_scenario() {
  Scenario s;
  s.room.width = 5.0;
  s.room.depth = 5.0;
  s.room.height = 3.0;
  // {x=0, x=5, y=0, y=5, floor, ceiling}; bright walls behind the PD views,
  // dark carpet so the unoccludable floor bounce stays weak
  s.room.wall_reflectivity = {0.55, 0.85, 0.85, 0.6, 0.15, 0.8};
  s.patch_size = 0.25;

  s.luminaire.position = {2.5, 2.5, 3.0};
  s.luminaire.orientation = {0.0, 0.0, -1.0};
  s.luminaire.lambertian_order = 1.0;
  s.luminaire.optical_power = 3.0;
  s.luminaire.led_cutoff_hz = 2e6;

  // Two PDs on the desk plane, exactly 1 m apart, both aimed across the
  // object grid so each monitored position gates a different part of the
  // diffuse field. Narrow FOVs keep the LOS out; the sensing signal is the
  // first-bounce pattern. Placement is deliberately off the room's symmetry
  // plane, otherwise mirrored object positions are indistinguishable.
  const double desk_z = 0.8;
  const double pd_dx = 0.417;  // horizontal x-offset between the PDs
  auto aim_at = [](const Vec3& from, const Vec3& at) {
    const Vec3 d = at - from;
    const double n = norm(d);
    return Vec3{d.x / n, d.y / n, d.z / n};
  };
  Photodetector pd0;
  pd0.position = {2.076, 2.317, desk_z};
  pd0.orientation = aim_at(pd0.position, {2.486, 2.535, 1.208});
  pd0.area = 1e-4;
  pd0.fov_half_angle = 0.611;
  pd0.responsivity = 0.55;
  s.pds.push_back(pd0);

  Photodetector pd1;
  pd1.position = {2.493, 2.317 + std::sqrt(1.0 - pd_dx * pd_dx), desk_z};
  pd1.orientation = aim_at(pd1.position, {2.533, 2.464, 1.190});
  pd1.area = 3e-5;
  pd1.fov_half_angle = 0.633;
  pd1.responsivity = 0.55;
  s.pds.push_back(pd1);

  Event baseline;
  baseline.event_id = 0;
  baseline.label = "no_object";
  baseline.reference_point = std::nullopt;
  s.events.push_back(baseline);

  // 3 x 3 grid of object positions at 0.10 m spacing on the desk plane
  // between the PDs. The sample object is an upright box with a lower side
  // arm; the asymmetric footprint makes the shadow orientation-dependent.
  const double grid_x0 = 2.35;
  const double grid_y0 = 2.35;
  const double spacing = 0.10;
  int next_id = 1;
  for (int iy = 0; iy < 3; ++iy) {
    for (int ix = 0; ix < 3; ++ix) {
      const double cx = grid_x0 + spacing * ix;
      const double cy = grid_y0 + spacing * iy;
      Event ev;
      ev.event_id = next_id++;
      std::ostringstream label;
      label << "object_" << ix << "_" << iy;
      ev.label = label.str();
      ev.obstacles.push_back(Obstacle{{cx - 0.123, cy - 0.123, desk_z},
                                      {cx + 0.123, cy + 0.123, desk_z + 1.287}});
      const double ax = cx + 0.013;
      const double ay = cy - 0.079;
      ev.obstacles.push_back(Obstacle{{ax - 0.066, ay - 0.066, desk_z},
                                      {ax + 0.066, ay + 0.066, desk_z + 0.732}});
      ev.reference_point = Vec3{cx, cy, desk_z};
      s.events.push_back(ev);
    }
  }
  return s;
}

}  // namespace vlcs
