#pragma once
// Indoor geometry: room, luminaire, photodetectors and the catalog of
// monitored events (static obstacle placements).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vlcsense/geometry.hpp"

namespace vlcs {

// Surface indices for Room::wall_reflectivity.
enum Surface : int {
  kWallXMin = 0,  // x = 0
  kWallXMax = 1,  // x = width
  kWallYMin = 2,  // y = 0
  kWallYMax = 3,  // y = depth
  kFloor = 4,     // z = 0
  kCeiling = 5,   // z = height
};

struct Room {
  double width = 0.0;   // extent along x [m]
  double depth = 0.0;   // extent along y [m]
  double height = 0.0;  // extent along z [m]
  std::array<double, 6> wall_reflectivity{};

  bool contains(const Vec3& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= depth && p.z >= 0.0 &&
           p.z <= height;
  }
};

struct Luminaire {
  Vec3 position;
  Vec3 orientation{0.0, 0.0, -1.0};  // boresight, unit vector
  double lambertian_order = 1.0;
  double optical_power = 1.0;   // W
  double led_cutoff_hz = 2e6;   // 3 dB modulation bandwidth of the pc-LED
};

struct Photodetector {
  Vec3 position;
  Vec3 orientation{0.0, 0.0, 1.0};  // unit vector
  double area = 1e-4;               // m^2
  double fov_half_angle = 1.5707963267948966;  // rad, in (0, pi/2]
  double responsivity = 0.5;        // A/W
};

struct Event {
  int event_id = 0;
  std::vector<Obstacle> obstacles;      // empty = "no object" baseline
  std::string label;
  std::optional<Vec3> reference_point;  // nullopt for the baseline event
};

struct Scenario {
  Room room;
  Luminaire luminaire;
  std::vector<Photodetector> pds;
  std::vector<Event> events;
  double patch_size = 0.25;  // side of the square wall patches for the diffuse bounce [m]
};

// Empty iff every type invariant holds; each violation names the offending field.
std::vector<std::string> validate_scenario(const Scenario& s);

// Bundled desk-scale monitoring scenario: 5 x 5 x 3 m room, ceiling LED, two
// upward-facing PDs at desk height 1 m apart, and a 3 x 3 grid of object
// positions at 0.10 m spacing plus a no-object baseline (10 events).
Scenario make_default_scenario();

}  // namespace vlcs
