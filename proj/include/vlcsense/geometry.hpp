#pragma once
// Vector and box primitives plus the segment/box occlusion query used by the
// optical channel model.

#include <algorithm>
#include <cmath>
#include <vector>

#include "vlcsense/errors.hpp"

namespace vlcs {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Fully absorbing axis-aligned box.
struct Obstacle {
  Vec3 min_corner;
  Vec3 max_corner;
};

// Slab test of the segment a + t (b - a), t in [0, 1], against the box.
// Touching a face counts as a hit.
inline bool segment_hits_box(const Vec3& a, const Vec3& b, const Obstacle& box) {
  const double org[3] = {a.x, a.y, a.z};
  const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  const double lo[3] = {box.min_corner.x, box.min_corner.y, box.min_corner.z};
  const double hi[3] = {box.max_corner.x, box.max_corner.y, box.max_corner.z};

  double t0 = 0.0;
  double t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) {
      if (org[i] < lo[i] || org[i] > hi[i]) return false;
    } else {
      double ta = (lo[i] - org[i]) / dir[i];
      double tb = (hi[i] - org[i]) / dir[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

// True iff the segment (origin, dest) intersects any obstacle box.
inline bool ray_occluded(const Vec3& origin, const Vec3& dest,
                         const std::vector<Obstacle>& obstacles) {
  if (origin == dest) throw invalid_input("ray_occluded: origin equals dest");
  for (const auto& o : obstacles) {
    if (segment_hits_box(origin, dest, o)) return true;
  }
  return false;
}

}  // namespace vlcs
