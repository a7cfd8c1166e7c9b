#include "vlcsense/reference.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vlcs::reference {

namespace {

constexpr double kPi = std::numbers::pi;

struct Patch {
  Vec3 center;
  Vec3 normal;
  double area = 0.0;
  int surface = 0;
};

// Same tessellation contract as the parallel kernel: six surfaces in enum
// order, cells of side <= patch_size, v-major over u.
std::vector<Patch> tessellate(const Room& room, double patch_size) {
  std::vector<Patch> patches;
  auto emit = [&](int surface, Vec3 origin, Vec3 full_u, Vec3 full_v, Vec3 normal) {
    const double lu = norm(full_u);
    const double lv = norm(full_v);
    const int nu = std::max(1, (int)std::ceil(lu / patch_size));
    const int nv = std::max(1, (int)std::ceil(lv / patch_size));
    const Vec3 du = (1.0 / nu) * full_u;
    const Vec3 dv = (1.0 / nv) * full_v;
    for (int iv = 0; iv < nv; ++iv) {
      for (int iu = 0; iu < nu; ++iu) {
        Patch p;
        p.center = origin + (iu + 0.5) * du + (iv + 0.5) * dv;
        p.normal = normal;
        p.area = (lu / nu) * (lv / nv);
        p.surface = surface;
        patches.push_back(p);
      }
    }
  };
  const double w = room.width, d = room.depth, h = room.height;
  emit(kWallXMin, {0, 0, 0}, {0, d, 0}, {0, 0, h}, {1, 0, 0});
  emit(kWallXMax, {w, 0, 0}, {0, d, 0}, {0, 0, h}, {-1, 0, 0});
  emit(kWallYMin, {0, 0, 0}, {w, 0, 0}, {0, 0, h}, {0, 1, 0});
  emit(kWallYMax, {0, d, 0}, {w, 0, 0}, {0, 0, h}, {0, -1, 0});
  emit(kFloor, {0, 0, 0}, {w, 0, 0}, {0, d, 0}, {0, 0, 1});
  emit(kCeiling, {0, 0, h}, {w, 0, 0}, {0, d, 0}, {0, 0, -1});
  return patches;
}

}  // namespace

std::vector<Tap> diffuse_taps_dense(const Scenario& scene, const Event& event, int pd_index) {
  const Photodetector& pd = scene.pds.at(pd_index);
  const Luminaire& lum = scene.luminaire;
  const double m = lum.lambertian_order;

  std::vector<Tap> taps;
  for (const Patch& patch : tessellate(scene.room, scene.patch_size)) {
    Tap tap;
    const double rho = scene.room.wall_reflectivity[patch.surface];
    do {
      if (rho <= 0.0) break;

      const Vec3 to_patch = patch.center - lum.position;
      const double d1 = norm(to_patch);
      if (d1 == 0.0) break;
      const Vec3 u1{to_patch.x / d1, to_patch.y / d1, to_patch.z / d1};
      const double cos_emit1 = dot(lum.orientation, u1);
      const double cos_inc1 = -dot(patch.normal, u1);
      if (cos_emit1 <= 0.0 || cos_inc1 <= 0.0) break;

      const Vec3 to_pd = pd.position - patch.center;
      const double d2 = norm(to_pd);
      if (d2 == 0.0) break;
      const Vec3 u2{to_pd.x / d2, to_pd.y / d2, to_pd.z / d2};
      const double cos_emit2 = dot(patch.normal, u2);
      const double cos_inc2 = -dot(pd.orientation, u2);
      if (cos_emit2 <= 0.0 || cos_inc2 <= 0.0) break;
      if (std::acos(std::min(1.0, cos_inc2)) > pd.fov_half_angle) break;

      if (ray_occluded(lum.position, patch.center, event.obstacles)) break;
      if (ray_occluded(patch.center, pd.position, event.obstacles)) break;

      const double g1 =
          (m + 1.0) * patch.area / (2.0 * kPi * d1 * d1) * std::pow(cos_emit1, m) * cos_inc1;
      const double g2 = 2.0 * pd.area / (2.0 * kPi * d2 * d2) * cos_emit2 * cos_inc2;
      tap.gain = pd.responsivity * g1 * rho * g2;
      tap.delay = (d1 + d2) / kSpeedOfLight;
    } while (false);
    taps.push_back(tap);
  }
  return taps;
}

std::vector<double> pairwise_distances(const std::vector<double>& x, int n, int d) {
  std::vector<double> dist((std::size_t)n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = x[(std::size_t)i * d + c] - x[(std::size_t)j * d + c];
        acc += diff * diff;
      }
      dist[(std::size_t)i * n + j] = std::sqrt(acc);
    }
  }
  return dist;
}

double silhouette(const std::vector<double>& x, int n, int d,
                  const std::vector<int>& assignments) {
  const std::vector<double> dist = pairwise_distances(x, n, d);
  int k = 0;
  for (int a : assignments) k = std::max(k, a + 1);
  std::vector<long> counts((std::size_t)k, 0);
  for (int a : assignments) counts[a] += 1;

  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    if (counts[assignments[i]] < 2) continue;  // singleton scores 0
    std::vector<double> sum((std::size_t)k, 0.0);
    for (int j = 0; j < n; ++j) {
      if (j != i) sum[assignments[j]] += dist[(std::size_t)i * n + j];
    }
    const double a = sum[assignments[i]] / (double)(counts[assignments[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == assignments[i] || counts[c] == 0) continue;
      b = std::min(b, sum[c] / (double)counts[c]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) mean += (b - a) / denom;
  }
  return mean / (double)n;
}

}  // namespace vlcs::reference
