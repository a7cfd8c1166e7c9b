#include "vlcsense/channel.hpp"

#include <cmath>
#include <numbers>

#include "vlcsense/errors.hpp"

namespace vlcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lambertian emitter of order m at `src` with boresight `src_axis`, receiver
// patch of area `area` at `dst` with normal `dst_axis`. Returns the optical
// power ratio, zero outside either front hemisphere or past `fov_limit`
// (incidence angle at the receiver).
double lambertian_leg(const Vec3& src, const Vec3& src_axis, double m, const Vec3& dst,
                      const Vec3& dst_axis, double area, double fov_limit) {
  const Vec3 diff = dst - src;
  const double d2 = dot(diff, diff);
  const double d = std::sqrt(d2);
  if (d == 0.0) return 0.0;
  const Vec3 u{diff.x / d, diff.y / d, diff.z / d};
  const double cos_emit = dot(src_axis, u);
  const double cos_inc = -dot(dst_axis, u);
  if (cos_emit <= 0.0 || cos_inc <= 0.0) return 0.0;
  const double incidence = std::acos(std::min(1.0, cos_inc));
  if (incidence > fov_limit) return 0.0;
  return (m + 1.0) * area / (kTwoPi * d2) * std::pow(cos_emit, m) * cos_inc;
}

struct PatchGrid {
  int surface = 0;        // Surface enum value
  Vec3 origin;            // corner of the surface
  Vec3 du, dv;            // cell edge vectors
  Vec3 normal;            // into the room
  int nu = 0, nv = 0;
  double cell_area = 0.0;
};

// Tessellation of the six room surfaces into cells of side <= patch_size.
// Order: surfaces as in the Surface enum, cells row-major (v-major over u).
std::vector<PatchGrid> make_patch_grids(const Room& room, double patch_size) {
  auto cells = [&](double len) { return std::max(1, (int)std::ceil(len / patch_size)); };
  const double w = room.width, d = room.depth, h = room.height;
  const int nw = cells(w), nd = cells(d), nh = cells(h);

  std::vector<PatchGrid> grids;
  auto push = [&grids](int surface, Vec3 origin, Vec3 full_u, Vec3 full_v, Vec3 normal, int nu,
                       int nv) {
    PatchGrid g;
    g.surface = surface;
    g.origin = origin;
    g.du = (1.0 / nu) * full_u;
    g.dv = (1.0 / nv) * full_v;
    g.normal = normal;
    g.nu = nu;
    g.nv = nv;
    g.cell_area = norm(g.du) * norm(g.dv);
    grids.push_back(g);
  };

  push(kWallXMin, {0, 0, 0}, {0, d, 0}, {0, 0, h}, {1, 0, 0}, nd, nh);
  push(kWallXMax, {w, 0, 0}, {0, d, 0}, {0, 0, h}, {-1, 0, 0}, nd, nh);
  push(kWallYMin, {0, 0, 0}, {w, 0, 0}, {0, 0, h}, {0, 1, 0}, nw, nh);
  push(kWallYMax, {0, d, 0}, {w, 0, 0}, {0, 0, h}, {0, -1, 0}, nw, nh);
  push(kFloor, {0, 0, 0}, {w, 0, 0}, {0, d, 0}, {0, 0, 1}, nw, nd);
  push(kCeiling, {0, 0, h}, {w, 0, 0}, {0, d, 0}, {0, 0, -1}, nw, nd);
  return grids;
}

}  // namespace

double los_gain(const Luminaire& lum, const Photodetector& pd,
                const std::vector<Obstacle>& obstacles) {
  if (lum.position == pd.position) throw invalid_input("los_gain: coincident positions");
  const double gain = pd.responsivity * lambertian_leg(lum.position, lum.orientation,
                                                       lum.lambertian_order, pd.position,
                                                       pd.orientation, pd.area,
                                                       pd.fov_half_angle);
  if (gain == 0.0) return 0.0;
  return ray_occluded(lum.position, pd.position, obstacles) ? 0.0 : gain;
}

std::complex<double> led_lowpass(double freq_hz, double cutoff_hz) {
  return 1.0 / std::complex<double>(1.0, freq_hz / cutoff_hz);
}

std::vector<Tap> diffuse_taps_dense(const Scenario& scene, const Event& event, int pd_index) {
  if (pd_index < 0 || pd_index >= (int)scene.pds.size())
    throw invalid_input("diffuse_taps_dense: pd_index out of range");
  const Photodetector& pd = scene.pds[pd_index];
  const Luminaire& lum = scene.luminaire;
  const auto grids = make_patch_grids(scene.room, scene.patch_size);

  int total = 0;
  for (const auto& g : grids) total += g.nu * g.nv;
  std::vector<Tap> taps(total);

  int base = 0;
  for (const auto& g : grids) {
    const double rho = scene.room.wall_reflectivity[g.surface];
    const int count = g.nu * g.nv;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < count; ++c) {
      const int iu = c % g.nu;
      const int iv = c / g.nu;
      Tap tap;
      if (rho > 0.0) {
        const Vec3 center =
            g.origin + (iu + 0.5) * g.du + (iv + 0.5) * g.dv;
        const double d1 = norm(center - lum.position);
        const double d2 = norm(pd.position - center);
        if (d1 > 0.0 && d2 > 0.0) {
          // luminaire -> patch, patch as a receiver of the cell area
          const double g1 = lambertian_leg(lum.position, lum.orientation, lum.lambertian_order,
                                           center, g.normal, g.cell_area,
                                           std::numbers::pi / 2.0);
          // patch -> PD, patch as an order-1 Lambertian emitter
          const double g2 = lambertian_leg(center, g.normal, 1.0, pd.position, pd.orientation,
                                           pd.area, pd.fov_half_angle);
          if (g1 > 0.0 && g2 > 0.0 &&
              !ray_occluded(lum.position, center, event.obstacles) &&
              !ray_occluded(center, pd.position, event.obstacles)) {
            tap.gain = pd.responsivity * g1 * rho * g2;
            tap.delay = (d1 + d2) / kSpeedOfLight;
          }
        }
      }
      taps[base + c] = tap;
    }
    base += count;
  }
  return taps;
}

std::vector<Tap> diffuse_gains(const Scenario& scene, const Event& event, int pd_index) {
  std::vector<Tap> dense = diffuse_taps_dense(scene, event, pd_index);
  std::vector<Tap> out;
  out.reserve(dense.size());
  for (const auto& t : dense) {
    if (t.gain > 0.0) out.push_back(t);
  }
  return out;
}

ChannelResponse frequency_response(const Scenario& scene, const Event& event, int pd_index,
                                   const std::vector<double>& freqs) {
  for (size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] < 0.0 || (i > 0 && !(freqs[i] > freqs[i - 1])))
      throw invalid_input("frequency_response: freqs must be nonnegative, strictly increasing");
  }
  const Photodetector& pd = scene.pds.at(pd_index);
  const double g_los = los_gain(scene.luminaire, pd, event.obstacles);
  const double tau_los = norm(pd.position - scene.luminaire.position) / kSpeedOfLight;
  const std::vector<Tap> taps = diffuse_gains(scene, event, pd_index);

  ChannelResponse resp;
  resp.pd_index = pd_index;
  resp.event_id = event.event_id;
  resp.freqs = freqs;
  resp.h.resize(freqs.size());
  const int nf = (int)freqs.size();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nf; ++i) {
    const double f = freqs[i];
    std::complex<double> acc =
        g_los * std::exp(std::complex<double>(0.0, -kTwoPi * f * tau_los));
    for (const auto& t : taps)
      acc += t.gain * std::exp(std::complex<double>(0.0, -kTwoPi * f * t.delay));
    resp.h[i] = led_lowpass(f, scene.luminaire.led_cutoff_hz) * acc;
  }
  return resp;
}

}  // namespace vlcs
