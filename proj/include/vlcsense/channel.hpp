#pragma once
// Optical-to-electrical frequency response of the room under one event:
// Lambertian LOS path, single-bounce diffuse reflections off the six room
// surfaces, obstacle occlusion, and the pc-LED low-pass roll-off.

#include <complex>
#include <vector>

#include "vlcsense/scene.hpp"

namespace vlcs {

inline constexpr double kSpeedOfLight = 3e8;  // m/s

struct Tap {
  double gain = 0.0;   // optical power ratio x responsivity [A per transmitted W]
  double delay = 0.0;  // s
};

struct ChannelResponse {
  int pd_index = 0;
  int event_id = 0;
  std::vector<double> freqs;            // Hz, strictly increasing
  std::vector<std::complex<double>> h;  // same length as freqs
};

// Lambertian LOS gain; zero when the PD looks away, the luminaire radiates
// away, the incidence angle exceeds the FOV, or an obstacle blocks the path.
double los_gain(const Luminaire& lum, const Photodetector& pd,
                const std::vector<Obstacle>& obstacles);

// First-order low-pass response of the pc-LED, unity at DC.
std::complex<double> led_lowpass(double freq_hz, double cutoff_hz);

// One tap per wall patch in tessellation order, zero-gain patches included.
// The fixed ordering makes every downstream sum reproducible.
std::vector<Tap> diffuse_taps_dense(const Scenario& scene, const Event& event, int pd_index);

// Non-zero single-bounce taps (the dense list with zero-gain patches dropped).
std::vector<Tap> diffuse_gains(const Scenario& scene, const Event& event, int pd_index);

// h[k] = H_led(f_k) * (g_los e^{-j 2 pi f tau_los} + sum_i g_i e^{-j 2 pi f tau_i}).
ChannelResponse frequency_response(const Scenario& scene, const Event& event, int pd_index,
                                   const std::vector<double>& freqs);

}  // namespace vlcs
