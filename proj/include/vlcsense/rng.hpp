#pragma once
// Deterministic random streams. Every randomized operation takes an explicit
// 64-bit seed and derives one child stream per work item, so parallel and
// serial execution draw identical numbers regardless of thread count or
// schedule.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace vlcs {

// Finalizer of the splitmix64 generator (Steele, Lea & Flood).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of the child stream for work item `id` under the run seed `seed`.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t id) {
  return mix64(seed ^ mix64(id ^ 0xA5A5B5B5C5C5D5D5ULL));
}

// splitmix64 sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); multiply-shift, bias < n / 2^64.
  std::uint64_t next_below(std::uint64_t n) {
    const unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Pair of independent standard normals via Box-Muller.
  std::pair<double, double> next_gaussian_pair() {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace vlcs
