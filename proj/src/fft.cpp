#include "vlcsense/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "vlcsense/errors.hpp"

namespace vlcs {

namespace {

void transform(std::vector<std::complex<double>>& x, double sign) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) throw invalid_input("fft: size must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / (double)len;
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::vector<std::complex<double>>& x) { transform(x, -1.0); }

void ifft(std::vector<std::complex<double>>& x) {
  transform(x, 1.0);
  const double inv = 1.0 / (double)x.size();
  for (auto& v : x) v *= inv;
}

}  // namespace vlcs
