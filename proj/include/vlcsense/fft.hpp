#pragma once
// Radix-2 transforms, sized for the small DCO-OFDM symbol lengths used here.

#include <complex>
#include <cstddef>
#include <vector>

namespace vlcs {

bool is_power_of_two(std::size_t n);

// In-place forward DFT, no normalization.
void fft(std::vector<std::complex<double>>& x);

// In-place inverse DFT with 1/N normalization.
void ifft(std::vector<std::complex<double>>& x);

}  // namespace vlcs
