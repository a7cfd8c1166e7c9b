#pragma once
// DCO-OFDM link: Gray QAM mapping, Hermitian spectrum assembly, waveform
// generation, frequency-domain channel with AWGN, least-squares pilot channel
// estimation, one-tap equalization, and the CSI dataset collector.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vlcsense/channel.hpp"
#include "vlcsense/scene.hpp"

namespace vlcs {

using cplx = std::complex<double>;

struct OfdmConfig {
  int fft_size = 64;            // N, power of two >= 8
  int active_subcarriers = 24;  // K, symbols ride on bins 1..K
  int cp_len = 8;
  int qam_order = 4;            // 4, 16 or 64
  int n_pilot_symbols = 4;
  int n_data_symbols = 8;
  // 200 kHz puts the 24 active subcarriers across 4.8 MHz, wide enough for
  // the room's delay structure to show up in the CSI magnitudes.
  double subcarrier_spacing = 200e3;  // Hz
  double dc_bias = 4.47;              // DC offset in multiples of the signal std dev
  double snr_db = 32.0;               // per-subcarrier electrical SNR at the receiver
  bool noiseless = false;

  int bits_per_qam_symbol() const;
  // Active subcarrier frequencies f_k = k * subcarrier_spacing, k = 1..K.
  std::vector<double> subcarrier_freqs() const;
};

// Empty iff the config invariants hold.
std::vector<std::string> validate_config(const OfdmConfig& cfg);

// Row-major [symbol][subcarrier] grid of frequency-domain QAM symbols.
struct SymbolGrid {
  int n_symbols = 0;
  int n_subcarriers = 0;
  std::vector<cplx> data;

  SymbolGrid() = default;
  SymbolGrid(int symbols, int subcarriers)
      : n_symbols(symbols), n_subcarriers(subcarriers),
        data((std::size_t)symbols * subcarriers) {}

  cplx& at(int s, int k) { return data[(std::size_t)s * n_subcarriers + k]; }
  const cplx& at(int s, int k) const { return data[(std::size_t)s * n_subcarriers + k]; }

  // Copy of rows [begin, end).
  SymbolGrid rows(int begin, int end) const;
};

// Gray-mapped square QAM with unit average symbol energy. bits.size() must be
// divisible by log2(qam_order).
std::vector<cplx> qam_map(const std::vector<std::uint8_t>& bits, int qam_order);

// Nearest-neighbor hard decision, inverse of qam_map on clean symbols.
std::vector<std::uint8_t> qam_demap(const std::vector<cplx>& symbols, int qam_order);

// X[0] = X[N/2] = 0, X[k] = symbols[k-1] for k = 1..K, X[N-k] = conj(X[k]).
std::vector<cplx> hermitian_assemble(const std::vector<cplx>& symbols, int fft_size);

struct Waveform {
  std::vector<double> samples;  // nonnegative drive signal
  double scale = 1.0;           // factor that brought the raw stream to unit variance
};

// Per symbol: hermitian_assemble -> IFFT -> cyclic prefix; then the whole
// stream is scaled to unit variance, biased by dc_bias, and clipped at zero.
Waveform modulate(const OfdmConfig& cfg, const SymbolGrid& grid);

// Inverse of modulate for frames whose bias kept every sample unclipped.
SymbolGrid demodulate(const OfdmConfig& cfg, const Waveform& wave, int n_symbols);

// Known fixed QPSK pilot block spanning all active subcarriers.
SymbolGrid pilot_grid(const OfdmConfig& cfg);

// Y_p[s,k] = h_p[k] X[s,k] + w with circular complex AWGN calibrated so the
// per-subcarrier SNR equals cfg.snr_db against the mean squared channel
// magnitude of PD p. Each response must be sampled at cfg.subcarrier_freqs().
std::vector<SymbolGrid> apply_channel(const OfdmConfig& cfg, const SymbolGrid& tx,
                                      const std::vector<ChannelResponse>& per_pd,
                                      std::uint64_t seed);

// LS estimate per PD and subcarrier: mean over pilot symbols of Y/X.
std::vector<std::vector<cplx>> estimate_csi(const OfdmConfig& cfg,
                                            const std::vector<SymbolGrid>& rx_pilots,
                                            const SymbolGrid& pilots);

// One-tap equalization Y/H per subcarrier followed by hard demapping.
std::vector<std::uint8_t> equalize_and_demap(const OfdmConfig& cfg, const SymbolGrid& rx_data,
                                             const std::vector<cplx>& h_hat);

// Hamming distance / length.
double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx);

struct CsiSnapshot {
  int event_id = 0;  // ground truth, carried for post-hoc evaluation only
  int snapshot_id = 0;
  std::vector<std::vector<cplx>> h_est;  // [pd][subcarrier]
};

struct LinkObservation {
  CsiSnapshot csi;
  double data_ber = 0.0;
  long n_bits = 0;
};

// Ground-truth responses once per (event, pd), then snapshots_per_event
// independent noisy frames per event. Snapshot order is event-major; snapshot
// `i` draws only from the stream derive_stream(seed, i), so the result is
// identical for any thread count.
std::vector<LinkObservation> simulate_link(const Scenario& scene, const OfdmConfig& cfg,
                                           int snapshots_per_event, std::uint64_t seed);

// The CSI part of simulate_link.
std::vector<CsiSnapshot> collect_dataset(const Scenario& scene, const OfdmConfig& cfg,
                                         int snapshots_per_event, std::uint64_t seed);

}  // namespace vlcs
