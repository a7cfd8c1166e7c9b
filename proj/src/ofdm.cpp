#include "vlcsense/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vlcsense/errors.hpp"
#include "vlcsense/fft.hpp"
#include "vlcsense/rng.hpp"

namespace vlcs {

namespace {

// Seed of the QPSK pilot sequence; fixed protocol constant known at both ends.
constexpr std::uint64_t kPilotSeed = 0x50494C4F54ULL;

int int_log2(int m) {
  int b = 0;
  while ((1 << b) < m) ++b;
  return b;
}

// Gray-coded PAM level for one axis: bits map to odd levels in
// {-(L-1), ..., -1, +1, ..., L-1}, L = 2^m, with the all-zero pattern on +1
// side so QPSK bits 00 land on (+1+j)/sqrt(2).
int axis_level(const std::uint8_t* bits, int m) {
  if (m == 0) return 0;
  const int sign = bits[0] ? -1 : 1;
  return sign * ((1 << (m - 1)) - axis_level(bits + 1, m - 1));
}

struct QamTables {
  int bits_per_axis = 0;
  int levels = 0;           // 2^bits_per_axis
  double scale = 1.0;       // amplitude normalization
  std::vector<int> level_of_pattern;          // bit pattern -> odd level
  std::vector<std::uint8_t> pattern_of_index; // (level + L - 1) / 2 -> bit pattern
};

QamTables make_tables(int qam_order) {
  if (qam_order != 4 && qam_order != 16 && qam_order != 64)
    throw invalid_input("qam_order must be one of {4, 16, 64}");
  QamTables t;
  const int bits_total = int_log2(qam_order);
  t.bits_per_axis = bits_total / 2;
  t.levels = 1 << t.bits_per_axis;
  // mean of |level|^2 over one axis is (L^2 - 1) / 3; two axes per symbol
  t.scale = std::sqrt(3.0 / (2.0 * (qam_order - 1)));
  t.level_of_pattern.resize(t.levels);
  t.pattern_of_index.resize(t.levels);
  for (int p = 0; p < t.levels; ++p) {
    std::uint8_t bits[8] = {0};
    for (int b = 0; b < t.bits_per_axis; ++b)
      bits[b] = (std::uint8_t)((p >> (t.bits_per_axis - 1 - b)) & 1);
    const int level = axis_level(bits, t.bits_per_axis);
    t.level_of_pattern[p] = level;
    t.pattern_of_index[(level + t.levels - 1) / 2] = (std::uint8_t)p;
  }
  return t;
}

int axis_pattern(const QamTables& t, const std::vector<std::uint8_t>& bits, std::size_t at) {
  int p = 0;
  for (int b = 0; b < t.bits_per_axis; ++b) p = (p << 1) | (bits[at + b] & 1);
  return p;
}

// Nearest odd level index for an unscaled coordinate.
int nearest_level_index(const QamTables& t, double r) {
  const long idx = std::lround((r + (t.levels - 1)) / 2.0);
  return (int)std::clamp(idx, 0L, (long)(t.levels - 1));
}

}  // namespace

int OfdmConfig::bits_per_qam_symbol() const { return int_log2(qam_order); }

std::vector<double> OfdmConfig::subcarrier_freqs() const {
  std::vector<double> f((std::size_t)active_subcarriers);
  for (int k = 1; k <= active_subcarriers; ++k) f[k - 1] = k * subcarrier_spacing;
  return f;
}

std::vector<std::string> validate_config(const OfdmConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.fft_size < 8 || !is_power_of_two((std::size_t)cfg.fft_size))
    out.push_back("fft_size must be a power of two >= 8");
  if (cfg.active_subcarriers < 1 || cfg.active_subcarriers > cfg.fft_size / 2 - 1)
    out.push_back("active_subcarriers must satisfy 1 <= K <= N/2 - 1");
  if (cfg.cp_len < 0) out.push_back("cp_len negative");
  if (cfg.qam_order != 4 && cfg.qam_order != 16 && cfg.qam_order != 64)
    out.push_back("qam_order must be one of {4, 16, 64}");
  if (cfg.n_pilot_symbols < 1) out.push_back("n_pilot_symbols must be >= 1");
  if (cfg.n_data_symbols < 0) out.push_back("n_data_symbols negative");
  if (!(cfg.subcarrier_spacing > 0.0)) out.push_back("subcarrier_spacing not positive");
  if (!(cfg.dc_bias >= 0.0)) out.push_back("dc_bias negative");
  return out;
}

SymbolGrid SymbolGrid::rows(int begin, int end) const {
  if (begin < 0 || end > n_symbols || begin > end)
    throw invalid_input("SymbolGrid::rows: range out of bounds");
  SymbolGrid out(end - begin, n_subcarriers);
  std::copy(data.begin() + (std::size_t)begin * n_subcarriers,
            data.begin() + (std::size_t)end * n_subcarriers, out.data.begin());
  return out;
}

std::vector<cplx> qam_map(const std::vector<std::uint8_t>& bits, int qam_order) {
  const QamTables t = make_tables(qam_order);
  const int bps = 2 * t.bits_per_axis;
  if (bits.size() % bps != 0)
    throw invalid_input("qam_map: bit count not divisible by log2(M)");
  std::vector<cplx> out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::size_t at = s * bps;
    const int pi = axis_pattern(t, bits, at);
    const int pq = axis_pattern(t, bits, at + t.bits_per_axis);
    out[s] = t.scale * cplx(t.level_of_pattern[pi], t.level_of_pattern[pq]);
  }
  return out;
}

std::vector<std::uint8_t> qam_demap(const std::vector<cplx>& symbols, int qam_order) {
  const QamTables t = make_tables(qam_order);
  const int bps = 2 * t.bits_per_axis;
  std::vector<std::uint8_t> out(symbols.size() * bps);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const int ii = nearest_level_index(t, symbols[s].real() / t.scale);
    const int iq = nearest_level_index(t, symbols[s].imag() / t.scale);
    const std::uint8_t pi = t.pattern_of_index[ii];
    const std::uint8_t pq = t.pattern_of_index[iq];
    for (int b = 0; b < t.bits_per_axis; ++b) {
      out[s * bps + b] = (pi >> (t.bits_per_axis - 1 - b)) & 1;
      out[s * bps + t.bits_per_axis + b] = (pq >> (t.bits_per_axis - 1 - b)) & 1;
    }
  }
  return out;
}

std::vector<cplx> hermitian_assemble(const std::vector<cplx>& symbols, int fft_size) {
  const int n = fft_size;
  const int k_count = (int)symbols.size();
  if (k_count > n / 2 - 1)
    throw invalid_input("hermitian_assemble: more symbols than N/2 - 1 bins");
  std::vector<cplx> spectrum((std::size_t)n, cplx(0.0, 0.0));
  for (int k = 1; k <= k_count; ++k) {
    spectrum[k] = symbols[k - 1];
    spectrum[n - k] = std::conj(symbols[k - 1]);
  }
  return spectrum;
}

Waveform modulate(const OfdmConfig& cfg, const SymbolGrid& grid) {
  if (grid.n_subcarriers != cfg.active_subcarriers)
    throw invalid_input("modulate: grid width != active_subcarriers");
  const int n = cfg.fft_size;
  const int sym_len = n + cfg.cp_len;
  std::vector<double> raw((std::size_t)grid.n_symbols * sym_len);

  for (int s = 0; s < grid.n_symbols; ++s) {
    std::vector<cplx> row(grid.data.begin() + (std::size_t)s * grid.n_subcarriers,
                          grid.data.begin() + (std::size_t)(s + 1) * grid.n_subcarriers);
    std::vector<cplx> spectrum = hermitian_assemble(row, n);
    ifft(spectrum);
    double* dst = raw.data() + (std::size_t)s * sym_len;
    for (int i = 0; i < cfg.cp_len; ++i) dst[i] = spectrum[n - cfg.cp_len + i].real();
    for (int i = 0; i < n; ++i) dst[cfg.cp_len + i] = spectrum[i].real();
  }

  // Hermitian spectra with empty DC bin give zero-mean symbols, so the stream
  // variance is just the mean square.
  double power = 0.0;
  for (double v : raw) power += v * v;
  power /= (double)raw.size();
  if (power <= 0.0) throw invalid_input("modulate: zero-power frame");

  Waveform wave;
  wave.scale = 1.0 / std::sqrt(power);
  wave.samples.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    wave.samples[i] = std::max(0.0, raw[i] * wave.scale + cfg.dc_bias);
  return wave;
}

SymbolGrid demodulate(const OfdmConfig& cfg, const Waveform& wave, int n_symbols) {
  const int n = cfg.fft_size;
  const int sym_len = n + cfg.cp_len;
  if ((std::size_t)n_symbols * sym_len != wave.samples.size())
    throw invalid_input("demodulate: sample count mismatch");
  SymbolGrid grid(n_symbols, cfg.active_subcarriers);
  std::vector<cplx> buf((std::size_t)n);
  for (int s = 0; s < n_symbols; ++s) {
    const double* src = wave.samples.data() + (std::size_t)s * sym_len + cfg.cp_len;
    for (int i = 0; i < n; ++i) buf[i] = cplx((src[i] - cfg.dc_bias) / wave.scale, 0.0);
    fft(buf);
    for (int k = 1; k <= cfg.active_subcarriers; ++k) grid.at(s, k - 1) = buf[k];
  }
  return grid;
}

SymbolGrid pilot_grid(const OfdmConfig& cfg) {
  SymbolGrid grid(cfg.n_pilot_symbols, cfg.active_subcarriers);
  Rng rng(kPilotSeed);
  std::vector<std::uint8_t> bits(2);
  for (int s = 0; s < cfg.n_pilot_symbols; ++s) {
    for (int k = 0; k < cfg.active_subcarriers; ++k) {
      bits[0] = rng.next_bit() ? 1 : 0;
      bits[1] = rng.next_bit() ? 1 : 0;
      grid.at(s, k) = qam_map(bits, 4)[0];
    }
  }
  return grid;
}

std::vector<SymbolGrid> apply_channel(const OfdmConfig& cfg, const SymbolGrid& tx,
                                      const std::vector<ChannelResponse>& per_pd,
                                      std::uint64_t seed) {
  if (tx.n_subcarriers != cfg.active_subcarriers)
    throw invalid_input("apply_channel: grid width != active_subcarriers");
  const std::vector<double> want = cfg.subcarrier_freqs();
  for (const auto& resp : per_pd) {
    if (resp.freqs.size() != want.size() || resp.h.size() != resp.freqs.size())
      throw invalid_input("apply_channel: response not sampled on the active subcarriers");
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::abs(resp.freqs[i] - want[i]) > 1e-9 * std::max(1.0, want[i]))
        throw invalid_input("apply_channel: response frequency grid mismatch");
    }
  }

  const double snr_lin = std::pow(10.0, cfg.snr_db / 10.0);
  Rng rng(seed);
  std::vector<SymbolGrid> out;
  out.reserve(per_pd.size());
  for (const auto& resp : per_pd) {
    double mean_h2 = 0.0;
    for (const auto& h : resp.h) mean_h2 += std::norm(h);
    mean_h2 /= (double)resp.h.size();
    const double noise_var = cfg.noiseless || std::isinf(cfg.snr_db) ? 0.0 : mean_h2 / snr_lin;
    const double sigma = std::sqrt(noise_var / 2.0);

    SymbolGrid rx(tx.n_symbols, tx.n_subcarriers);
    for (int s = 0; s < tx.n_symbols; ++s) {
      for (int k = 0; k < tx.n_subcarriers; ++k) {
        cplx y = resp.h[k] * tx.at(s, k);
        if (sigma > 0.0) {
          const auto [g1, g2] = rng.next_gaussian_pair();
          y += cplx(sigma * g1, sigma * g2);
        }
        rx.at(s, k) = y;
      }
    }
    out.push_back(std::move(rx));
  }
  return out;
}

std::vector<std::vector<cplx>> estimate_csi(const OfdmConfig& cfg,
                                            const std::vector<SymbolGrid>& rx_pilots,
                                            const SymbolGrid& pilots) {
  if (pilots.n_symbols < 1) throw invalid_input("estimate_csi: empty pilot grid");
  for (const auto& v : pilots.data) {
    if (v == cplx(0.0, 0.0)) throw invalid_input("estimate_csi: zero pilot symbol");
  }
  std::vector<std::vector<cplx>> h_hat(rx_pilots.size());
  for (std::size_t p = 0; p < rx_pilots.size(); ++p) {
    const SymbolGrid& rx = rx_pilots[p];
    if (rx.n_symbols != pilots.n_symbols || rx.n_subcarriers != pilots.n_subcarriers)
      throw invalid_input("estimate_csi: pilot grid dimensions mismatch");
    h_hat[p].assign((std::size_t)cfg.active_subcarriers, cplx(0.0, 0.0));
    for (int k = 0; k < pilots.n_subcarriers; ++k) {
      cplx acc(0.0, 0.0);
      for (int s = 0; s < pilots.n_symbols; ++s) acc += rx.at(s, k) / pilots.at(s, k);
      h_hat[p][k] = acc / (double)pilots.n_symbols;
    }
  }
  return h_hat;
}

std::vector<std::uint8_t> equalize_and_demap(const OfdmConfig& cfg, const SymbolGrid& rx_data,
                                             const std::vector<cplx>& h_hat) {
  if ((int)h_hat.size() != rx_data.n_subcarriers)
    throw invalid_input("equalize_and_demap: estimate width mismatch");
  std::vector<cplx> eq((std::size_t)rx_data.n_symbols * rx_data.n_subcarriers);
  for (int s = 0; s < rx_data.n_symbols; ++s) {
    for (int k = 0; k < rx_data.n_subcarriers; ++k) {
      if (h_hat[k] == cplx(0.0, 0.0)) {
        std::ostringstream os;
        os << "equalization singular: zero channel estimate on subcarrier " << (k + 1);
        throw equalization_singularity(os.str());
      }
      eq[(std::size_t)s * rx_data.n_subcarriers + k] = rx_data.at(s, k) / h_hat[k];
    }
  }
  return qam_demap(eq, cfg.qam_order);
}

double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx) {
  if (tx.size() != rx.size() || tx.empty())
    throw invalid_input("ber: bit streams must be nonempty and of equal length");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) errors += (tx[i] != rx[i]) ? 1 : 0;
  return (double)errors / (double)tx.size();
}

std::vector<LinkObservation> simulate_link(const Scenario& scene, const OfdmConfig& cfg,
                                           int snapshots_per_event, std::uint64_t seed) {
  if (snapshots_per_event < 1) throw invalid_input("snapshots_per_event must be >= 1");
  {
    const auto scene_issues = validate_scenario(scene);
    if (!scene_issues.empty())
      throw invalid_input("simulate_link: invalid scenario: " + scene_issues.front());
    const auto cfg_issues = validate_config(cfg);
    if (!cfg_issues.empty())
      throw invalid_input("simulate_link: invalid config: " + cfg_issues.front());
  }

  const int n_events = (int)scene.events.size();
  const int n_pds = (int)scene.pds.size();
  const std::vector<double> freqs = cfg.subcarrier_freqs();

  // Ground truth once per (event, pd); frequency_response parallelizes inside.
  std::vector<std::vector<ChannelResponse>> truth(n_events);
  for (int e = 0; e < n_events; ++e) {
    truth[e].reserve(n_pds);
    for (int p = 0; p < n_pds; ++p) {
      try {
        truth[e].push_back(frequency_response(scene, scene.events[e], p, freqs));
      } catch (const std::exception& ex) {
        std::ostringstream os;
        os << "simulate_link: event " << scene.events[e].event_id << ", pd " << p << ": "
           << ex.what();
        throw invalid_input(os.str());
      }
    }
  }

  const SymbolGrid pilots = pilot_grid(cfg);
  const int total = n_events * snapshots_per_event;
  const int bits_per_frame = cfg.n_data_symbols * cfg.active_subcarriers *
                             cfg.bits_per_qam_symbol();
  std::vector<LinkObservation> out((std::size_t)total);

  auto run_snapshot = [&](int sid) {
    const int e = sid / snapshots_per_event;
    const std::uint64_t snap_seed = derive_stream(seed, (std::uint64_t)sid);

    // Fixed draw order inside one snapshot: data bits first, then channel noise.
    Rng bit_rng(derive_stream(snap_seed, 0));
    std::vector<std::uint8_t> tx_bits((std::size_t)bits_per_frame);
    for (auto& b : tx_bits) b = bit_rng.next_bit() ? 1 : 0;

    SymbolGrid frame(cfg.n_pilot_symbols + cfg.n_data_symbols, cfg.active_subcarriers);
    std::copy(pilots.data.begin(), pilots.data.end(), frame.data.begin());
    if (cfg.n_data_symbols > 0) {
      const std::vector<cplx> data_syms = qam_map(tx_bits, cfg.qam_order);
      std::copy(data_syms.begin(), data_syms.end(),
                frame.data.begin() + pilots.data.size());
    }

    const std::vector<SymbolGrid> rx =
        apply_channel(cfg, frame, truth[e], derive_stream(snap_seed, 1));

    std::vector<SymbolGrid> rx_pilots;
    rx_pilots.reserve(rx.size());
    for (const auto& grid : rx) rx_pilots.push_back(grid.rows(0, cfg.n_pilot_symbols));

    LinkObservation obs;
    obs.csi.event_id = scene.events[e].event_id;
    obs.csi.snapshot_id = sid;
    obs.csi.h_est = estimate_csi(cfg, rx_pilots, pilots);

    if (cfg.n_data_symbols > 0) {
      double ber_sum = 0.0;
      for (int p = 0; p < n_pds; ++p) {
        const SymbolGrid rx_data = rx[p].rows(cfg.n_pilot_symbols, frame.n_symbols);
        const auto rx_bits = equalize_and_demap(cfg, rx_data, obs.csi.h_est[p]);
        ber_sum += ber(tx_bits, rx_bits);
      }
      obs.data_ber = ber_sum / n_pds;
      obs.n_bits = (long)bits_per_frame * n_pds;
    }
    out[sid] = std::move(obs);
  };

  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int sid = 0; sid < total; ++sid) {
    try {
      run_snapshot(sid);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<CsiSnapshot> collect_dataset(const Scenario& scene, const OfdmConfig& cfg,
                                         int snapshots_per_event, std::uint64_t seed) {
  std::vector<LinkObservation> obs = simulate_link(scene, cfg, snapshots_per_event, seed);
  std::vector<CsiSnapshot> out;
  out.reserve(obs.size());
  for (auto& o : obs) out.push_back(std::move(o.csi));
  return out;
}

}  // namespace vlcs
