#pragma once
// Flat-file handoffs between pipeline stages: CSI dataset CSV, link-quality
// sidecar, cluster model JSON, evaluation report JSON, heatmap CSV. All
// writers are deterministic byte-for-byte for identical inputs.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vlcsense/cluster.hpp"
#include "vlcsense/features.hpp"
#include "vlcsense/ofdm.hpp"

namespace vlcs {

// 17 significant digits, enough to round-trip any double exactly.
std::string format_sci(double v);

// FNV-1a of a canonical string, hex; used as the config fingerprint in reports.
std::string fnv1a_hex(const std::string& text);

// Header: snapshot_id,event_id,pd_index,subcarrier_index,h_real,h_imag.
void write_dataset_csv(const std::string& path, const std::vector<CsiSnapshot>& dataset);

struct Dataset {
  std::vector<CsiSnapshot> snapshots;
  bool has_event_ids = false;  // false when the event_id column was stripped
};

// Accepts the full schema and the 5-column variant without event_id.
Dataset read_dataset_csv(const std::string& path);

void write_link_quality_json(const std::string& path,
                             const std::vector<LinkObservation>& observations,
                             const OfdmConfig& cfg, std::uint64_t seed,
                             const std::string& version);

void write_model_json(const std::string& path, const ClusterModel& model,
                      const std::string& version);
ClusterModel read_model_json(const std::string& path);

struct ReportContext {
  std::string dataset_path;
  std::string model_path;
  std::string scenario_path;
  std::uint64_t seed = 0;
  std::string version;
};

void write_report_json(const std::string& path, const EvaluationReport& report,
                       const ReportContext& ctx);

// One row `event_x,event_y,accuracy` per event that has a reference point.
void write_heatmap_csv(const std::string& path, const EvaluationReport& report,
                       const std::vector<int>& assignments, const std::vector<int>& truth,
                       const std::vector<Event>& events);

// Debug dump of the single-bounce taps: event_id,pd_index,gain,delay_s.
void write_taps_csv(const std::string& path, const Scenario& scene);

// Debug dump of the feature matrix: snapshot_id,event_id,f_0,...,f_{D-1}.
void write_features_csv(const std::string& path, const FeatureMatrix& features);

}  // namespace vlcs
