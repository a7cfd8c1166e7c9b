#include "vlcsense/dataset_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "vlcsense/errors.hpp"

namespace vlcs {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

ordered_json config_json(const OfdmConfig& cfg) {
  return ordered_json{{"fft_size", cfg.fft_size},
                      {"active_subcarriers", cfg.active_subcarriers},
                      {"cp_len", cfg.cp_len},
                      {"qam_order", cfg.qam_order},
                      {"n_pilot_symbols", cfg.n_pilot_symbols},
                      {"n_data_symbols", cfg.n_data_symbols},
                      {"subcarrier_spacing", cfg.subcarrier_spacing},
                      {"dc_bias", cfg.dc_bias},
                      {"snr_db", cfg.snr_db},
                      {"noiseless", cfg.noiseless}};
}

}  // namespace

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void write_dataset_csv(const std::string& path, const std::vector<CsiSnapshot>& dataset) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write dataset file: " + path);
  out << "snapshot_id,event_id,pd_index,subcarrier_index,h_real,h_imag\n";
  for (const auto& snap : dataset) {
    for (std::size_t p = 0; p < snap.h_est.size(); ++p) {
      for (std::size_t k = 0; k < snap.h_est[p].size(); ++k) {
        const cplx h = snap.h_est[p][k];
        out << snap.snapshot_id << ',' << snap.event_id << ',' << p << ',' << k << ','
            << format_sci(h.real()) << ',' << format_sci(h.imag()) << '\n';
      }
    }
  }
  if (!out) throw io_error("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open dataset file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw io_error("dataset file empty: " + path);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const std::vector<std::string> cols = split_line(header, ',');

  std::map<std::string, int> col_of;
  for (std::size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = (int)i;
  for (const char* need : {"snapshot_id", "pd_index", "subcarrier_index", "h_real", "h_imag"}) {
    if (!col_of.count(need))
      throw io_error("dataset header missing column '" + std::string(need) + "': " + path);
  }
  const bool has_event = col_of.count("event_id") > 0;

  Dataset ds;
  ds.has_event_ids = has_event;
  std::map<int, std::size_t> index_of;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> parts = split_line(line, ',');
    if (parts.size() != cols.size()) {
      std::ostringstream os;
      os << "dataset line " << line_no << ": expected " << cols.size() << " fields, got "
         << parts.size();
      throw io_error(os.str());
    }
    try {
      const int sid = std::stoi(parts[col_of["snapshot_id"]]);
      const int eid = has_event ? std::stoi(parts[col_of["event_id"]]) : -1;
      const int pd = std::stoi(parts[col_of["pd_index"]]);
      const int k = std::stoi(parts[col_of["subcarrier_index"]]);
      const double re = std::stod(parts[col_of["h_real"]]);
      const double im = std::stod(parts[col_of["h_imag"]]);
      if (pd < 0 || k < 0) throw std::invalid_argument("negative index");

      auto it = index_of.find(sid);
      if (it == index_of.end()) {
        it = index_of.emplace(sid, ds.snapshots.size()).first;
        CsiSnapshot snap;
        snap.snapshot_id = sid;
        snap.event_id = eid;
        ds.snapshots.push_back(std::move(snap));
      }
      CsiSnapshot& snap = ds.snapshots[it->second];
      if ((std::size_t)pd >= snap.h_est.size()) snap.h_est.resize(pd + 1);
      if ((std::size_t)k >= snap.h_est[pd].size()) snap.h_est[pd].resize(k + 1);
      snap.h_est[pd][k] = cplx(re, im);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "dataset line " << line_no << ": " << e.what();
      throw io_error(os.str());
    }
  }
  return ds;
}

void write_link_quality_json(const std::string& path,
                             const std::vector<LinkObservation>& observations,
                             const OfdmConfig& cfg, std::uint64_t seed,
                             const std::string& version) {
  // event order = order of first appearance, i.e. scenario order
  std::vector<int> event_order;
  std::map<int, std::pair<double, long>> stats;  // event -> (ber sum, count)
  long total_bits = 0;
  double total_ber = 0.0;
  for (const auto& obs : observations) {
    if (!stats.count(obs.csi.event_id)) {
      event_order.push_back(obs.csi.event_id);
      stats[obs.csi.event_id] = {0.0, 0};
    }
    auto& [sum, count] = stats[obs.csi.event_id];
    sum += obs.data_ber;
    count += 1;
    total_bits += obs.n_bits;
    total_ber += obs.data_ber;
  }

  ordered_json per_event = ordered_json::array();
  for (int id : event_order) {
    const auto& [sum, count] = stats[id];
    per_event.push_back({{"event_id", id},
                         {"snapshots", count},
                         {"mean_ber", count > 0 ? sum / (double)count : 0.0}});
  }

  ordered_json j;
  j["per_event"] = std::move(per_event);
  j["overall_mean_ber"] =
      observations.empty() ? 0.0 : total_ber / (double)observations.size();
  j["total_data_bits"] = total_bits;
  j["seed"] = seed;
  j["ofdm_config"] = config_json(cfg);
  j["config_hash"] = fnv1a_hex(config_json(cfg).dump());
  j["version"] = version;

  std::ofstream out(path);
  if (!out) throw io_error("cannot write link-quality file: " + path);
  out << j.dump(2) << "\n";
}

void write_model_json(const std::string& path, const ClusterModel& model,
                      const std::string& version) {
  ordered_json j;
  j["k"] = model.k;
  j["dim"] = model.dim;
  ordered_json centroids = ordered_json::array();
  for (int c = 0; c < model.k; ++c) {
    ordered_json row = ordered_json::array();
    for (int i = 0; i < model.dim; ++i)
      row.push_back(model.centroids[(std::size_t)c * model.dim + i]);
    centroids.push_back(std::move(row));
  }
  j["centroids"] = std::move(centroids);
  j["inertia"] = model.inertia;
  j["seed"] = model.seed;
  ordered_json sil;
  for (const auto& [k, s] : model.silhouette_by_k) sil[std::to_string(k)] = s;
  j["silhouette_by_k"] = std::move(sil);
  j["version"] = version;

  std::ofstream out(path);
  if (!out) throw io_error("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

ClusterModel read_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open model file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(std::string("model parse error: ") + e.what());
  }
  try {
    ClusterModel model;
    model.k = j.at("k").get<int>();
    model.dim = j.at("dim").get<int>();
    model.inertia = j.at("inertia").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    const auto& centroids = j.at("centroids");
    if ((int)centroids.size() != model.k)
      throw invalid_input("model: centroid row count != k");
    for (const auto& row : centroids) {
      if ((int)row.size() != model.dim)
        throw invalid_input("model: centroid width != dim");
      for (const auto& v : row) model.centroids.push_back(v.get<double>());
    }
    for (const auto& [key, val] : j.at("silhouette_by_k").items())
      model.silhouette_by_k[std::stoi(key)] = val.get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("model: malformed field: ") + e.what());
  }
}

void write_report_json(const std::string& path, const EvaluationReport& report,
                       const ReportContext& ctx) {
  ordered_json j;
  j["accuracy"] = report.accuracy;
  j["ari"] = report.ari;
  j["median_error_m"] = report.median_error;
  j["mean_error_m"] = report.mean_error;
  j["detection_misses"] = report.detection_misses;
  j["event_ids"] = report.event_ids;
  ordered_json matched = ordered_json::array();
  for (int id : report.matched_map) {
    if (id < 0)
      matched.push_back(nullptr);
    else
      matched.push_back(id);
  }
  j["matched_map"] = std::move(matched);
  j["confusion"] = report.confusion;
  j["positioning_errors_m"] = report.positioning_errors;

  ordered_json cfg{{"dataset", ctx.dataset_path},
                   {"model", ctx.model_path},
                   {"scenario", ctx.scenario_path},
                   {"seed", ctx.seed}};
  j["config"] = cfg;
  j["config_hash"] = fnv1a_hex(cfg.dump());
  j["version"] = ctx.version;

  std::ofstream out(path);
  if (!out) throw io_error("cannot write report file: " + path);
  out << j.dump(2) << "\n";
}

void write_heatmap_csv(const std::string& path, const EvaluationReport& report,
                       const std::vector<int>& assignments, const std::vector<int>& truth,
                       const std::vector<Event>& events) {
  if (assignments.size() != truth.size())
    throw invalid_input("write_heatmap_csv: length mismatch");

  std::map<int, long> total, hit;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    total[truth[i]] += 1;
    const int mapped = report.matched_map[assignments[i]];
    if (mapped == truth[i]) hit[truth[i]] += 1;
  }

  std::ofstream out(path);
  if (!out) throw io_error("cannot write heatmap file: " + path);
  out << "event_x,event_y,accuracy\n";
  for (const auto& ev : events) {
    if (!ev.reference_point) continue;
    const long n = total.count(ev.event_id) ? total[ev.event_id] : 0;
    const double acc = n > 0 ? (double)hit[ev.event_id] / (double)n : 0.0;
    out << format_sci(ev.reference_point->x) << ',' << format_sci(ev.reference_point->y) << ','
        << format_sci(acc) << '\n';
  }
}

void write_taps_csv(const std::string& path, const Scenario& scene) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write taps file: " + path);
  out << "event_id,pd_index,gain,delay_s\n";
  for (const auto& ev : scene.events) {
    for (std::size_t p = 0; p < scene.pds.size(); ++p) {
      for (const Tap& tap : diffuse_gains(scene, ev, (int)p)) {
        out << ev.event_id << ',' << p << ',' << format_sci(tap.gain) << ','
            << format_sci(tap.delay) << '\n';
      }
    }
  }
}

void write_features_csv(const std::string& path, const FeatureMatrix& features) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write features file: " + path);
  out << "snapshot_id,event_id";
  for (int c = 0; c < features.cols; ++c) out << ",f_" << c;
  out << "\n";
  for (int i = 0; i < features.rows; ++i) {
    out << features.snapshot_ids[i] << ',' << features.event_ids[i];
    for (int c = 0; c < features.cols; ++c) out << ',' << format_sci(features.row(i)[c]);
    out << "\n";
  }
}

}  // namespace vlcs
