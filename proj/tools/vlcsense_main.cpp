// vlcsense: end-to-end VLC monitoring pipeline.
//
//   vlcsense scene validate <scenario.json>
//   vlcsense simulate --scenario S --out DIR [--seed N --snapshots N --snr-db X ...]
//   vlcsense train    --dataset D --out DIR [--seed N --k-min K --k-max K --restarts R]
//   vlcsense evaluate --dataset D --model M --scenario S --out DIR
//
// Exit codes: 0 ok, 1 domain violation, 2 I/O or parse error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "vlcsense/cluster.hpp"
#include "vlcsense/dataset_io.hpp"
#include "vlcsense/errors.hpp"
#include "vlcsense/features.hpp"
#include "vlcsense/ofdm.hpp"
#include "vlcsense/scene_io.hpp"
#include "vlcsense/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace vlcs;

int cmd_scene_validate(const std::string& path) {
  const Scenario scenario = load_scenario(path);
  const auto violations = validate_scenario(scenario);
  if (violations.empty()) {
    std::cout << "OK\n";
    return 0;
  }
  for (const auto& v : violations) std::cout << v << "\n";
  return 1;
}

struct SimulateArgs {
  std::string scenario_path;
  std::string out_dir = ".";
  std::string dump_taps;
  std::uint64_t seed = 1;
  int snapshots = 200;
  OfdmConfig ofdm;
};

int cmd_simulate(const SimulateArgs& args) {
  const Scenario scenario = load_scenario(args.scenario_path);
  {
    const auto violations = validate_scenario(scenario);
    if (!violations.empty())
      throw invalid_input("scenario invalid: " + violations.front());
    const auto cfg_issues = validate_config(args.ofdm);
    if (!cfg_issues.empty()) throw invalid_input("ofdm config invalid: " + cfg_issues.front());
  }

  fs::create_directories(args.out_dir);
  if (!args.dump_taps.empty()) {
    write_taps_csv(args.dump_taps, scenario);
    std::cout << "wrote " << args.dump_taps << "\n";
  }
  const auto observations = simulate_link(scenario, args.ofdm, args.snapshots, args.seed);

  std::vector<CsiSnapshot> dataset;
  dataset.reserve(observations.size());
  for (const auto& obs : observations) dataset.push_back(obs.csi);

  const std::string dataset_path = (fs::path(args.out_dir) / "dataset.csv").string();
  const std::string sidecar_path = (fs::path(args.out_dir) / "link_quality.json").string();
  write_dataset_csv(dataset_path, dataset);
  write_link_quality_json(sidecar_path, observations, args.ofdm, args.seed, kVersion);

  std::cout << "wrote " << dataset_path << " (" << dataset.size() << " snapshots, "
            << scenario.events.size() << " events)\n";
  std::cout << "wrote " << sidecar_path << "\n";
  return 0;
}

struct TrainArgs {
  std::string dataset_path;
  std::string out_dir = ".";
  std::string dump_features;
  std::uint64_t seed = 1;
  int k_min = 2;
  int k_max = 0;  // 0 = derive from the data
  int restarts = 20;
};

int cmd_train(const TrainArgs& args) {
  const Dataset ds = read_dataset_csv(args.dataset_path);
  if (ds.snapshots.empty()) throw invalid_input("train: dataset has no snapshots");
  const FeatureMatrix features = build_matrix(ds.snapshots);
  if (!args.dump_features.empty()) {
    write_features_csv(args.dump_features, features);
    std::cout << "wrote " << args.dump_features << "\n";
  }

  int k_max = args.k_max;
  if (k_max <= 0) {
    if (!ds.has_event_ids)
      throw invalid_input(
          "train: dataset has no event_id column, pass --k-max explicitly");
    std::set<int> ids(features.event_ids.begin(), features.event_ids.end());
    k_max = std::min(features.rows - 1, 2 * (int)ids.size());
  }
  if (k_max < args.k_min)
    throw invalid_input("train: derived k_max below k_min, dataset too small");

  KmeansParams params;
  params.restarts = args.restarts;
  const ClusterModel model =
      select_k(features.values, features.rows, features.cols, args.k_min, k_max, args.seed,
               params);

  fs::create_directories(args.out_dir);
  const std::string model_path = (fs::path(args.out_dir) / "model.json").string();
  write_model_json(model_path, model, kVersion);

  std::cout << "silhouette by k:\n";
  for (const auto& [k, s] : model.silhouette_by_k)
    std::cout << "  k=" << k << "  " << s << "\n";
  std::cout << "selected k=" << model.k << ", wrote " << model_path << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string dataset_path;
  std::string model_path;
  std::string scenario_path;
  std::string out_dir = ".";
};

int cmd_evaluate(const EvaluateArgs& args) {
  const Dataset ds = read_dataset_csv(args.dataset_path);
  if (!ds.has_event_ids)
    throw invalid_input("evaluate: dataset needs the event_id column for scoring");
  const ClusterModel model = read_model_json(args.model_path);
  const Scenario scenario = load_scenario(args.scenario_path);

  const FeatureMatrix features = build_matrix(ds.snapshots);
  if (features.cols != model.dim)
    throw invalid_input("evaluate: feature dimension does not match the model");

  const std::vector<int> assignments =
      assign_all(model, features.values, features.rows, features.cols);
  const MatchResult match = match_labels(assignments, features.event_ids, model.k);
  const double ari_value = ari(assignments, features.event_ids);
  const EvaluationReport report =
      positioning_report(assignments, match, ari_value, scenario.events, features.event_ids);

  fs::create_directories(args.out_dir);
  ReportContext ctx;
  ctx.dataset_path = args.dataset_path;
  ctx.model_path = args.model_path;
  ctx.scenario_path = args.scenario_path;
  ctx.seed = model.seed;
  ctx.version = kVersion;
  const std::string report_path = (fs::path(args.out_dir) / "report.json").string();
  const std::string heatmap_path = (fs::path(args.out_dir) / "heatmap.csv").string();
  write_report_json(report_path, report, ctx);
  write_heatmap_csv(heatmap_path, report, assignments, features.event_ids, scenario.events);

  std::cout << "accuracy " << report.accuracy << ", ari " << report.ari << ", median error "
            << report.median_error << " m, mean error " << report.mean_error << " m\n";
  std::cout << "wrote " << report_path << " and " << heatmap_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLC-based indoor monitoring simulator"};
  app.set_version_flag("--version", std::string(vlcs::kVersion));
  app.require_subcommand(1);

  // scene validate
  auto* scene_cmd = app.add_subcommand("scene", "Scenario file utilities");
  scene_cmd->require_subcommand(1);
  std::string scene_path;
  auto* validate_cmd = scene_cmd->add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("file", scene_path, "Scenario JSON file")->required();

  // simulate
  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a CSI dataset");
  sim_cmd->add_option("--scenario", sim.scenario_path, "Scenario JSON file")->required();
  sim_cmd->add_option("--out", sim.out_dir, "Output directory")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Run seed")->capture_default_str();
  sim_cmd->add_option("--snapshots", sim.snapshots, "Snapshots per event")
      ->capture_default_str();
  sim_cmd->add_option("--snr-db", sim.ofdm.snr_db, "Per-subcarrier SNR in dB")
      ->capture_default_str();
  sim_cmd->add_flag("--noiseless", sim.ofdm.noiseless, "Disable receiver noise");
  sim_cmd->add_option("--fft-size", sim.ofdm.fft_size, "FFT size N")->capture_default_str();
  sim_cmd->add_option("--subcarriers", sim.ofdm.active_subcarriers, "Active subcarriers K")
      ->capture_default_str();
  sim_cmd->add_option("--cp-len", sim.ofdm.cp_len, "Cyclic prefix length")
      ->capture_default_str();
  sim_cmd->add_option("--qam", sim.ofdm.qam_order, "QAM order (4, 16, 64)")
      ->capture_default_str();
  sim_cmd->add_option("--pilots", sim.ofdm.n_pilot_symbols, "Pilot symbols per frame")
      ->capture_default_str();
  sim_cmd->add_option("--data-symbols", sim.ofdm.n_data_symbols, "Data symbols per frame")
      ->capture_default_str();
  sim_cmd->add_option("--spacing", sim.ofdm.subcarrier_spacing, "Subcarrier spacing in Hz")
      ->capture_default_str();
  sim_cmd->add_option("--dc-bias", sim.ofdm.dc_bias, "DC bias in signal sigmas")
      ->capture_default_str();
  sim_cmd->add_option("--dump-taps", sim.dump_taps,
                      "Also write the single-bounce taps to this CSV");

  // train
  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit the unsupervised classifier");
  train_cmd->add_option("--dataset", train.dataset_path, "CSI dataset CSV")->required();
  train_cmd->add_option("--out", train.out_dir, "Output directory")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Clustering seed")->capture_default_str();
  train_cmd->add_option("--k-min", train.k_min, "Smallest cluster count")
      ->capture_default_str();
  train_cmd->add_option("--k-max", train.k_max,
                        "Largest cluster count (default: min(n-1, 2E) from the data)");
  train_cmd->add_option("--restarts", train.restarts, "k-means restarts")
      ->capture_default_str();
  train_cmd->add_option("--dump-features", train.dump_features,
                        "Also write the feature matrix to this CSV");

  // evaluate
  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model against ground truth");
  eval_cmd->add_option("--dataset", eval.dataset_path, "CSI dataset CSV")->required();
  eval_cmd->add_option("--model", eval.model_path, "Model JSON")->required();
  eval_cmd->add_option("--scenario", eval.scenario_path, "Scenario JSON file")->required();
  eval_cmd->add_option("--out", eval.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate_cmd->parsed()) return cmd_scene_validate(scene_path);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (train_cmd->parsed()) return cmd_train(train);
    if (eval_cmd->parsed()) return cmd_evaluate(eval);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
