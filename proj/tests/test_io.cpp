#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "vlcsense/dataset_io.hpp"
#include "vlcsense/rng.hpp"

using namespace vlcs;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("vlcsense_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<CsiSnapshot> sample_dataset(int snapshots, int pds, int k) {
  Rng rng(7777);
  std::vector<CsiSnapshot> out;
  for (int s = 0; s < snapshots; ++s) {
    CsiSnapshot snap;
    snap.snapshot_id = s;
    snap.event_id = s % 3;
    snap.h_est.assign(pds, std::vector<cplx>(k));
    for (auto& row : snap.h_est) {
      for (auto& v : row)
        v = cplx(rng.next_double() * 2e-5, (rng.next_double() - 0.5) * 1e-6);
    }
    out.push_back(std::move(snap));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("format_sci keeps at least 9 significant digits") {
  const std::string s = format_sci(1.2345678901234e-5);
  CHECK(s.find('e') != std::string::npos);
  CHECK(s.substr(0, 12) == "1.2345678901");
}

TEST_CASE("dataset CSV round trip is exact") {
  TempDir tmp;
  const auto dataset = sample_dataset(5, 2, 8);
  const std::string path = (tmp.path / "dataset.csv").string();
  write_dataset_csv(path, dataset);

  const Dataset back = read_dataset_csv(path);
  CHECK(back.has_event_ids);
  REQUIRE(back.snapshots.size() == dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    CHECK(back.snapshots[i].snapshot_id == dataset[i].snapshot_id);
    CHECK(back.snapshots[i].event_id == dataset[i].event_id);
    CHECK(back.snapshots[i].h_est == dataset[i].h_est);
  }

  const std::string first_line = slurp(path).substr(0, slurp(path).find('\n'));
  CHECK(first_line == "snapshot_id,event_id,pd_index,subcarrier_index,h_real,h_imag");
}

TEST_CASE("dataset CSV without the event_id column still loads") {
  TempDir tmp;
  const auto dataset = sample_dataset(3, 1, 4);
  const std::string path = (tmp.path / "dataset.csv").string();
  write_dataset_csv(path, dataset);

  // strip the event_id column
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  const std::string stripped = (tmp.path / "stripped.csv").string();
  std::ofstream out(stripped);
  for (const auto& l : lines) {
    const auto first = l.find(',');
    const auto second = l.find(',', first + 1);
    out << l.substr(0, first) << l.substr(second) << "\n";
  }
  out.close();

  const Dataset back = read_dataset_csv(stripped);
  CHECK_FALSE(back.has_event_ids);
  REQUIRE(back.snapshots.size() == dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    CHECK(back.snapshots[i].event_id == -1);
    CHECK(back.snapshots[i].h_est == dataset[i].h_est);
  }
}

TEST_CASE("dataset CSV reader reports the offending line") {
  TempDir tmp;
  const std::string path = (tmp.path / "broken.csv").string();
  std::ofstream out(path);
  out << "snapshot_id,event_id,pd_index,subcarrier_index,h_real,h_imag\n";
  out << "0,0,0,0,1.0e-5,2.0e-6\n";
  out << "0,0,0,oops\n";
  out.close();
  CHECK_THROWS_WITH_AS(read_dataset_csv(path), doctest::Contains("line 3"), io_error);
}

TEST_CASE("missing dataset file raises io_error") {
  CHECK_THROWS_AS(read_dataset_csv("/nonexistent/nowhere.csv"), io_error);
}

TEST_CASE("model JSON round trip") {
  TempDir tmp;
  ClusterModel model;
  model.k = 3;
  model.dim = 4;
  model.centroids = {0.1, 0.2, 0.3, 0.4, -1.5, 2.25, 0.0, 1.0, 9.0, 8.0, 7.0, 6.0};
  model.inertia = 12.5;
  model.seed = 424242;
  model.silhouette_by_k = {{2, 0.41}, {3, 0.77}, {4, 0.52}};

  const std::string path = (tmp.path / "model.json").string();
  write_model_json(path, model, "test-version");
  const ClusterModel back = read_model_json(path);
  CHECK(back.k == model.k);
  CHECK(back.dim == model.dim);
  CHECK(back.centroids == model.centroids);
  CHECK(back.inertia == model.inertia);
  CHECK(back.seed == model.seed);
  CHECK(back.silhouette_by_k == model.silhouette_by_k);
}

TEST_CASE("writers are byte-deterministic") {
  TempDir tmp;
  const auto dataset = sample_dataset(4, 2, 6);
  const std::string a = (tmp.path / "a.csv").string();
  const std::string b = (tmp.path / "b.csv").string();
  write_dataset_csv(a, dataset);
  write_dataset_csv(b, dataset);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("fnv1a_hex is stable") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
  CHECK(fnv1a_hex("config") == fnv1a_hex("config"));
}
