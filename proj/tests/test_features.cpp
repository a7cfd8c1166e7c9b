#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vlcsense/features.hpp"
#include "vlcsense/rng.hpp"

using namespace vlcs;

namespace {

CsiSnapshot snapshot_from(const std::vector<std::vector<cplx>>& h, int sid = 0, int eid = 0) {
  CsiSnapshot s;
  s.snapshot_id = sid;
  s.event_id = eid;
  s.h_est = h;
  return s;
}

CsiSnapshot random_snapshot(Rng& rng, int pds, int k, int sid, int eid) {
  std::vector<std::vector<cplx>> h(pds, std::vector<cplx>(k));
  for (auto& row : h) {
    for (auto& v : row)
      v = cplx(0.1 + rng.next_double(), rng.next_double() - 0.5);
  }
  return snapshot_from(h, sid, eid);
}

}  // namespace

TEST_CASE("build_feature: hand-computed two-subcarrier case") {
  // |h| = (1, 10) -> raw (0, 20) dB -> centered (-10, 10) -> normalized
  const auto fv = build_feature(snapshot_from({{cplx(1, 0), cplx(10, 0)}}));
  REQUIRE(fv.values.size() == 2);
  CHECK(fv.values[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fv.values[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("build_feature: zero mean and unit norm") {
  Rng rng(71);
  for (int it = 0; it < 50; ++it) {
    const auto fv = build_feature(random_snapshot(rng, 2, 24, it, 0));
    double sum = 0.0, norm2 = 0.0;
    for (double v : fv.values) {
      sum += v;
      norm2 += v * v;
    }
    CHECK(std::fabs(sum / (double)fv.values.size()) < 1e-9);
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-9);
  }
}

TEST_CASE("build_feature: global gain invariance") {
  Rng rng(72);
  for (double c : {3.0, 0.01, 250.0}) {
    const auto snap = random_snapshot(rng, 2, 16, 0, 0);
    CsiSnapshot scaled = snap;
    for (auto& row : scaled.h_est) {
      for (auto& v : row) v *= c;
    }
    const auto a = build_feature(snap);
    const auto b = build_feature(scaled);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(std::fabs(a.values[i] - b.values[i]) < 1e-9);
  }
}

TEST_CASE("build_feature: phase invariance") {
  Rng rng(73);
  const auto snap = random_snapshot(rng, 1, 12, 0, 0);
  CsiSnapshot rotated = snap;
  for (std::size_t k = 0; k < rotated.h_est[0].size(); ++k) {
    const double theta = 2.0 * std::numbers::pi * rng.next_double();
    rotated.h_est[0][k] *= std::exp(cplx(0.0, theta));
  }
  const auto a = build_feature(snap);
  const auto b = build_feature(rotated);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(std::fabs(a.values[i] - b.values[i]) < 1e-9);
}

TEST_CASE("build_feature: zero CSI entry is invalid input") {
  CHECK_THROWS_AS(build_feature(snapshot_from({{cplx(1, 0), cplx(0, 0)}})), invalid_input);
}

TEST_CASE("build_feature: all-equal magnitudes are degenerate") {
  CHECK_THROWS_AS(build_feature(snapshot_from({{cplx(2, 0), cplx(2, 0), cplx(0, 2)}})),
                  degenerate_feature);
}

TEST_CASE("build_matrix: shape, ledger and row permutation") {
  Rng rng(74);
  std::vector<CsiSnapshot> dataset;
  for (int i = 0; i < 7; ++i) dataset.push_back(random_snapshot(rng, 2, 8, 10 + i, i % 3));

  const FeatureMatrix m = build_matrix(dataset);
  CHECK(m.rows == 7);
  CHECK(m.cols == 16);
  for (int i = 0; i < 7; ++i) {
    CHECK(m.snapshot_ids[i] == 10 + i);
    CHECK(m.event_ids[i] == i % 3);
  }

  std::vector<CsiSnapshot> swapped = dataset;
  std::swap(swapped[1], swapped[5]);
  const FeatureMatrix p = build_matrix(swapped);
  for (int c = 0; c < m.cols; ++c) {
    CHECK(p.row(1)[c] == m.row(5)[c]);
    CHECK(p.row(5)[c] == m.row(1)[c]);
    CHECK(p.row(0)[c] == m.row(0)[c]);
  }
}

TEST_CASE("build_matrix rejects heterogeneous dimensions") {
  Rng rng(75);
  std::vector<CsiSnapshot> dataset{random_snapshot(rng, 2, 8, 0, 0),
                                   random_snapshot(rng, 1, 8, 1, 0)};
  CHECK_THROWS_AS(build_matrix(dataset), invalid_input);
}
