#pragma once
// CSI snapshots to normalized real feature vectors: log magnitude per active
// subcarrier and PD, mean-removed, unit Euclidean norm. Log plus centering
// makes the feature invariant to any global gain and to per-entry phase.

#include <vector>

#include "vlcsense/ofdm.hpp"

namespace vlcs {

struct FeatureVector {
  std::vector<double> values;  // length P * K, zero mean, unit norm
  int snapshot_id = 0;
  int event_id = 0;  // carried, never read by clustering
};

FeatureVector build_feature(const CsiSnapshot& snapshot);

struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
  std::vector<int> snapshot_ids;
  std::vector<int> event_ids;

  const double* row(int i) const { return values.data() + (std::size_t)i * cols; }
};

// Row i = build_feature(dataset[i]); parallel across snapshots.
FeatureMatrix build_matrix(const std::vector<CsiSnapshot>& dataset);

}  // namespace vlcs
