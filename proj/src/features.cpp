#include "vlcsense/features.hpp"

#include <cmath>

#include "vlcsense/errors.hpp"

namespace vlcs {

FeatureVector build_feature(const CsiSnapshot& snapshot) {
  FeatureVector fv;
  fv.snapshot_id = snapshot.snapshot_id;
  fv.event_id = snapshot.event_id;
  for (const auto& pd_row : snapshot.h_est) {
    for (const auto& h : pd_row) {
      const double mag = std::abs(h);
      if (!(mag > 0.0)) throw invalid_input("build_feature: zero-magnitude CSI entry");
      fv.values.push_back(20.0 * std::log10(mag));
    }
  }
  if (fv.values.empty()) throw invalid_input("build_feature: empty snapshot");

  double lo = fv.values[0], hi = fv.values[0], sum = 0.0;
  for (double v : fv.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  if (hi == lo)
    throw degenerate_feature("build_feature: all CSI magnitudes equal, feature is zero");

  const double mean = sum / (double)fv.values.size();
  double norm2 = 0.0;
  for (double& v : fv.values) {
    v -= mean;
    norm2 += v * v;
  }
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (double& v : fv.values) v *= inv_norm;
  return fv;
}

FeatureMatrix build_matrix(const std::vector<CsiSnapshot>& dataset) {
  FeatureMatrix m;
  if (dataset.empty()) return m;
  const int pds = (int)dataset[0].h_est.size();
  const int k = pds > 0 ? (int)dataset[0].h_est[0].size() : 0;
  for (const auto& s : dataset) {
    if ((int)s.h_est.size() != pds)
      throw invalid_input("build_matrix: heterogeneous PD count across snapshots");
    for (const auto& row : s.h_est) {
      if ((int)row.size() != k)
        throw invalid_input("build_matrix: heterogeneous subcarrier count across snapshots");
    }
  }
  m.rows = (int)dataset.size();
  m.cols = pds * k;
  m.values.resize((std::size_t)m.rows * m.cols);
  m.snapshot_ids.resize(m.rows);
  m.event_ids.resize(m.rows);

  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows; ++i) {
    try {
      const FeatureVector fv = build_feature(dataset[i]);
      std::copy(fv.values.begin(), fv.values.end(),
                m.values.begin() + (std::size_t)i * m.cols);
      m.snapshot_ids[i] = fv.snapshot_id;
      m.event_ids[i] = fv.event_id;
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return m;
}

}  // namespace vlcs
