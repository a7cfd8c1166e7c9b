#pragma once
// Plain serial implementations of the parallel kernels, written directly from
// the definitions. Tests compare them against the OpenMP versions; the bench
// tool uses them as the single-thread baseline.

#include <vector>

#include "vlcsense/channel.hpp"
#include "vlcsense/scene.hpp"

namespace vlcs::reference {

std::vector<Tap> diffuse_taps_dense(const Scenario& scene, const Event& event, int pd_index);

std::vector<double> pairwise_distances(const std::vector<double>& x, int n, int d);

double silhouette(const std::vector<double>& x, int n, int d,
                  const std::vector<int>& assignments);

}  // namespace vlcs::reference
