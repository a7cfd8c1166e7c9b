#pragma once
// Unsupervised classifier: k-means with k-means++ seeding and restarts,
// silhouette-driven cluster-count selection, and post-hoc evaluation against
// ground truth the classifier never sees (Hungarian label matching, ARI,
// positioning error).

#include <cstdint>
#include <map>
#include <vector>

#include "vlcsense/features.hpp"
#include "vlcsense/scene.hpp"

namespace vlcs {

struct KmeansParams {
  int restarts = 20;
  int max_iter = 300;
  double tol = 1e-6;  // max centroid displacement that counts as converged
  // Debug hook: inertia after every Lloyd update. Requires restarts == 1.
  std::vector<double>* inertia_trace = nullptr;
};

struct KmeansResult {
  std::vector<double> centroids;  // k x d row-major, exact means of assigned rows
  std::vector<int> assignments;   // size n
  double inertia = 0.0;           // sum of squared distances to assigned centroids
};

// Lloyd iterations from k-means++ seeds, best of `restarts` by inertia (ties
// to the lowest restart index). Restart r draws from derive_stream(seed, r),
// so parallel and serial sweeps return the same result. Empty clusters are
// repaired by moving the point farthest from its centroid.
KmeansResult kmeans(const std::vector<double>& x, int n, int d, int k, std::uint64_t seed,
                    const KmeansParams& params = {});

// Condensed n x n Euclidean distance matrix, row-major.
std::vector<double> pairwise_distances(const std::vector<double>& x, int n, int d);

// Mean silhouette score in [-1, 1]; singleton-cluster points score 0.
double silhouette(const std::vector<double>& x, int n, int d,
                  const std::vector<int>& assignments);
double silhouette_from_distances(const std::vector<double>& dist, int n,
                                 const std::vector<int>& assignments);

struct ClusterModel {
  int k = 0;
  int dim = 0;
  std::vector<double> centroids;  // k x dim row-major
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::map<int, double> silhouette_by_k;
};

// Argmax of mean silhouette, ties broken toward smaller k.
int pick_best_k(const std::map<int, double>& silhouette_by_k);

// Runs kmeans for every k in [k_min, k_max] and keeps the silhouette argmax.
ClusterModel select_k(const std::vector<double>& x, int n, int d, int k_min, int k_max,
                      std::uint64_t seed, const KmeansParams& params = {});

// Nearest centroid by Euclidean distance, ties toward the lowest index.
int assign(const ClusterModel& model, const std::vector<double>& point);
std::vector<int> assign_all(const ClusterModel& model, const std::vector<double>& x, int n,
                            int d);

struct MatchResult {
  std::vector<int> matched_event;           // cluster -> event_id, -1 = unknown
  double accuracy = 0.0;                    // optimally matched count / n
  std::vector<std::vector<long>> confusion; // k x E agreement counts
  std::vector<int> event_ids;               // confusion column labels, ascending
};

// Optimal one-to-one cluster/event alignment (Hungarian on the agreement
// matrix); clusters beyond the event count stay unmatched.
MatchResult match_labels(const std::vector<int>& assignments, const std::vector<int>& truth,
                         int k);

// Maximum-total-score assignment rows -> columns; -1 for unassigned rows.
std::vector<int> hungarian_max(const std::vector<std::vector<long>>& score);

// Adjusted Rand Index via the pair-counting contingency formula.
double ari(const std::vector<int>& a, const std::vector<int>& b);

struct EvaluationReport {
  double accuracy = 0.0;
  double ari = 0.0;
  std::vector<std::vector<long>> confusion;
  std::vector<int> event_ids;
  std::vector<int> matched_map;  // cluster -> event_id, -1 = unknown
  std::vector<double> positioning_errors;  // meters, one per scored snapshot
  double median_error = 0.0;
  double mean_error = 0.0;
  long detection_misses = 0;  // snapshots confused with the no-object baseline
};

// Positioning scores from the matched map: predicted position is the
// reference point of the event a snapshot's cluster maps to. Snapshots whose
// truth or prediction is the no-object baseline count as error 0 when matched
// correctly and as detection misses otherwise.
EvaluationReport positioning_report(const std::vector<int>& assignments,
                                    const MatchResult& match, double ari_value,
                                    const std::vector<Event>& events,
                                    const std::vector<int>& truth);

}  // namespace vlcs
