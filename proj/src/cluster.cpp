#include "vlcsense/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "vlcsense/errors.hpp"
#include "vlcsense/rng.hpp"

namespace vlcs {

namespace {

double sq_dist(const double* a, const double* b, int d) {
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

// k-means++ seeding: first center uniform, then proportional to the squared
// distance to the nearest chosen center. When every remaining point coincides
// with a center, fall back to the lowest-index unused point.
std::vector<double> seed_centroids(const std::vector<double>& x, int n, int d, int k,
                                   Rng& rng) {
  std::vector<double> centroids((std::size_t)k * d);
  std::vector<double> d2((std::size_t)n, std::numeric_limits<double>::infinity());
  std::vector<char> used((std::size_t)n, 0);

  int first = (int)rng.next_below((std::uint64_t)n);
  std::copy(x.begin() + (std::size_t)first * d, x.begin() + (std::size_t)(first + 1) * d,
            centroids.begin());
  used[first] = 1;

  for (int c = 1; c < k; ++c) {
    const double* prev = centroids.data() + (std::size_t)(c - 1) * d;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(x.data() + (std::size_t)i * d, prev, d));
      total += d2[i];
    }
    int pick = -1;
    if (total > 0.0) {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;  // guard against accumulated rounding
    } else {
      for (int i = 0; i < n; ++i) {
        if (!used[i]) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = 0;
    }
    used[pick] = 1;
    std::copy(x.begin() + (std::size_t)pick * d, x.begin() + (std::size_t)(pick + 1) * d,
              centroids.begin() + (std::size_t)c * d);
  }
  return centroids;
}

void assign_points(const std::vector<double>& x, int n, int d,
                   const std::vector<double>& centroids, int k, std::vector<int>& out) {
  for (int i = 0; i < n; ++i) {
    const double* row = x.data() + (std::size_t)i * d;
    int best = 0;
    double best_d = sq_dist(row, centroids.data(), d);
    for (int c = 1; c < k; ++c) {
      const double dist = sq_dist(row, centroids.data() + (std::size_t)c * d, d);
      if (dist < best_d) {
        best_d = dist;
        best = c;
      }
    }
    out[i] = best;
  }
}

// Move the farthest point of a multi-member cluster into each empty cluster.
void repair_empty(const std::vector<double>& x, int n, int d,
                  const std::vector<double>& centroids, int k, std::vector<int>& assignments,
                  std::vector<int>& counts) {
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    int worst = -1;
    double worst_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (counts[assignments[i]] < 2) continue;
      const double dist = sq_dist(x.data() + (std::size_t)i * d,
                                  centroids.data() + (std::size_t)assignments[i] * d, d);
      if (dist > worst_d) {
        worst_d = dist;
        worst = i;
      }
    }
    if (worst < 0) continue;  // cannot happen for n >= k
    counts[assignments[worst]] -= 1;
    assignments[worst] = c;
    counts[c] = 1;
  }
}

void update_centroids(const std::vector<double>& x, int n, int d,
                      const std::vector<int>& assignments, int k,
                      std::vector<double>& centroids, std::vector<int>& counts) {
  counts.assign(k, 0);
  for (int i = 0; i < n; ++i) counts[assignments[i]] += 1;
  std::fill(centroids.begin(), centroids.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x.data() + (std::size_t)i * d;
    double* c = centroids.data() + (std::size_t)assignments[i] * d;
    for (int j = 0; j < d; ++j) c[j] += row[j];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const double inv = 1.0 / counts[c];
    double* row = centroids.data() + (std::size_t)c * d;
    for (int j = 0; j < d; ++j) row[j] *= inv;
  }
}

KmeansResult lloyd_from_seed(const std::vector<double>& x, int n, int d, int k,
                             std::uint64_t restart_seed, const KmeansParams& params) {
  Rng rng(restart_seed);
  std::vector<double> centroids = seed_centroids(x, n, d, k, rng);
  std::vector<int> assignments;
  std::vector<int> next((std::size_t)n, -1);
  std::vector<int> counts((std::size_t)k, 0);
  std::vector<double> prev(centroids.size());

  for (int iter = 0; iter < params.max_iter; ++iter) {
    assign_points(x, n, d, centroids, k, next);
    counts.assign(k, 0);
    for (int i = 0; i < n; ++i) counts[next[i]] += 1;
    repair_empty(x, n, d, centroids, k, next, counts);
    const bool stable = next == assignments;  // fixed point: assign(means(asg)) == asg
    assignments = next;

    prev = centroids;
    update_centroids(x, n, d, assignments, k, centroids, counts);
    if (params.inertia_trace) {
      double inertia = 0.0;
      for (int i = 0; i < n; ++i)
        inertia += sq_dist(x.data() + (std::size_t)i * d,
                           centroids.data() + (std::size_t)assignments[i] * d, d);
      params.inertia_trace->push_back(inertia);
    }
    if (stable) break;

    double move2 = 0.0;
    for (int c = 0; c < k; ++c)
      move2 = std::max(move2, sq_dist(prev.data() + (std::size_t)c * d,
                                      centroids.data() + (std::size_t)c * d, d));
    if (std::sqrt(move2) < params.tol) break;
  }

  KmeansResult res;
  res.centroids = std::move(centroids);
  res.assignments = std::move(assignments);
  res.inertia = 0.0;
  for (int i = 0; i < n; ++i)
    res.inertia += sq_dist(x.data() + (std::size_t)i * d,
                           res.centroids.data() + (std::size_t)res.assignments[i] * d, d);
  return res;
}

}  // namespace

KmeansResult kmeans(const std::vector<double>& x, int n, int d, int k, std::uint64_t seed,
                    const KmeansParams& params) {
  if (n < 1 || d < 1 || (std::size_t)n * d != x.size())
    throw invalid_input("kmeans: matrix dimensions inconsistent");
  if (k < 2) throw invalid_input("kmeans: k must be >= 2");
  if (n < k) throw invalid_input("kmeans: fewer points than clusters");
  for (double v : x) {
    if (!std::isfinite(v)) throw invalid_input("kmeans: non-finite input");
  }
  const int restarts = std::max(1, params.restarts);
  if (params.inertia_trace && restarts != 1)
    throw invalid_input("kmeans: inertia_trace requires restarts == 1");

  std::vector<KmeansResult> results((std::size_t)restarts);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    try {
      results[r] = lloyd_from_seed(x, n, d, k, derive_stream(seed, (std::uint64_t)r), params);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (results[r].inertia < results[best].inertia) best = r;
  }
  return std::move(results[best]);
}

std::vector<double> pairwise_distances(const std::vector<double>& x, int n, int d) {
  std::vector<double> dist((std::size_t)n * n, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dist[(std::size_t)i * n + j] =
          std::sqrt(sq_dist(x.data() + (std::size_t)i * d, x.data() + (std::size_t)j * d, d));
    }
  }
  return dist;
}

double silhouette_from_distances(const std::vector<double>& dist, int n,
                                 const std::vector<int>& assignments) {
  if ((int)assignments.size() != n || (std::size_t)n * n != dist.size())
    throw invalid_input("silhouette: dimensions inconsistent");
  int k = 0;
  for (int a : assignments) {
    if (a < 0) throw invalid_input("silhouette: negative cluster label");
    k = std::max(k, a + 1);
  }
  std::vector<long> counts((std::size_t)k, 0);
  for (int a : assignments) counts[a] += 1;
  int present = 0;
  for (long c : counts) present += c > 0 ? 1 : 0;
  if (present < 2) throw invalid_input("silhouette: need at least 2 nonempty clusters");

  std::vector<double> scores((std::size_t)n, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int own = assignments[i];
    if (counts[own] < 2) {
      scores[i] = 0.0;  // singleton
      continue;
    }
    std::vector<double> sum((std::size_t)k, 0.0);
    const double* row = dist.data() + (std::size_t)i * n;
    for (int j = 0; j < n; ++j) {
      if (j != i) sum[assignments[j]] += row[j];
    }
    const double a = sum[own] / (double)(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || counts[c] == 0) continue;
      b = std::min(b, sum[c] / (double)counts[c]);
    }
    const double denom = std::max(a, b);
    scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }

  double mean = 0.0;
  for (double s : scores) mean += s;
  return mean / (double)n;
}

double silhouette(const std::vector<double>& x, int n, int d,
                  const std::vector<int>& assignments) {
  return silhouette_from_distances(pairwise_distances(x, n, d), n, assignments);
}

int pick_best_k(const std::map<int, double>& silhouette_by_k) {
  if (silhouette_by_k.empty()) throw invalid_input("pick_best_k: empty map");
  int best_k = silhouette_by_k.begin()->first;
  double best_s = silhouette_by_k.begin()->second;
  for (const auto& [k, s] : silhouette_by_k) {
    if (s > best_s) {  // strict: ties keep the smaller k
      best_s = s;
      best_k = k;
    }
  }
  return best_k;
}

ClusterModel select_k(const std::vector<double>& x, int n, int d, int k_min, int k_max,
                      std::uint64_t seed, const KmeansParams& params) {
  if (k_min < 2) throw invalid_input("select_k: k_min must be >= 2");
  if (k_max < k_min) throw invalid_input("select_k: k_max below k_min");
  if (k_max > n) throw invalid_input("select_k: k_max exceeds the number of points");

  const std::vector<double> dist = pairwise_distances(x, n, d);

  std::map<int, double> sil_by_k;
  std::map<int, KmeansResult> result_by_k;
  for (int k = k_min; k <= k_max; ++k) {
    KmeansResult res = kmeans(x, n, d, k, seed, params);
    sil_by_k[k] = silhouette_from_distances(dist, n, res.assignments);
    result_by_k[k] = std::move(res);
  }

  const int chosen = pick_best_k(sil_by_k);
  ClusterModel model;
  model.k = chosen;
  model.dim = d;
  model.centroids = std::move(result_by_k[chosen].centroids);
  model.inertia = result_by_k[chosen].inertia;
  model.seed = seed;
  model.silhouette_by_k = std::move(sil_by_k);
  return model;
}

int assign(const ClusterModel& model, const std::vector<double>& point) {
  if ((int)point.size() != model.dim)
    throw invalid_input("assign: feature dimension does not match the model");
  int best = 0;
  double best_d = sq_dist(point.data(), model.centroids.data(), model.dim);
  for (int c = 1; c < model.k; ++c) {
    const double dist =
        sq_dist(point.data(), model.centroids.data() + (std::size_t)c * model.dim, model.dim);
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  return best;
}

std::vector<int> assign_all(const ClusterModel& model, const std::vector<double>& x, int n,
                            int d) {
  if (d != model.dim) throw invalid_input("assign_all: feature dimension mismatch");
  if ((std::size_t)n * d != x.size()) throw invalid_input("assign_all: dimensions inconsistent");
  std::vector<int> out((std::size_t)n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(x.begin() + (std::size_t)i * d, x.begin() + (std::size_t)(i + 1) * d);
    out[i] = assign(model, row);
  }
  return out;
}

std::vector<int> hungarian_max(const std::vector<std::vector<long>>& score) {
  const int rows = (int)score.size();
  if (rows == 0) return {};
  const int cols = (int)score[0].size();
  for (const auto& r : score) {
    if ((int)r.size() != cols) throw invalid_input("hungarian_max: ragged matrix");
  }

  // Pad to square and minimize cost = (max - score); classic O(n^3)
  // potentials-based Hungarian on 1-based arrays.
  const int m = std::max(rows, cols);
  long top = 0;
  for (const auto& r : score)
    for (long v : r) top = std::max(top, v);

  std::vector<std::vector<double>> cost((std::size_t)m + 1,
                                        std::vector<double>((std::size_t)m + 1, 0.0));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      const long v = (i <= rows && j <= cols) ? score[i - 1][j - 1] : 0;
      cost[i][j] = (double)(top - v);
    }
  }

  std::vector<double> u((std::size_t)m + 1, 0.0), v((std::size_t)m + 1, 0.0);
  std::vector<int> match_col((std::size_t)m + 1, 0), way((std::size_t)m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    match_col[0] = i;
    int j0 = 0;
    std::vector<double> minv((std::size_t)m + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used((std::size_t)m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match_col[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col((std::size_t)rows, -1);
  for (int j = 1; j <= m; ++j) {
    const int i = match_col[j];
    if (i >= 1 && i <= rows && j <= cols) row_to_col[i - 1] = j - 1;
  }
  return row_to_col;
}

MatchResult match_labels(const std::vector<int>& assignments, const std::vector<int>& truth,
                         int k) {
  if (assignments.size() != truth.size())
    throw invalid_input("match_labels: length mismatch");
  const int n = (int)assignments.size();

  std::set<int> distinct(truth.begin(), truth.end());
  MatchResult res;
  res.event_ids.assign(distinct.begin(), distinct.end());
  const int e_count = (int)res.event_ids.size();
  std::map<int, int> col_of;
  for (int j = 0; j < e_count; ++j) col_of[res.event_ids[j]] = j;

  res.confusion.assign((std::size_t)k, std::vector<long>((std::size_t)e_count, 0));
  for (int i = 0; i < n; ++i) {
    const int c = assignments[i];
    if (c < 0 || c >= k) throw invalid_input("match_labels: assignment out of range");
    res.confusion[c][col_of[truth[i]]] += 1;
  }

  const std::vector<int> row_to_col = hungarian_max(res.confusion);
  res.matched_event.assign((std::size_t)k, -1);
  long matched = 0;
  for (int c = 0; c < k; ++c) {
    if (row_to_col[c] >= 0) {
      res.matched_event[c] = res.event_ids[row_to_col[c]];
      matched += res.confusion[c][row_to_col[c]];
    }
  }
  res.accuracy = n > 0 ? (double)matched / (double)n : 0.0;
  return res;
}

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw invalid_input("ari: length mismatch");
  const int n = (int)a.size();
  if (n < 2) throw invalid_input("ari: need at least 2 points");

  std::map<int, int> ca, cb;
  for (int v : a) {
    if (!ca.count(v)) ca[v] = (int)ca.size();
  }
  for (int v : b) {
    if (!cb.count(v)) cb[v] = (int)cb.size();
  }
  const int ka = (int)ca.size(), kb = (int)cb.size();
  std::vector<std::vector<long>> table((std::size_t)ka, std::vector<long>((std::size_t)kb, 0));
  std::vector<long> rows((std::size_t)ka, 0), cols((std::size_t)kb, 0);
  for (int i = 0; i < n; ++i) {
    const int ia = ca[a[i]], ib = cb[b[i]];
    table[ia][ib] += 1;
    rows[ia] += 1;
    cols[ib] += 1;
  }

  auto choose2 = [](long m) { return 0.5 * (double)m * (double)(m - 1); };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) sum_ij += choose2(table[i][j]);
  for (long r : rows) sum_a += choose2(r);
  for (long c : cols) sum_b += choose2(c);
  const double all_pairs = choose2(n);
  const double expected = sum_a * sum_b / all_pairs;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial and identical in structure
  return (sum_ij - expected) / denom;
}

EvaluationReport positioning_report(const std::vector<int>& assignments,
                                    const MatchResult& match, double ari_value,
                                    const std::vector<Event>& events,
                                    const std::vector<int>& truth) {
  if (assignments.size() != truth.size())
    throw invalid_input("positioning_report: length mismatch");

  std::map<int, const Event*> by_id;
  for (const auto& e : events) by_id[e.event_id] = &e;
  for (int t : truth) {
    if (!by_id.count(t)) {
      std::ostringstream os;
      os << "positioning_report: dataset references unknown event_id " << t;
      throw invalid_input(os.str());
    }
  }

  EvaluationReport rep;
  rep.accuracy = match.accuracy;
  rep.ari = ari_value;
  rep.confusion = match.confusion;
  rep.event_ids = match.event_ids;
  rep.matched_map = match.matched_event;

  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const Event* true_event = by_id[truth[i]];
    const int mapped_id = match.matched_event[assignments[i]];
    if (mapped_id < 0 || !by_id.count(mapped_id)) {
      rep.detection_misses += 1;  // unknown cluster: no position to score
      continue;
    }
    const Event* mapped_event = by_id[mapped_id];
    const bool true_is_baseline = !true_event->reference_point.has_value();
    const bool mapped_is_baseline = !mapped_event->reference_point.has_value();
    if (true_is_baseline || mapped_is_baseline) {
      if (true_event->event_id == mapped_event->event_id) {
        rep.positioning_errors.push_back(0.0);  // correct no-object detection
      } else {
        rep.detection_misses += 1;
      }
      continue;
    }
    rep.positioning_errors.push_back(
        norm(*mapped_event->reference_point - *true_event->reference_point));
  }

  if (!rep.positioning_errors.empty()) {
    std::vector<double> sorted = rep.positioning_errors;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    rep.median_error = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    rep.mean_error = std::accumulate(sorted.begin(), sorted.end(), 0.0) / (double)m;
  }
  return rep;
}

}  // namespace vlcs
