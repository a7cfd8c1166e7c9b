// Kernel benchmark: serial reference implementations and 1-thread OpenMP
// builds against the multi-thread versions, with an agreement check on the
// results. Run from anywhere; prints a fixed-width table.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vlcsense/cluster.hpp"
#include "vlcsense/features.hpp"
#include "vlcsense/ofdm.hpp"
#include "vlcsense/reference.hpp"
#include "vlcsense/rng.hpp"

using namespace vlcs;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) best = std::min(best, time_once(fn));
  return best;
}

void row(const std::string& name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-28s %10.2f %12.2f %8.2fx   %.3e\n", name.c_str(), serial_ms, parallel_ms,
              serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %10s %12s %9s   %s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "max |diff|");

  // ---- diffuse field, fine patches
  {
    Scenario s = make_default_scenario();
    s.patch_size = 0.05;  // ~46k patches
    const Event& ev = s.events[5];

    std::vector<Tap> ref, par;
    const double t_ref = best_of(3, [&] { ref = reference::diffuse_taps_dense(s, ev, 0); });
    const double t_par = best_of(3, [&] { par = diffuse_taps_dense(s, ev, 0); });
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
      diff = std::max(diff, std::fabs(ref[i].gain - par[i].gain));
    row("diffuse_taps(0.05 m)", t_ref, t_par, diff);
  }

  // ---- dataset collection (1-thread OpenMP run as the serial baseline)
  {
    Scenario s = make_default_scenario();
    OfdmConfig cfg;
    cfg.snr_db = 25.0;
    std::vector<LinkObservation> serial_obs, par_obs;
    omp_set_num_threads(1);
    const double t_ser = best_of(2, [&] { serial_obs = simulate_link(s, cfg, 100, 1); });
    omp_set_num_threads(threads);
    const double t_par = best_of(2, [&] { par_obs = simulate_link(s, cfg, 100, 1); });
    double diff = 0.0;
    for (std::size_t i = 0; i < serial_obs.size(); ++i) {
      for (std::size_t p = 0; p < serial_obs[i].csi.h_est.size(); ++p)
        for (std::size_t k = 0; k < serial_obs[i].csi.h_est[p].size(); ++k)
          diff = std::max(diff, std::abs(serial_obs[i].csi.h_est[p][k] -
                                         par_obs[i].csi.h_est[p][k]));
    }
    row("simulate_link(100/event)", t_ser, t_par, diff);
  }

  // ---- pairwise distances + silhouette on a training-sized matrix
  {
    Rng rng(5);
    const int n = 2000, d = 48;
    std::vector<double> x((std::size_t)n * d);
    for (auto& v : x) v = rng.next_double();
    std::vector<int> asg(n);
    for (int i = 0; i < n; ++i) asg[i] = i % 10;

    std::vector<double> dist_ref, dist_par;
    const double t_ref = best_of(2, [&] { dist_ref = reference::pairwise_distances(x, n, d); });
    const double t_par = best_of(2, [&] { dist_par = pairwise_distances(x, n, d); });
    double diff = 0.0;
    for (std::size_t i = 0; i < dist_ref.size(); ++i)
      diff = std::max(diff, std::fabs(dist_ref[i] - dist_par[i]));
    row("pairwise_distances(2000)", t_ref, t_par, diff);

    double s_ref = 0.0, s_par = 0.0;
    const double ts_ref = best_of(2, [&] { s_ref = reference::silhouette(x, n, d, asg); });
    const double ts_par = best_of(2, [&] { s_par = silhouette(x, n, d, asg); });
    row("silhouette(2000)", ts_ref, ts_par, std::fabs(s_ref - s_par));
  }

  // ---- k-means restarts (1-thread OpenMP run as the serial baseline)
  {
    Rng rng(6);
    const int n = 2000, d = 48;
    std::vector<double> x((std::size_t)n * d);
    for (auto& v : x) v = rng.next_double();
    KmeansParams params;
    params.restarts = 20;

    KmeansResult r_ser, r_par;
    omp_set_num_threads(1);
    const double t_ser = best_of(1, [&] { r_ser = kmeans(x, n, d, 10, 3, params); });
    omp_set_num_threads(threads);
    const double t_par = best_of(1, [&] { r_par = kmeans(x, n, d, 10, 3, params); });
    row("kmeans(2000, k=10, 20 rs)", t_ser, t_par, std::fabs(r_ser.inertia - r_par.inertia));
  }

  return 0;
}
