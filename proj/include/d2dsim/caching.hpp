#pragma once

#include <utility>
#include <vector>

#include "d2dsim/geometry.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

struct CachingPmf {
  std::vector<double> pmf;  // per rank, same length as the request pmf
  int support = 0;          // number of files with positive mass
  double nu = 0.0;          // water level (0 when degenerate)
  bool degenerate = false;  // M(g_c-1) <= 1 fallback: uniform over the top M
};

// Hit-optimal random caching distribution for clusters of g_c nodes with M
// cache slots each:
//   p(f) = [1 - nu/z_f]^+ ,  z_f = request_pmf(f)^(1/(M(g_c-1)-1)),
//   nu   = (support-1) / sum_{f<=support} 1/z_f,
// support chosen as the largest popularity prefix with all-positive mass.
// Requires M(g_c-1) > 1; smaller products fall back to a uniform pmf on the
// top M files, which under duplicate-rejection sampling caches exactly the M
// most popular files at every node (flagged degenerate).
CachingPmf optimal_caching_pmf(const std::vector<double>& request_pmf, int M, int g_c);

// Popularity-skewed random caching with its own exponent.
CachingPmf zipf_caching_pmf(int m, double gamma_c);

// Per-node caches of exactly M distinct files, i.i.d. draws from the pmf with
// sequential redraw on within-node duplicates.  Requires support >= M.
std::vector<std::vector<int>> sample_random_caches(const std::vector<double>& caching_pmf,
                                                   int n_nodes, int M, Rng& rng);

// Within each cluster, members (ascending node id) cache disjoint slices of
// the popularity order: member j holds files (j*M .. j*M+M-1) mod m.  The
// per-cluster union is exactly min(cluster_size*M, m) distinct files; second
// element reports whether any cluster exhausted the library and wrapped.
std::pair<std::vector<std::vector<int>>, bool> deterministic_cluster_cache(
    const ClusterPartition& part, int M, int m);

// P(request found in the caches of `nodes` other members), treating each of
// their M slots as an independent draw (the idealization the optimal pmf is
// derived under).  include_self adds the requester's own cache as one more
// node.
double hit_probability_closed_form(const std::vector<double>& request_pmf,
                                   const std::vector<double>& caching_pmf, int nodes,
                                   int M, bool include_self);

// Monte-Carlo hit probability under the real sampler (duplicate rejection).
double hit_probability_mc(const std::vector<double>& request_pmf,
                          const std::vector<double>& caching_pmf, int nodes, int M,
                          long draws, Rng& rng, bool include_self);

}  // namespace d2dsim
