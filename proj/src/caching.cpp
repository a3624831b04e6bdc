#include "d2dsim/caching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dsim/request_model.hpp"

namespace d2dsim {

CachingPmf optimal_caching_pmf(const std::vector<double>& request_pmf, int M, int g_c) {
  int m = static_cast<int>(request_pmf.size());
  if (m < 1) throw std::invalid_argument("optimal_caching_pmf: empty request pmf");
  if (M < 1 || g_c < 1) throw std::invalid_argument("optimal_caching_pmf: M, g_c must be >= 1");
  for (int f = 1; f < m; ++f) {
    if (request_pmf[f] > request_pmf[f - 1] + 1e-15)
      throw std::invalid_argument("optimal_caching_pmf: request pmf must be rank-sorted");
  }

  CachingPmf out;
  out.pmf.assign(request_pmf.size(), 0.0);

  long long exponent = static_cast<long long>(M) * (g_c - 1) - 1;
  if (exponent <= 0) {
    if (M > m) throw std::invalid_argument("optimal_caching_pmf: M exceeds library size");
    out.degenerate = true;
    out.support = M;
    for (int f = 0; f < M; ++f) out.pmf[f] = 1.0 / M;
    return out;
  }

  std::vector<double> z(request_pmf.size());
  for (int f = 0; f < m; ++f) {
    if (!(request_pmf[f] > 0.0))
      throw std::invalid_argument("optimal_caching_pmf: request pmf must be positive");
    z[f] = std::pow(request_pmf[f], 1.0 / static_cast<double>(exponent));
  }

  // largest prefix whose water level stays below its smallest z
  int support = 1;
  double inv_sum = 1.0 / z[0];
  double acc = inv_sum;
  for (int k = 2; k <= m; ++k) {
    acc += 1.0 / z[k - 1];
    double nu = (k - 1) / acc;
    if (nu < z[k - 1]) {
      support = k;
      inv_sum = acc;
    }
  }
  // recompute the inverse sum for the chosen prefix (acc kept running past it)
  if (support < m) {
    inv_sum = 0.0;
    for (int f = 0; f < support; ++f) inv_sum += 1.0 / z[f];
  }
  double nu = (support - 1) / inv_sum;
  out.support = support;
  out.nu = nu;
  for (int f = 0; f < support; ++f) out.pmf[f] = std::max(0.0, 1.0 - nu / z[f]);
  return out;
}

CachingPmf zipf_caching_pmf(int m, double gamma_c) {
  CachingPmf out;
  out.pmf = zipf_pmf(m, gamma_c);
  out.support = m;
  return out;
}

std::vector<std::vector<int>> sample_random_caches(const std::vector<double>& caching_pmf,
                                                   int n_nodes, int M, Rng& rng) {
  if (n_nodes < 0) throw std::invalid_argument("sample_random_caches: negative n_nodes");
  if (M < 1) throw std::invalid_argument("sample_random_caches: M must be >= 1");
  int support = 0;
  for (double p : caching_pmf)
    if (p > 0.0) ++support;
  if (support < M)
    throw std::invalid_argument("sample_random_caches: pmf support smaller than M");

  DiscreteSampler sampler(caching_pmf);
  std::vector<std::vector<int>> caches(static_cast<std::size_t>(n_nodes));
  for (auto& cache : caches) {
    cache.reserve(static_cast<std::size_t>(M));
    while (static_cast<int>(cache.size()) < M) {
      int f = static_cast<int>(sampler.sample(rng));
      if (std::find(cache.begin(), cache.end(), f) == cache.end()) cache.push_back(f);
    }
    std::sort(cache.begin(), cache.end());
  }
  return caches;
}

std::pair<std::vector<std::vector<int>>, bool> deterministic_cluster_cache(
    const ClusterPartition& part, int M, int m) {
  if (M < 1 || m < M) throw std::invalid_argument("deterministic_cluster_cache: need 1 <= M <= m");
  std::vector<std::vector<int>> caches(part.cluster_of.size());
  bool wrapped = false;
  for (const auto& cluster : part.members) {
    for (std::size_t j = 0; j < cluster.size(); ++j) {
      auto& cache = caches[static_cast<std::size_t>(cluster[j])];
      cache.resize(static_cast<std::size_t>(M));
      for (int i = 0; i < M; ++i) {
        long long fid = static_cast<long long>(j) * M + i;
        if (fid >= m) wrapped = true;
        cache[static_cast<std::size_t>(i)] = static_cast<int>(fid % m);
      }
    }
  }
  return {std::move(caches), wrapped};
}

double hit_probability_closed_form(const std::vector<double>& request_pmf,
                                   const std::vector<double>& caching_pmf, int nodes,
                                   int M, bool include_self) {
  if (request_pmf.size() != caching_pmf.size())
    throw std::invalid_argument("hit_probability: pmf size mismatch");
  if (nodes < 0 || M < 1) throw std::invalid_argument("hit_probability: bad nodes/M");
  double draws = static_cast<double>(M) * (nodes + (include_self ? 1 : 0));
  double hit = 0.0;
  for (std::size_t f = 0; f < request_pmf.size(); ++f) {
    hit += request_pmf[f] * (1.0 - std::pow(1.0 - caching_pmf[f], draws));
  }
  return hit;
}

double hit_probability_mc(const std::vector<double>& request_pmf,
                          const std::vector<double>& caching_pmf, int nodes, int M,
                          long draws, Rng& rng, bool include_self) {
  if (request_pmf.size() != caching_pmf.size())
    throw std::invalid_argument("hit_probability_mc: pmf size mismatch");
  if (nodes < 0 || M < 1 || draws < 1)
    throw std::invalid_argument("hit_probability_mc: bad nodes/M/draws");
  int support = 0;
  for (double p : caching_pmf)
    if (p > 0.0) ++support;
  if (support < M) throw std::invalid_argument("hit_probability_mc: pmf support smaller than M");

  DiscreteSampler req(request_pmf);
  DiscreteSampler cache(caching_pmf);
  int total_nodes = nodes + (include_self ? 1 : 0);
  long hits = 0;
  std::vector<int> drawn;
  drawn.reserve(static_cast<std::size_t>(M));
  for (long d = 0; d < draws; ++d) {
    int want = static_cast<int>(req.sample(rng));
    bool hit = false;
    for (int node = 0; node < total_nodes && !hit; ++node) {
      drawn.clear();
      while (static_cast<int>(drawn.size()) < M) {
        int f = static_cast<int>(cache.sample(rng));
        if (std::find(drawn.begin(), drawn.end(), f) != drawn.end()) continue;
        drawn.push_back(f);
        if (f == want) {
          hit = true;
          break;
        }
      }
    }
    hits += hit ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace d2dsim
