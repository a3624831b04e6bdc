#include "d2dsim/throughput.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "d2dsim/caching.hpp"
#include "d2dsim/csv.hpp"

namespace d2dsim {

namespace {

// Two lowest holder ids per (cluster, file); caches must be sorted so the
// ascending node scan sees holders in id order.
struct HolderIndex {
  long long m = 0;
  std::unordered_map<long long, std::pair<int, int>> holders;

  void build(const std::vector<std::vector<int>>& caches, const ClusterPartition& part,
             int m_files) {
    m = m_files;
    holders.clear();
    holders.reserve(caches.size() * (caches.empty() ? 1 : caches[0].size() + 1));
    for (std::size_t u = 0; u < caches.size(); ++u) {
      long long cl = part.cluster_of[u];
      for (int f : caches[u]) {
        auto [it, fresh] = holders.try_emplace(cl * m + f, static_cast<int>(u), -1);
        if (!fresh && it->second.second < 0) it->second.second = static_cast<int>(u);
      }
    }
  }

  int holder_for(int cluster, int file, int self) const {
    auto it = holders.find(static_cast<long long>(cluster) * m + file);
    if (it == holders.end()) return -1;
    if (it->second.first != self) return it->second.first;
    return it->second.second;
  }
};

}  // namespace

LinkReport find_potential_links(const std::vector<int>& requests,
                                const std::vector<std::vector<int>>& caches,
                                const ClusterPartition& part) {
  std::size_t n = part.cluster_of.size();
  if (requests.size() != n || caches.size() != n)
    throw std::invalid_argument("find_potential_links: size mismatch");
  int m = 0;
  for (const auto& c : caches)
    for (int f : c) m = std::max(m, f + 1);
  for (int f : requests) m = std::max(m, f + 1);

  HolderIndex idx;
  idx.build(caches, part, m);

  LinkReport rep;
  for (std::size_t u = 0; u < n; ++u) {
    int f = requests[u];
    if (std::binary_search(caches[u].begin(), caches[u].end(), f)) {
      rep.self_served.push_back(static_cast<int>(u));
      continue;
    }
    int h = idx.holder_for(part.cluster_of[u], f, static_cast<int>(u));
    if (h >= 0)
      rep.links.push_back({static_cast<int>(u), h, f});
    else
      rep.outage.push_back(static_cast<int>(u));
  }
  return rep;
}

std::vector<std::vector<PotentialLink>> schedule_round(const LinkReport& report,
                                                       const ClusterPartition& part,
                                                       const std::vector<int>& colors,
                                                       int reuse_k, ScheduleState& state) {
  int nc = part.cluster_count();
  if (reuse_k < 1) throw std::invalid_argument("schedule_round: reuse_k must be positive");
  if (static_cast<int>(colors.size()) != nc)
    throw std::invalid_argument("schedule_round: one color per cluster required");
  if (static_cast<int>(state.next_slot.size()) < nc) state.next_slot.resize(nc, 0);

  std::vector<std::vector<PotentialLink>> by_cluster(nc);
  for (const auto& l : report.links) by_cluster[part.cluster_of[l.rx]].push_back(l);

  std::vector<std::vector<PotentialLink>> subslots(reuse_k);
  for (int c = 0; c < nc; ++c) {
    const auto& ls = by_cluster[c];
    if (ls.empty()) continue;
    if (colors[c] < 0 || colors[c] >= reuse_k)
      throw std::invalid_argument("schedule_round: color out of range");
    subslots[colors[c]].push_back(ls[state.next_slot[c] % ls.size()]);
    ++state.next_slot[c];
  }
  return subslots;
}

namespace {

struct SweepContext {
  ClusterPartition part;
  double g_c = 0.0;
  std::vector<double> cache_pmf;                // empty for deterministic caching
  std::vector<std::vector<int>> fixed_caches;   // deterministic only
};

struct SeedOutcome {
  double t_min = 0.0;
  double p_o = 0.0;
};

SeedOutcome run_tradeoff_seed(const TradeoffParams& p, const RequestModel& model,
                              const SweepContext& ctx, int reuse_k, int ci, int si) {
  int n = static_cast<int>(ctx.part.cluster_of.size());
  Rng job = Rng(p.seed).fork((static_cast<std::uint64_t>(ci) << 32) |
                             static_cast<std::uint64_t>(si));
  Rng cache_rng = job.fork(1);
  Rng req_rng = job.fork(2);

  std::vector<std::vector<int>> drawn;
  const std::vector<std::vector<int>>* caches = &ctx.fixed_caches;
  if (!ctx.cache_pmf.empty()) {
    drawn = sample_random_caches(ctx.cache_pmf, n, p.M, cache_rng);
    caches = &drawn;
  }

  HolderIndex idx;
  idx.build(*caches, ctx.part, p.m);

  int nc = ctx.part.cluster_count();
  std::vector<double> credit(n, 0.0);
  std::vector<char> ever_linked(n, 0);
  std::vector<int> cnt(nc), seen(nc), linked;
  linked.reserve(n);
  long long outage_user_rounds = 0;

  for (int round = 0; round < p.rounds; ++round) {
    std::vector<int> requests = sample_requests(model, n, req_rng);
    std::fill(cnt.begin(), cnt.end(), 0);
    linked.clear();
    for (int u = 0; u < n; ++u) {
      int f = requests[u];
      const auto& own = (*caches)[u];
      if (std::binary_search(own.begin(), own.end(), f)) continue;
      int cl = ctx.part.cluster_of[u];
      if (idx.holder_for(cl, f, u) < 0) {
        ++outage_user_rounds;
        continue;
      }
      linked.push_back(u);
      ++cnt[cl];
    }
    if (p.admission_cap > 0) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int u : linked) {
        int cl = ctx.part.cluster_of[u];
        if (seen[cl]++ < p.admission_cap) {
          int share = std::min(cnt[cl], p.admission_cap);
          credit[u] += 1.0 / (reuse_k * share);
          ever_linked[u] = 1;
        } else {
          ++outage_user_rounds;
        }
      }
    } else {
      // credits accumulate pre-normalized (in units of the link rate), so
      // the points are bitwise independent of its numeric value
      for (int u : linked) {
        credit[u] += 1.0 / (reuse_k * cnt[ctx.part.cluster_of[u]]);
        ever_linked[u] = 1;
      }
    }
  }

  SeedOutcome out;
  double lo = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int u = 0; u < n; ++u) {
    if (!ever_linked[u]) continue;
    any = true;
    lo = std::min(lo, credit[u] / p.rounds);
  }
  out.t_min = any ? lo : 0.0;
  out.p_o = static_cast<double>(outage_user_rounds) / (static_cast<double>(n) * p.rounds);
  return out;
}

}  // namespace

std::vector<TradeoffPoint> simulate_tradeoff(const TradeoffParams& params) {
  if (params.rounds < 1 || params.seeds < 1)
    throw std::invalid_argument("simulate_tradeoff: rounds and seeds must be positive");
  if (params.n < 1 || params.m < 1 || params.M < 1)
    throw std::invalid_argument("simulate_tradeoff: n, m, M must be positive");
  if (params.clusters_per_axis.empty())
    throw std::invalid_argument("simulate_tradeoff: empty cluster sweep");
  if (params.link_rate <= 0)
    throw std::invalid_argument("simulate_tradeoff: link_rate must be positive");

  NetworkGeometry geo = grid_nodes(params.n);
  RequestModel model(params.m, params.gamma_r);
  int reuse_k = params.reuse_k_override > 0 ? params.reuse_k_override
                                            : reuse_factor(params.delta);

  std::vector<SweepContext> sweep;
  sweep.reserve(params.clusters_per_axis.size());
  for (int c : params.clusters_per_axis) {
    if (c < 1) throw std::invalid_argument("simulate_tradeoff: clusters_per_axis < 1");
    SweepContext ctx;
    ctx.part = partition_clusters(geo, 1.0 / c);
    ctx.g_c = static_cast<double>(geo.n) / ctx.part.cluster_count();
    switch (params.caching) {
      case CachingKind::kOptimal:
        ctx.cache_pmf =
            optimal_caching_pmf(model.pmf, params.M,
                                static_cast<int>(std::llround(ctx.g_c)))
                .pmf;
        break;
      case CachingKind::kZipf:
        ctx.cache_pmf = zipf_caching_pmf(params.m, params.gamma_r).pmf;
        break;
      case CachingKind::kDeterministic:
        ctx.fixed_caches = deterministic_cluster_cache(ctx.part, params.M, params.m).first;
        break;
    }
    if (!ctx.cache_pmf.empty()) {
      int support = 0;
      for (double v : ctx.cache_pmf)
        if (v > 0) ++support;
      if (support < params.M)
        throw std::invalid_argument("simulate_tradeoff: caching pmf support below M");
    }
    sweep.push_back(std::move(ctx));
  }

  int total = static_cast<int>(sweep.size()) * params.seeds;
  std::vector<SeedOutcome> outcomes(total);
  std::atomic<int> cursor{0};
  auto worker = [&] {
    for (;;) {
      int j = cursor.fetch_add(1);
      if (j >= total) return;
      int ci = j / params.seeds, si = j % params.seeds;
      outcomes[j] = run_tradeoff_seed(params, model, sweep[ci], reuse_k, ci, si);
    }
  };
  int w = std::max(1, params.workers);
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int i = 0; i < w; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<TradeoffPoint> points;
  points.reserve(sweep.size());
  for (std::size_t ci = 0; ci < sweep.size(); ++ci) {
    double t_sum = 0.0, p_sum = 0.0;
    for (int si = 0; si < params.seeds; ++si) {
      t_sum += outcomes[ci * params.seeds + si].t_min;
      p_sum += outcomes[ci * params.seeds + si].p_o;
    }
    double t_mean = t_sum / params.seeds;
    double var = 0.0;
    for (int si = 0; si < params.seeds; ++si) {
      double d = outcomes[ci * params.seeds + si].t_min - t_mean;
      var += d * d;
    }
    double se = params.seeds > 1 ? std::sqrt(var / (params.seeds - 1) / params.seeds) : 0.0;
    TradeoffPoint pt;
    pt.g_c = sweep[ci].g_c;
    pt.p_o = p_sum / params.seeds;
    pt.t_min = t_mean;
    pt.std_error = se;
    pt.seed_count = params.seeds;
    points.push_back(pt);
  }
  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    return a.p_o != b.p_o ? a.p_o < b.p_o : a.g_c > b.g_c;
  });
  return points;
}

std::vector<double> grid_occupancy_pmf(const ClusterPartition& part) {
  int nc = part.cluster_count();
  if (nc < 1) throw std::invalid_argument("grid_occupancy_pmf: empty partition");
  std::size_t maxk = 0;
  for (const auto& ms : part.members) maxk = std::max(maxk, ms.size());
  std::vector<double> w(maxk + 1, 0.0);
  for (const auto& ms : part.members) w[ms.size()] += 1.0;
  for (double& v : w) v /= nc;
  return w;
}

std::vector<double> binomial_occupancy_pmf(int n, double cell_area) {
  if (n < 0 || cell_area <= 0.0 || cell_area > 1.0)
    throw std::invalid_argument("binomial_occupancy_pmf: need n >= 0, area in (0,1]");
  std::vector<double> w(n + 1, 0.0);
  if (cell_area == 1.0) {
    w[n] = 1.0;
    return w;
  }
  // recursive ratio keeps every weight finite where pow() would over/underflow
  w[0] = std::exp(n * std::log1p(-cell_area));
  double odds = cell_area / (1.0 - cell_area);
  for (int k = 0; k < n; ++k) w[k + 1] = w[k] * odds * (n - k) / (k + 1);
  return w;
}

namespace {

// One cluster of k members, member i holding the popularity slice
// ((i-1)M, min(iM, m)]: probability that at least one member requests a file
// someone else in the cluster holds.
double cluster_active_probability(const std::vector<double>& prefix, int k, int M) {
  long long m = static_cast<long long>(prefix.size()) - 1;
  double cvc = prefix[static_cast<std::size_t>(std::min<long long>(1LL * k * M, m))];
  double prod = 1.0;
  for (int i = 1; i <= k; ++i) {
    double own = prefix[static_cast<std::size_t>(std::min<long long>(1LL * i * M, m))] -
                 prefix[static_cast<std::size_t>(std::min<long long>(1LL * (i - 1) * M, m))];
    prod *= 1.0 - (cvc - own);
  }
  return 1.0 - prod;
}

double expected_throughput_core(const std::vector<double>& w, double n_clusters,
                                const std::vector<double>& pmf, int M) {
  std::vector<double> prefix(pmf.size() + 1, 0.0);
  for (std::size_t i = 0; i < pmf.size(); ++i) prefix[i + 1] = prefix[i] + pmf[i];
  double total = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    total += w[k] * cluster_active_probability(prefix, static_cast<int>(k), M);
  }
  return n_clusters * total;
}

void check_cluster_edge(double r) {
  if (!(r > 0.0) || r > 1.0)
    throw std::invalid_argument("expected_throughput: cluster edge must be in (0,1]");
}

}  // namespace

double expected_throughput_grid(const RequestModel& model, int n, double r, int M) {
  check_cluster_edge(r);
  NetworkGeometry geo = grid_nodes(n);
  ClusterPartition part = partition_clusters(geo, r);
  return expected_throughput_core(grid_occupancy_pmf(part), part.cluster_count(),
                                  model.pmf, M);
}

double expected_throughput_random(const RequestModel& model, int n, double r, int M) {
  check_cluster_edge(r);
  return expected_throughput_core(binomial_occupancy_pmf(n, r * r), 1.0 / (r * r),
                                  model.pmf, M);
}

McThroughput mc_expected_throughput(const RequestModel& model, int n, double r, int M,
                                    bool random_placement, int rounds, Rng& rng) {
  check_cluster_edge(r);
  if (rounds < 2) throw std::invalid_argument("mc_expected_throughput: rounds >= 2");
  NetworkGeometry geo = grid_nodes(n);
  ClusterPartition part = partition_clusters(geo, r);
  long long m = model.m;

  double sum = 0.0, sumsq = 0.0;
  for (int round = 0; round < rounds; ++round) {
    if (random_placement) {
      geo = uniform_nodes(n, rng);
      part = partition_clusters(geo, r);
    }
    int active = 0;
    for (const auto& ms : part.members) {
      int k = static_cast<int>(ms.size());
      if (k == 0) continue;
      long long cvc_top = std::min<long long>(1LL * k * M, m);
      bool any = false;
      for (int i = 1; i <= k; ++i) {
        long long rank = static_cast<long long>(model.sampler.sample(rng)) + 1;
        bool own = rank > 1LL * (i - 1) * M && rank <= std::min<long long>(1LL * i * M, m);
        if (rank <= cvc_top && !own) any = true;
      }
      if (any) ++active;
    }
    sum += active;
    sumsq += static_cast<double>(active) * active;
  }
  McThroughput out;
  out.mean = sum / rounds;
  double var = (sumsq / rounds - out.mean * out.mean) / (rounds - 1);
  out.std_error = std::sqrt(std::max(0.0, var));
  return out;
}

double branch1_throughput_at(double p, double gamma_r, int m, int M, int K, double c_r) {
  if (!(gamma_r > 0.0) || gamma_r >= 1.0)
    throw std::invalid_argument("branch1_throughput_at: gamma_r in (0,1)");
  if (!(p > 0.0) || p > (1.0 - gamma_r) * (1.0 + 1e-12))
    throw std::invalid_argument("branch1_throughput_at: p outside (0, 1-gamma_r]");
  double rho1 = std::max(gamma_r, gamma_r - std::log(p / (1.0 - gamma_r)));
  return (c_r / K) * M / (rho1 * m);
}

TheoryCurve theorem_curve(const ScalingCurveParams& sc, int m, int M, int K, double c_r,
                          double g_c) {
  double g = sc.gamma_r;
  if (!(g > 0.0) || g >= 1.0) throw std::invalid_argument("theorem_curve: gamma_r in (0,1)");
  if (m < 1 || M < 1 || K < 1 || c_r <= 0.0)
    throw std::invalid_argument("theorem_curve: bad m/M/K/C_r");
  double alpha = (1.0 - g) / (2.0 - g);
  TheoryCurve curve;

  std::vector<double> rho1 = sc.rho1_grid;
  if (rho1.empty()) {
    // 64 points, outage log-spaced over [1e-3, 1-gamma_r]
    double lo = std::log(1e-3), hi = std::log(1.0 - g);
    for (int j = 0; j < 64; ++j) {
      double p = std::exp(lo + (hi - lo) * j / 63.0);
      rho1.push_back(g - std::log(p / (1.0 - g)));
    }
  }
  std::sort(rho1.begin(), rho1.end(), std::greater<double>());
  for (double rho : rho1) {
    if (rho < g - 1e-12) throw std::invalid_argument("theorem_curve: rho1 below gamma_r");
    curve.points.push_back({1, (1.0 - g) * std::exp(g - rho), (c_r / K) * M / (rho * m)});
  }

  if (sc.fit_a > 0.0) {
    if (g_c > g * m / static_cast<double>(M) + 1e-12) {
      curve.truncated = true;
      curve.note += "branch 2 skipped (g_c above gamma_r*m/M); ";
    } else {
      double p2 = 1.0 - std::pow(g, g) * std::pow(M * g_c / m, 1.0 - g);
      p2 = std::clamp(p2, 0.0, 1.0);
      double t2 = (c_r * sc.fit_a / K) * M / (m * std::pow(1.0 - p2, 1.0 / (1.0 - g)));
      curve.points.push_back({2, p2, t2});
    }
  } else {
    curve.truncated = true;
    curve.note += "branch 2 omitted (constant A unset); ";
  }

  double rho2_min = std::pow((1.0 - g) / (std::pow(g, g) * std::pow(M, 1.0 - g)),
                             1.0 / (2.0 - g));
  if (sc.fit_b > 0.0 && sc.fit_a_gamma > 0.0) {
    double rho2 = sc.rho2 > 0.0 ? sc.rho2 : rho2_min;
    if (rho2 < rho2_min - 1e-12)
      throw std::invalid_argument("theorem_curve: rho2 below its admissible minimum");
    double p_lo = 1.0 - std::pow(g, g) * std::pow(static_cast<double>(M), 1.0 - g) *
                            std::pow(rho2, 1.0 - g) * std::pow(m, -alpha);
    double p_hi = 1.0 - sc.fit_a_gamma * std::pow(m, -alpha);
    double t3 = (c_r * sc.fit_b / K) * std::pow(m, -alpha);
    curve.points.push_back({3, std::clamp(p_lo, 0.0, 1.0), t3});
    curve.points.push_back({3, std::clamp(p_hi, 0.0, 1.0), t3});
  } else {
    curve.truncated = true;
    curve.note += "branches 3-4 need B/D and a(gamma_r); ";
  }
  if (sc.fit_d > 0.0 && sc.fit_a_gamma > 0.0) {
    double p4 = std::clamp(1.0 - sc.fit_a_gamma * std::pow(m, -alpha), 0.0, 1.0);
    double t4 = (c_r * sc.fit_d / K) * std::pow(m, -alpha);
    curve.points.push_back({4, p4, t4});
    curve.points.push_back({4, 1.0, t4});
  }
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const TheoryPoint& a, const TheoryPoint& b) { return a.p < b.p; });
  return curve;
}

TradeoffPoint bs_unicast_baseline(int n, double bs_rate) {
  if (n < 1 || bs_rate <= 0.0)
    throw std::invalid_argument("bs_unicast_baseline: need n >= 1, bs_rate > 0");
  TradeoffPoint pt;
  pt.g_c = n;
  pt.p_o = 0.0;
  pt.t_min = bs_rate / n;
  pt.std_error = 0.0;
  pt.seed_count = 1;
  return pt;
}

std::vector<double> isotonic_non_decreasing(const std::vector<double>& y) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    Block b{v, 1};
    while (!blocks.empty() && blocks.back().sum / blocks.back().count > b.sum / b.count) {
      b.sum += blocks.back().sum;
      b.count += blocks.back().count;
      blocks.pop_back();
    }
    blocks.push_back(b);
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.sum / b.count);
  return out;
}

double loglog_interp(std::vector<std::pair<double, double>> pts, double x) {
  if (pts.size() < 2) throw std::invalid_argument("loglog_interp: need >= 2 points");
  if (!(x > 0.0)) throw std::invalid_argument("loglog_interp: x must be positive");
  for (const auto& [px, py] : pts)
    if (!(px > 0.0) || !(py > 0.0))
      throw std::invalid_argument("loglog_interp: points must be positive");
  std::sort(pts.begin(), pts.end());
  std::size_t i = 0;
  while (i + 2 < pts.size() && pts[i + 1].first < x) ++i;
  double x0 = std::log(pts[i].first), x1 = std::log(pts[i + 1].first);
  if (x1 <= x0) throw std::invalid_argument("loglog_interp: duplicate x");
  double t = (std::log(x) - x0) / (x1 - x0);
  return std::exp(std::log(pts[i].second) * (1.0 - t) + std::log(pts[i + 1].second) * t);
}

std::string tradeoff_csv(const std::vector<TradeoffPoint>& points) {
  CsvWriter w({"g_c", "p_o", "t_min_normalized", "stderr", "seed_count"});
  for (const auto& p : points)
    w.row({fmt_double(p.g_c), fmt_double(p.p_o), fmt_double(p.t_min),
           fmt_double(p.std_error), std::to_string(p.seed_count)});
  return w.str();
}

std::string theory_csv(const TheoryCurve& curve) {
  CsvWriter w({"branch", "p", "T"});
  for (const auto& pt : curve.points)
    w.row({std::to_string(pt.branch), fmt_double(pt.p), fmt_double(pt.t)});
  return w.str();
}

}  // namespace d2dsim
