#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "d2dsim/geometry.hpp"
#include "d2dsim/request_model.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

// One servable in-cluster request: holder caches the file rx asked for and
// sits in the same cluster.  Lowest-id holder wins when several qualify.
struct PotentialLink {
  int rx = -1;
  int tx = -1;
  int file = -1;
};

// Per-round request classification; the three node lists partition the users.
struct LinkReport {
  std::vector<PotentialLink> links;  // ascending rx
  std::vector<int> self_served;      // request found in own cache
  std::vector<int> outage;           // no in-cluster holder
};

LinkReport find_potential_links(const std::vector<int>& requests,
                                const std::vector<std::vector<int>>& caches,
                                const ClusterPartition& part);

// Per-cluster round-robin rotor, carried across rounds.
struct ScheduleState {
  std::vector<std::uint64_t> next_slot;
};

// Strict K-phase TDMA: subslot s serves the clusters colored s, one link per
// active cluster, rotating over that cluster's admitted links across rounds.
// Returns one active link set per subslot.
std::vector<std::vector<PotentialLink>> schedule_round(const LinkReport& report,
                                                       const ClusterPartition& part,
                                                       const std::vector<int>& colors,
                                                       int reuse_k, ScheduleState& state);

enum class CachingKind { kOptimal, kZipf, kDeterministic };

struct TradeoffParams {
  int n = 0;  // requested users; grid layout truncates to a full square
  int m = 0;
  double gamma_r = 0.4;
  int M = 1;
  std::vector<int> clusters_per_axis;  // sweep; cluster side = 1/c
  int rounds = 1000;
  int seeds = 4;
  std::uint64_t seed = 1;
  double delta = 0.2;
  int reuse_k_override = 0;  // 0: derive from delta
  CachingKind caching = CachingKind::kOptimal;
  int admission_cap = 0;  // links admitted per cluster per round; 0: all
  int workers = 1;
  double link_rate = 1.0;  // C_r, constant across the sweep
};

struct TradeoffPoint {
  double g_c = 0.0;    // mean nodes per cluster
  double p_o = 0.0;    // outage fraction over user-rounds
  double t_min = 0.0;  // min per-user time-average throughput / link_rate
  double std_error = 0.0;
  int seed_count = 0;
};

// Caches are drawn once per seed, requests i.i.d. per round.  Every admitted
// link is credited its round-robin share link_rate/(K * cluster links) per
// round; t_min minimizes the time average over users that were ever linked
// (self-served requests cost no spectrum and stay out of the minimum), then
// averages across seeds.  Points come back sorted by p_o.
std::vector<TradeoffPoint> simulate_tradeoff(const TradeoffParams& params);

// Occupancy law of cluster sizes: exact histogram for a fixed grid partition,
// binomial marginal for n uniform nodes and one cell of the given area.
std::vector<double> grid_occupancy_pmf(const ClusterPartition& part);
std::vector<double> binomial_occupancy_pmf(int n, double cell_area);

// Expected number of clusters serving a request per slot when each cluster
// member i caches the popularity slice ((i-1)M, iM] and a cluster is active
// iff some member wants a file cached by another member.  Occupancy weights
// are the grid histogram or the binomial law; r is the cluster edge.
double expected_throughput_grid(const RequestModel& model, int n, double r, int M);
double expected_throughput_random(const RequestModel& model, int n, double r, int M);

struct McThroughput {
  double mean = 0.0;
  double std_error = 0.0;
};

// Direct simulation of the same quantity (uniform placements redrawn per
// round when random_placement is set).
McThroughput mc_expected_throughput(const RequestModel& model, int n, double r, int M,
                                    bool random_placement, int rounds, Rng& rng);

struct ScalingCurveParams {
  double gamma_r = 0.4;
  std::vector<double> rho1_grid;  // empty: 64 points spanning p in [1e-3, 1-gamma_r]
  double rho2 = 0.0;              // <=0: smallest admissible value
  double fit_a = 0.0;             // branch-2 constant; <=0 omits the branch
  double fit_b = 0.0;             // branch-3 constant
  double fit_d = 0.0;             // branch-4 constant
  double fit_a_gamma = 0.0;       // onset constant shared by branches 3-4
};

struct TheoryPoint {
  int branch = 0;
  double p = 0.0;
  double t = 0.0;
};

struct TheoryCurve {
  std::vector<TheoryPoint> points;
  bool truncated = false;  // some branch omitted for lack of a fit constant
  std::string note;
};

// Dominant-term throughput-outage curve (vanishing correction terms omitted):
//   1: T = (C_r/K) M/(rho1 m)                 at p = (1-g) e^(g-rho1), rho1 >= g
//   2: T = (C_r A/K) M/(m (1-p)^(1/(1-g)))    at p = 1 - g^g (M g_c/m)^(1-g)
//   3: T = (C_r B/K) m^-alpha                 flat until p = 1 - a(g) m^-alpha
//   4: T = (C_r D/K) m^-alpha                 beyond that
// with g = gamma_r and alpha = (1-g)/(2-g).
TheoryCurve theorem_curve(const ScalingCurveParams& sc, int m, int M, int K, double c_r,
                          double g_c);

// Branch-1 dominant term evaluated at outage p in (0, 1-gamma_r].
double branch1_throughput_at(double p, double gamma_r, int m, int M, int K, double c_r);

// Round-robin unicast from the base station: no outage, rate split n ways.
TradeoffPoint bs_unicast_baseline(int n, double bs_rate);

// Pool-adjacent-violators fit, minimal L2 change making the sequence
// non-decreasing.
std::vector<double> isotonic_non_decreasing(const std::vector<double>& y);

// Piecewise-linear interpolation in log-log space; points need positive
// coordinates, x outside the range extrapolates from the end segments.
double loglog_interp(std::vector<std::pair<double, double>> pts, double x);

// g_c,p_o,t_min_normalized,stderr,seed_count
std::string tradeoff_csv(const std::vector<TradeoffPoint>& points);

// branch,p,T
std::string theory_csv(const TheoryCurve& curve);

}  // namespace d2dsim
