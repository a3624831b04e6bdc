#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "d2dsim/streaming.hpp"
#include "d2dsim/throughput.hpp"

namespace d2dsim {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct TradeoffConfig {
  int n_users = 10000;
  int library_files = 1000;
  double zipf_exponent = 0.6;
  int cache_slots_per_node = 1;
  std::vector<int> clusters_per_axis = {2, 3, 4, 5};
  int rounds = 1000;
  int seeds = 2;
  double protocol_guard_delta = 0.2;
  int reuse_k_override = 0;
  std::string caching = "optimal";  // optimal | zipf | deterministic
  int admission_cap_links_per_cluster = 0;
  double link_rate_files_per_slot = 1.0;
  bool emit_theory_branch1 = true;
  bool emit_geometry = false;
};

struct FemtoConfig {
  int n_users = 8;
  int n_helpers = 3;
  int n_files = 6;
  double zipf_exponent = 0.6;
  int cache_slots_per_helper = 2;
  double helper_rate_min_files_per_slot = 0.5;
  double helper_rate_max_files_per_slot = 4.0;
  double helper_reach_probability = 0.7;
  double bs_rate_files_per_slot = 0.25;
  int lp_pivot_cap = 100000;
  double lp_tolerance = 1e-9;
};

struct CodedConfig {
  int n_users = 3;
  int library_files = 3;
  int cache_slots_per_node = 2;
  std::vector<int> requests;  // empty: user u requests file u mod m
};

struct StreamingConfig {
  int n_users = 20;
  int n_helpers = 4;
  int candidates_per_user = 2;  // ring neighborhoods (u+j) mod n_helpers
  int library_files = 4;
  int chunks_per_file = 2000;
  std::vector<double> level_bits_mbit = {0.5, 1.0, 1.5};
  std::vector<double> level_quality = {0.8, 0.9, 0.96};
  double vbr_jitter = 0.1;
  std::string rate_model = "constant";  // constant | two_state
  double rate_base_mbit_per_slot = 8.0;
  double rate_low_mbit_per_slot = 2.0;
  int rate_period_slots = 50;
  double rate_jitter = 0.0;
  std::string utility = "log";  // log | power
  double utility_v = 10.0;
  double power_exponent = 0.5;
  int horizon_slots = 2000;
  double prebuffer_xi = 1.0;
  int delay_window_slots = 8;
  int bs_delay_slots = 4;
  bool record_trace = false;
};

struct ScalingConfig {
  double gamma_r = 0.6;
  int library_files = 1000;
  int cache_slots_per_node = 1;
  int reuse_k = 4;
  double link_rate_files_per_slot = 1.0;
  double cluster_size_nodes = 100.0;
  double fit_a = 0.0;
  double fit_b = 0.0;
  double fit_d = 0.0;
  double fit_a_gamma = 0.0;
  double rho2 = 0.0;
};

struct BaselineConfig {
  int n_users = 10000;
  double bs_rate_files_per_slot = 1.0;
};

struct ExperimentConfig {
  std::string kind;  // tradeoff | femto-place | coded | streaming | scaling | baseline
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
  TradeoffConfig tradeoff;
  FemtoConfig femto;
  CodedConfig coded;
  StreamingConfig streaming;
  ScalingConfig scaling;
  BaselineConfig baseline;
};

// JSON round trip; parse errors name the offending field.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_json(const ExperimentConfig& cfg);

struct RunManifest {
  std::string config_sha256;
  std::string tool_version;
  std::string rng_version;
  std::vector<std::pair<std::string, std::string>> outputs;  // (file name, sha256)
};

std::string manifest_json(const RunManifest& m);

// Runs the configured experiment, writes its CSVs plus manifest.json under
// cfg.out_dir, and returns the manifest.  Identical configs and versions
// produce byte-identical outputs regardless of worker count.
RunManifest run_experiment(const ExperimentConfig& cfg);

// Derived helpers shared with tests: the synthetic streaming instance and
// library described by a StreamingConfig.
StreamingInstance streaming_instance_from_config(const StreamingConfig& sc);
VideoLibraryStream streaming_library_from_config(const StreamingConfig& sc,
                                                 std::uint64_t seed);
UtilitySpec utility_from_config(const StreamingConfig& sc);

struct CurveComparison {
  int points = 0;  // simulated points inside the outage overlap
  double max_rel_deviation = 0.0;
  double mean_rel_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string report_csv;  // p,simulated,theoretical,rel_deviation
};

// Compares two curve CSVs on their overlapping outage range.  Accepts either
// a simulated curve (p_o, t_min_normalized) or a theoretical one (p, T, with
// branch-1 rows selected); the second input is interpolated log-log at the
// first input's abscissae.  Disjoint ranges raise a no-overlap error.
CurveComparison compare_curves(const std::string& first_csv, const std::string& second_csv,
                               double tolerance);

}  // namespace d2dsim
