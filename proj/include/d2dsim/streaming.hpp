#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

// One encoding of one chunk.  Sizes are in Mbit and qualities dimensionless
// in (0,1] (SSIM-like); both grow strictly with the level index.
struct ChunkLevel {
  double bits = 0.0;
  double quality = 0.0;
};

struct VideoLibraryStream {
  // levels[file][chunk][level]; every chunk spans one slot
  std::vector<std::vector<std::vector<ChunkLevel>>> levels;

  int n_files() const { return static_cast<int>(levels.size()); }
  int n_chunks(int file) const { return static_cast<int>(levels[file].size()); }
  void validate() const;
};

// Variable-bit-rate synthesis: per (file, chunk) one common size multiplier
// uniform in [1-jitter, 1+jitter] scales all levels, preserving level order.
VideoLibraryStream synth_vbr_library(int n_files, int n_chunks,
                                     const std::vector<ChunkLevel>& base_levels,
                                     double vbr_jitter, Rng& rng);

// file,chunk,level,bits,quality
std::string library_csv(const VideoLibraryStream& lib);
VideoLibraryStream parse_library_csv(std::string_view text);

struct UtilitySpec {
  enum class Kind { kLog, kPower } kind = Kind::kLog;
  double v = 10.0;              // drift-penalty weight
  double power_exponent = 0.5;  // kPower only, in (0,1]
  double d_min = 0.1;           // quality range for the auxiliary maximizer
  double d_max = 1.0;
};

void validate_utility(const UtilitySpec& util);
double utility_value(const UtilitySpec& util, double d);

// argmax over [d_min, d_max] of V*phi(gamma) - theta*gamma (closed form)
double aux_gamma(const UtilitySpec& util, double theta);

// Per-(helper,user) peak service rates in Mbit/slot.  Two-state toggles
// base/low every `period` slots; a table supplies [slot][helper][user]
// explicitly.  jitter > 0 scales every rate by a per-(slot,pair) uniform
// factor in [1-jitter, 1+jitter] drawn from the run seed.
struct RateSpec {
  enum class Kind { kConstant, kTwoState, kTable } kind = Kind::kConstant;
  double base = 1.0;
  double low = 0.0;
  int period = 50;
  double jitter = 0.0;
  std::vector<std::vector<std::vector<double>>> table;
};

struct StreamingInstance {
  int n_users = 0;
  int n_helpers = 0;
  std::vector<int> user_file;                     // streamed file per user
  std::vector<std::vector<int>> helper_users;     // users reachable from h, ascending
  std::vector<std::vector<int>> user_candidates;  // reachable helpers caching the
                                                  // user's file, ascending; empty
                                                  // falls back to the base station
  RateSpec rates;
  int bs_delay = 4;      // slots until a base-station chunk arrives
  double xi = 1.0;       // prebuffer threshold scaling
  int delay_window = 8;  // sliding window (slots) for the max observed delay
};

// shortest-queue helper among candidates, lowest id on ties; -1 when empty
int select_helper(const std::vector<int>& candidates,
                  const std::vector<std::vector<double>>& q, int u);

// argmin over levels of q_star*bits - theta*quality, lower level on ties
int select_quality(const std::vector<ChunkLevel>& levels, double q_star, double theta);

// per helper, the user maximizing Q*C; -1 idles the helper (all products zero)
std::vector<int> schedule_macro_diversity(const std::vector<std::vector<int>>& helper_users,
                                          const std::vector<std::vector<double>>& q,
                                          const std::vector<std::vector<double>>& rates);

// lossy queue recursion, one slot
double step_queue_backlog(double q, double served, double arrivals);

// theta <- max{theta + gamma(theta) - chosen_d, 0}
double step_virtual_queue(double theta, double chosen_d, const UtilitySpec& util);

// psi <- max{psi - 1{playing}, 0} + completed
int step_playback(int psi_prev, bool playing, int completed);

// max delay among chunks that arrived within the last `window` slots, 0 when
// none did; delays[k] pairs with arrival_slots[k], arrival_slots ascending
double window_delay(const std::vector<double>& delays, const std::vector<int>& arrival_slots,
                    int t, int window);

struct PrebufferScan {
  int t_u = -1;
  bool started = false;
};

// first slot with psi >= xi*e and a nonempty buffer; traces are 1-based slots
PrebufferScan prebuffer_start(const std::vector<int>& psi, const std::vector<double>& e,
                              double xi);

struct StreamTraceRow {
  int t = 0;
  int user = 0;
  int helper = -1;  // -1: base-station fallback or no request this slot
  int quality = -1;
  double bits = 0.0;
  double q_after = 0.0;
  double theta_after = 0.0;
  int psi = 0;
  int stall = 0;
};

struct UserStreamSummary {
  double mean_quality = 0.0;  // average chosen quality over requested chunks
  double utility = 0.0;       // phi(mean_quality)
  int t_u = -1;               // playback start slot, -1 if never crossed
  int stalls = 0;
  int chunks_requested = 0;
  int chunks_delivered = 0;
  int chunks_played = 0;
};

struct StreamingResult {
  int horizon = 0;
  std::vector<UserStreamSummary> users;
  double utility_sum = 0.0;
  double mean_backlog_second_half = 0.0;  // total Mbit across all queues
  double max_backlog = 0.0;
  double backlog_slope = 0.0;  // least-squares Mbit/slot over the second half
  double mean_arrival_bits = 0.0;
  bool unstable = false;  // slope above instability_fraction * mean arrivals
  std::vector<StreamTraceRow> trace;
};

// Discrete-time drift-plus-penalty streaming loop.  All control decisions of
// a slot read the start-of-slot queue snapshot; service applies to backlog
// present before the slot's arrivals.  Chunks complete FIFO per (helper,
// user) queue.  Deterministic for a given (instance, library, seed).
StreamingResult run_streaming(const StreamingInstance& inst, const VideoLibraryStream& lib,
                              const UtilitySpec& util, int horizon, std::uint64_t seed,
                              bool record_trace = false,
                              double instability_fraction = 0.05);

// t,user,helper,quality,bits,Q_after,Theta_after,Psi,stall_flag
std::string streaming_trace_csv(const std::vector<StreamTraceRow>& rows);

// user,mean_quality,utility,t_u,stalls,chunks_requested,chunks_delivered,chunks_played
std::string streaming_summary_csv(const StreamingResult& result);

}  // namespace d2dsim
