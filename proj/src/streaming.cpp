#include "d2dsim/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>

#include "d2dsim/csv.hpp"

namespace d2dsim {

void VideoLibraryStream::validate() const {
  if (levels.empty()) throw std::invalid_argument("library: no files");
  for (const auto& file : levels) {
    if (file.empty()) throw std::invalid_argument("library: file without chunks");
    for (const auto& chunk : file) {
      if (chunk.empty()) throw std::invalid_argument("library: chunk without levels");
      for (std::size_t l = 0; l < chunk.size(); ++l) {
        if (!(chunk[l].bits > 0.0) || !(chunk[l].quality > 0.0))
          throw std::invalid_argument("library: bits and quality must be positive");
        if (l > 0 && (chunk[l].bits <= chunk[l - 1].bits ||
                      chunk[l].quality <= chunk[l - 1].quality))
          throw std::invalid_argument("library: levels must increase in bits and quality");
      }
    }
  }
}

VideoLibraryStream synth_vbr_library(int n_files, int n_chunks,
                                     const std::vector<ChunkLevel>& base_levels,
                                     double vbr_jitter, Rng& rng) {
  if (n_files < 1 || n_chunks < 1)
    throw std::invalid_argument("synth_vbr_library: need files and chunks");
  if (vbr_jitter < 0.0 || vbr_jitter >= 1.0)
    throw std::invalid_argument("synth_vbr_library: jitter in [0,1)");
  VideoLibraryStream lib;
  lib.levels.assign(n_files, {});
  for (int f = 0; f < n_files; ++f) {
    lib.levels[f].reserve(n_chunks);
    for (int c = 0; c < n_chunks; ++c) {
      double factor = 1.0 - vbr_jitter + 2.0 * vbr_jitter * rng.next_double();
      std::vector<ChunkLevel> chunk = base_levels;
      for (auto& lv : chunk) lv.bits *= factor;
      lib.levels[f].push_back(std::move(chunk));
    }
  }
  lib.validate();
  return lib;
}

std::string library_csv(const VideoLibraryStream& lib) {
  CsvWriter w({"file", "chunk", "level", "bits", "quality"});
  for (int f = 0; f < lib.n_files(); ++f)
    for (int c = 0; c < lib.n_chunks(f); ++c)
      for (std::size_t l = 0; l < lib.levels[f][c].size(); ++l)
        w.row({std::to_string(f), std::to_string(c), std::to_string(l),
               fmt_double(lib.levels[f][c][l].bits), fmt_double(lib.levels[f][c][l].quality)});
  return w.str();
}

VideoLibraryStream parse_library_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"file", "chunk", "level", "bits",
                                                          "quality"})
    throw std::invalid_argument("library csv: bad header");
  VideoLibraryStream lib;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw std::invalid_argument("library csv: bad row width");
    int f = std::stoi(r[0]), c = std::stoi(r[1]), l = std::stoi(r[2]);
    if (f < 0 || c < 0 || l < 0) throw std::invalid_argument("library csv: negative index");
    if (static_cast<int>(lib.levels.size()) <= f) lib.levels.resize(f + 1);
    if (static_cast<int>(lib.levels[f].size()) <= c) lib.levels[f].resize(c + 1);
    if (static_cast<int>(lib.levels[f][c].size()) <= l) lib.levels[f][c].resize(l + 1);
    lib.levels[f][c][l] = {std::stod(r[3]), std::stod(r[4])};
  }
  lib.validate();
  return lib;
}

void validate_utility(const UtilitySpec& util) {
  if (util.v < 0.0) throw std::invalid_argument("utility: V must be nonnegative");
  if (!(util.d_min > 0.0) || util.d_max < util.d_min)
    throw std::invalid_argument("utility: need 0 < d_min <= d_max");
  if (util.kind == UtilitySpec::Kind::kPower &&
      (util.power_exponent <= 0.0 || util.power_exponent > 1.0))
    throw std::invalid_argument("utility: power exponent in (0,1]");
  // midpoint concavity over the quality range
  for (int i = 1; i + 1 < 17; ++i) {
    double step = (util.d_max - util.d_min) / 16.0;
    if (step == 0.0) break;
    double a = util.d_min + (i - 1) * step, b = util.d_min + (i + 1) * step;
    double mid = utility_value(util, (a + b) / 2.0);
    if (mid < (utility_value(util, a) + utility_value(util, b)) / 2.0 - 1e-12)
      throw std::invalid_argument("utility: not concave on the quality range");
  }
}

double utility_value(const UtilitySpec& util, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("utility_value: d must be positive");
  return util.kind == UtilitySpec::Kind::kLog
             ? std::log(d)
             : std::pow(d, util.power_exponent) / util.power_exponent;
}

double aux_gamma(const UtilitySpec& util, double theta) {
  if (theta < 0.0) throw std::invalid_argument("aux_gamma: theta must be nonnegative");
  if (util.v == 0.0) return util.d_min;
  if (theta == 0.0) return util.d_max;
  double g;
  if (util.kind == UtilitySpec::Kind::kLog) {
    g = util.v / theta;
  } else if (util.power_exponent == 1.0) {
    g = util.v >= theta ? util.d_max : util.d_min;
  } else {
    // phi(d) = d^a / a, so phi'(d) = d^(a-1) and the stationary point solves
    // V d^(a-1) = theta
    double a = util.power_exponent;
    g = std::pow(util.v / theta, 1.0 / (1.0 - a));
  }
  return std::clamp(g, util.d_min, util.d_max);
}

int select_helper(const std::vector<int>& candidates,
                  const std::vector<std::vector<double>>& q, int u) {
  int best = -1;
  for (int h : candidates)
    if (best < 0 || q[h][u] < q[best][u]) best = h;
  return best;
}

int select_quality(const std::vector<ChunkLevel>& levels, double q_star, double theta) {
  if (levels.empty()) throw std::invalid_argument("select_quality: no levels");
  int best = 0;
  double best_obj = q_star * levels[0].bits - theta * levels[0].quality;
  for (std::size_t l = 1; l < levels.size(); ++l) {
    double obj = q_star * levels[l].bits - theta * levels[l].quality;
    if (obj < best_obj) {
      best = static_cast<int>(l);
      best_obj = obj;
    }
  }
  return best;
}

std::vector<int> schedule_macro_diversity(const std::vector<std::vector<int>>& helper_users,
                                          const std::vector<std::vector<double>>& q,
                                          const std::vector<std::vector<double>>& rates) {
  std::vector<int> pick(helper_users.size(), -1);
  for (std::size_t h = 0; h < helper_users.size(); ++h) {
    double best = 0.0;
    for (int u : helper_users[h]) {
      if (rates[h][u] < 0.0)
        throw std::invalid_argument("schedule_macro_diversity: negative rate");
      double w = q[h][u] * rates[h][u];
      if (w > best) {
        best = w;
        pick[h] = u;
      }
    }
  }
  return pick;
}

double step_queue_backlog(double q, double served, double arrivals) {
  return std::max(q - served, 0.0) + arrivals;
}

double step_virtual_queue(double theta, double chosen_d, const UtilitySpec& util) {
  return std::max(theta + aux_gamma(util, theta) - chosen_d, 0.0);
}

int step_playback(int psi_prev, bool playing, int completed) {
  return std::max(psi_prev - (playing ? 1 : 0), 0) + completed;
}

double window_delay(const std::vector<double>& delays, const std::vector<int>& arrival_slots,
                    int t, int window) {
  if (window < 1) throw std::invalid_argument("window_delay: window >= 1");
  if (delays.size() != arrival_slots.size())
    throw std::invalid_argument("window_delay: trace length mismatch");
  double e = 0.0;
  for (std::size_t k = 0; k < delays.size(); ++k)
    if (arrival_slots[k] >= t - window + 1 && arrival_slots[k] <= t)
      e = std::max(e, delays[k]);
  return e;
}

PrebufferScan prebuffer_start(const std::vector<int>& psi, const std::vector<double>& e,
                              double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("prebuffer_start: xi > 0");
  if (psi.size() != e.size()) throw std::invalid_argument("prebuffer_start: length mismatch");
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (psi[i] > 0 && psi[i] >= xi * e[i]) return {static_cast<int>(i) + 1, true};
  return {-1, false};
}

namespace {

enum class Phase { kPrebuffer, kPlaying, kRebuffer, kDone };

struct QueuedChunk {
  double remaining;
  int request_slot;
};

void validate_instance(const StreamingInstance& inst, const VideoLibraryStream& lib,
                       int horizon) {
  if (horizon < 1) throw std::invalid_argument("run_streaming: horizon must be positive");
  if (inst.n_users < 1 || inst.n_helpers < 0)
    throw std::invalid_argument("run_streaming: bad instance sizes");
  if (static_cast<int>(inst.user_file.size()) != inst.n_users ||
      static_cast<int>(inst.user_candidates.size()) != inst.n_users ||
      static_cast<int>(inst.helper_users.size()) != inst.n_helpers)
    throw std::invalid_argument("run_streaming: instance array sizes disagree");
  for (int u = 0; u < inst.n_users; ++u) {
    if (inst.user_file[u] < 0 || inst.user_file[u] >= lib.n_files())
      throw std::invalid_argument("run_streaming: user file out of range");
    for (int h : inst.user_candidates[u]) {
      if (h < 0 || h >= inst.n_helpers)
        throw std::invalid_argument("run_streaming: candidate helper out of range");
      if (!std::binary_search(inst.helper_users[h].begin(), inst.helper_users[h].end(), u))
        throw std::invalid_argument("run_streaming: candidate not in helper neighborhood");
    }
  }
  if (inst.bs_delay < 0 || !(inst.xi > 0.0) || inst.delay_window < 1)
    throw std::invalid_argument("run_streaming: bad playback parameters");
  if (inst.rates.kind == RateSpec::Kind::kTable) {
    if (static_cast<int>(inst.rates.table.size()) < horizon)
      throw std::invalid_argument("run_streaming: rate table shorter than horizon");
    for (const auto& slot : inst.rates.table) {
      if (static_cast<int>(slot.size()) != inst.n_helpers)
        throw std::invalid_argument("run_streaming: rate table helper dim mismatch");
      for (const auto& per_user : slot)
        if (static_cast<int>(per_user.size()) != inst.n_users)
          throw std::invalid_argument("run_streaming: rate table user dim mismatch");
    }
  }
  if (inst.rates.kind == RateSpec::Kind::kTwoState && inst.rates.period < 1)
    throw std::invalid_argument("run_streaming: two-state period >= 1");
  if (inst.rates.jitter < 0.0 || inst.rates.jitter >= 1.0)
    throw std::invalid_argument("run_streaming: rate jitter in [0,1)");
}

}  // namespace

StreamingResult run_streaming(const StreamingInstance& inst, const VideoLibraryStream& lib,
                              const UtilitySpec& util, int horizon, std::uint64_t seed,
                              bool record_trace, double instability_fraction) {
  lib.validate();
  validate_utility(util);
  validate_instance(inst, lib, horizon);

  int nu = inst.n_users, nh = inst.n_helpers;
  std::vector<std::vector<double>> q(nh, std::vector<double>(nu, 0.0));
  std::vector<std::vector<std::deque<QueuedChunk>>> fifo(
      nh, std::vector<std::deque<QueuedChunk>>(nu));
  std::vector<double> theta(nu, 0.0), sum_quality(nu, 0.0);
  std::vector<Phase> phase(nu, Phase::kPrebuffer);
  std::vector<int> psi(nu, 0), t_u(nu, -1), stalls(nu, 0);
  std::vector<int> requested(nu, 0), delivered(nu, 0), played(nu, 0);
  std::vector<std::vector<double>> delays(nu);
  std::vector<std::vector<int>> arrivals(nu);
  std::vector<std::vector<std::pair<int, int>>> bs_by_slot(horizon + 1);  // (user, req slot)

  // per-pair jitter streams; one draw per pair per slot keeps runs
  // decision-order independent
  std::vector<Rng> pair_rng;
  if (inst.rates.jitter > 0.0) {
    Rng root(seed);
    pair_rng.reserve(static_cast<std::size_t>(nh) * nu);
    for (int h = 0; h < nh; ++h)
      for (int u = 0; u < nu; ++u)
        pair_rng.push_back(root.fork(static_cast<std::uint64_t>(h) * nu + u));
  }

  StreamingResult res;
  res.horizon = horizon;
  if (record_trace) res.trace.reserve(static_cast<std::size_t>(horizon) * nu);

  std::vector<std::vector<double>> rate(nh, std::vector<double>(nu, 0.0));
  std::vector<double> totals(horizon, 0.0);
  double arrivals_total = 0.0;

  std::vector<int> req_helper(nu), req_level(nu), a_t(nu);
  std::vector<double> req_bits(nu), chosen_d(nu);

  for (int t = 1; t <= horizon; ++t) {
    for (int h = 0; h < nh; ++h)
      for (int u = 0; u < nu; ++u) {
        double r;
        switch (inst.rates.kind) {
          case RateSpec::Kind::kConstant:
            r = inst.rates.base;
            break;
          case RateSpec::Kind::kTwoState:
            r = ((t - 1) / inst.rates.period) % 2 == 0 ? inst.rates.base : inst.rates.low;
            break;
          default:
            r = inst.rates.table[t - 1][h][u];
        }
        if (inst.rates.jitter > 0.0) {
          double f = 1.0 - inst.rates.jitter +
                     2.0 * inst.rates.jitter * pair_rng[h * nu + u].next_double();
          r *= f;
        }
        if (r < 0.0) throw std::invalid_argument("run_streaming: negative rate");
        rate[h][u] = r;
      }

    // congestion control from the start-of-slot snapshot
    std::fill(req_helper.begin(), req_helper.end(), -2);  // -2: no request this slot
    for (int u = 0; u < nu; ++u) {
      int f = inst.user_file[u];
      if (requested[u] >= lib.n_chunks(f)) continue;
      const auto& levels = lib.levels[f][requested[u]];
      int lvl;
      if (inst.user_candidates[u].empty()) {
        lvl = select_quality(levels, 0.0, theta[u]);
        int arrive = t + inst.bs_delay;
        if (arrive <= horizon) bs_by_slot[arrive].push_back({u, t});
        req_helper[u] = -1;
      } else {
        int h = select_helper(inst.user_candidates[u], q, u);
        lvl = select_quality(levels, q[h][u], theta[u]);
        req_helper[u] = h;
      }
      req_level[u] = lvl;
      req_bits[u] = levels[lvl].bits;
      chosen_d[u] = levels[lvl].quality;
      sum_quality[u] += levels[lvl].quality;
      ++requested[u];
    }

    std::vector<int> pick = schedule_macro_diversity(inst.helper_users, q, rate);

    // service applies to backlog present before this slot's arrivals
    std::fill(a_t.begin(), a_t.end(), 0);
    for (int h = 0; h < nh; ++h) {
      int u = pick[h];
      if (u < 0) continue;
      double budget = rate[h][u];
      auto& dq = fifo[h][u];
      while (budget > 0.0 && !dq.empty()) {
        double take = std::min(budget, dq.front().remaining);
        dq.front().remaining -= take;
        budget -= take;
        if (dq.front().remaining <= 1e-12) {
          ++a_t[u];
          ++delivered[u];
          arrivals[u].push_back(t);
          delays[u].push_back(t - dq.front().request_slot + 1);
          dq.pop_front();
        }
      }
      q[h][u] = step_queue_backlog(q[h][u], rate[h][u], 0.0);
    }

    for (const auto& [u, req_slot] : bs_by_slot[t]) {
      ++a_t[u];
      ++delivered[u];
      arrivals[u].push_back(t);
      delays[u].push_back(t - req_slot + 1);
    }

    for (int u = 0; u < nu; ++u) {
      if (req_helper[u] >= 0) {
        int h = req_helper[u];
        fifo[h][u].push_back({req_bits[u], t});
        q[h][u] += req_bits[u];
        arrivals_total += req_bits[u];
      }
      if (req_helper[u] != -2) theta[u] = step_virtual_queue(theta[u], chosen_d[u], util);
    }

    // playback and phase transitions
    for (int u = 0; u < nu; ++u) {
      int stall_flag = 0;
      bool playing = phase[u] == Phase::kPlaying;
      int before = psi[u];
      psi[u] = step_playback(before, playing, a_t[u]);
      if (playing && before > 0) ++played[u];
      int total_chunks = lib.n_chunks(inst.user_file[u]);
      if (phase[u] == Phase::kPrebuffer || phase[u] == Phase::kRebuffer) {
        double e = window_delay(delays[u], arrivals[u], t, inst.delay_window);
        if (psi[u] > 0 && psi[u] >= inst.xi * e) {
          phase[u] = Phase::kPlaying;
          if (t_u[u] < 0) t_u[u] = t;
        }
      } else if (phase[u] == Phase::kPlaying) {
        if (played[u] == total_chunks) {
          phase[u] = Phase::kDone;
        } else if (psi[u] == 0) {
          ++stalls[u];
          stall_flag = 1;
          phase[u] = Phase::kRebuffer;
        }
      }
      if (record_trace) {
        StreamTraceRow row;
        row.t = t;
        row.user = u;
        row.helper = req_helper[u] == -2 ? -1 : req_helper[u];
        row.quality = req_helper[u] == -2 ? -1 : req_level[u];
        row.bits = req_helper[u] == -2 ? 0.0 : req_bits[u];
        row.q_after = req_helper[u] >= 0 ? q[req_helper[u]][u] : 0.0;
        row.theta_after = theta[u];
        row.psi = psi[u];
        row.stall = stall_flag;
        res.trace.push_back(row);
      }
    }

    double total_q = 0.0;
    for (int h = 0; h < nh; ++h)
      for (int u = 0; u < nu; ++u) total_q += q[h][u];
    totals[t - 1] = total_q;
    res.max_backlog = std::max(res.max_backlog, total_q);
  }

  res.users.resize(nu);
  for (int u = 0; u < nu; ++u) {
    UserStreamSummary& s = res.users[u];
    s.chunks_requested = requested[u];
    s.chunks_delivered = delivered[u];
    s.chunks_played = played[u];
    s.t_u = t_u[u];
    s.stalls = stalls[u];
    s.mean_quality = requested[u] > 0 ? sum_quality[u] / requested[u] : 0.0;
    s.utility = requested[u] > 0 ? utility_value(util, s.mean_quality) : 0.0;
    res.utility_sum += s.utility;
  }

  int half = horizon / 2;
  int tail = horizon - half;
  double mean_y = 0.0, mean_x = 0.0;
  for (int i = half; i < horizon; ++i) {
    mean_y += totals[i];
    mean_x += i + 1;
  }
  mean_y /= tail;
  mean_x /= tail;
  res.mean_backlog_second_half = mean_y;
  if (tail >= 2) {
    double num = 0.0, den = 0.0;
    for (int i = half; i < horizon; ++i) {
      num += (i + 1 - mean_x) * (totals[i] - mean_y);
      den += (i + 1 - mean_x) * (i + 1 - mean_x);
    }
    res.backlog_slope = den > 0.0 ? num / den : 0.0;
  }
  res.mean_arrival_bits = arrivals_total / horizon;
  res.unstable = res.mean_arrival_bits > 0.0 &&
                 res.backlog_slope > instability_fraction * res.mean_arrival_bits;
  return res;
}

std::string streaming_trace_csv(const std::vector<StreamTraceRow>& rows) {
  CsvWriter w({"t", "user", "helper", "quality", "bits", "Q_after", "Theta_after", "Psi",
               "stall_flag"});
  for (const auto& r : rows)
    w.row({std::to_string(r.t), std::to_string(r.user), std::to_string(r.helper),
           std::to_string(r.quality), fmt_double(r.bits), fmt_double(r.q_after),
           fmt_double(r.theta_after), std::to_string(r.psi), std::to_string(r.stall)});
  return w.str();
}

std::string streaming_summary_csv(const StreamingResult& result) {
  CsvWriter w({"user", "mean_quality", "utility", "t_u", "stalls", "chunks_requested",
               "chunks_delivered", "chunks_played"});
  for (std::size_t u = 0; u < result.users.size(); ++u) {
    const auto& s = result.users[u];
    w.row({std::to_string(u), fmt_double(s.mean_quality), fmt_double(s.utility),
           std::to_string(s.t_u), std::to_string(s.stalls), std::to_string(s.chunks_requested),
           std::to_string(s.chunks_delivered), std::to_string(s.chunks_played)});
  }
  return w.str();
}

}  // namespace d2dsim
