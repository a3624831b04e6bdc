#include "d2dsim/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "json.hpp"

#include "d2dsim/coded.hpp"
#include "d2dsim/csv.hpp"
#include "d2dsim/femto.hpp"
#include "d2dsim/geometry.hpp"
#include "d2dsim/hash.hpp"
#include "d2dsim/request_model.hpp"

namespace d2dsim {

namespace {

using nlohmann::json;

template <typename T>
T field_or(const json& j, const char* section, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: bad value for ") + section +
                                (*section ? "." : "") + key);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  ExperimentConfig cfg;
  cfg.kind = field_or<std::string>(j, "", "kind", "");
  cfg.seed = field_or<std::uint64_t>(j, "", "seed", cfg.seed);
  cfg.workers = field_or<int>(j, "", "workers", cfg.workers);
  cfg.out_dir = field_or<std::string>(j, "", "out_dir", cfg.out_dir);

  if (j.contains("tradeoff")) {
    const json& s = j.at("tradeoff");
    TradeoffConfig& t = cfg.tradeoff;
    t.n_users = field_or(s, "tradeoff", "n_users", t.n_users);
    t.library_files = field_or(s, "tradeoff", "library_files", t.library_files);
    t.zipf_exponent = field_or(s, "tradeoff", "zipf_exponent", t.zipf_exponent);
    t.cache_slots_per_node =
        field_or(s, "tradeoff", "cache_slots_per_node", t.cache_slots_per_node);
    t.clusters_per_axis = field_or(s, "tradeoff", "clusters_per_axis", t.clusters_per_axis);
    t.rounds = field_or(s, "tradeoff", "rounds", t.rounds);
    t.seeds = field_or(s, "tradeoff", "seeds", t.seeds);
    t.protocol_guard_delta =
        field_or(s, "tradeoff", "protocol_guard_delta", t.protocol_guard_delta);
    t.reuse_k_override = field_or(s, "tradeoff", "reuse_k_override", t.reuse_k_override);
    t.caching = field_or(s, "tradeoff", "caching", t.caching);
    t.admission_cap_links_per_cluster = field_or(s, "tradeoff", "admission_cap_links_per_cluster",
                                                 t.admission_cap_links_per_cluster);
    t.link_rate_files_per_slot =
        field_or(s, "tradeoff", "link_rate_files_per_slot", t.link_rate_files_per_slot);
    t.emit_theory_branch1 =
        field_or(s, "tradeoff", "emit_theory_branch1", t.emit_theory_branch1);
    t.emit_geometry = field_or(s, "tradeoff", "emit_geometry", t.emit_geometry);
  }
  if (j.contains("femto")) {
    const json& s = j.at("femto");
    FemtoConfig& f = cfg.femto;
    f.n_users = field_or(s, "femto", "n_users", f.n_users);
    f.n_helpers = field_or(s, "femto", "n_helpers", f.n_helpers);
    f.n_files = field_or(s, "femto", "n_files", f.n_files);
    f.zipf_exponent = field_or(s, "femto", "zipf_exponent", f.zipf_exponent);
    f.cache_slots_per_helper =
        field_or(s, "femto", "cache_slots_per_helper", f.cache_slots_per_helper);
    f.helper_rate_min_files_per_slot = field_or(s, "femto", "helper_rate_min_files_per_slot",
                                                f.helper_rate_min_files_per_slot);
    f.helper_rate_max_files_per_slot = field_or(s, "femto", "helper_rate_max_files_per_slot",
                                                f.helper_rate_max_files_per_slot);
    f.helper_reach_probability =
        field_or(s, "femto", "helper_reach_probability", f.helper_reach_probability);
    f.bs_rate_files_per_slot =
        field_or(s, "femto", "bs_rate_files_per_slot", f.bs_rate_files_per_slot);
    f.lp_pivot_cap = field_or(s, "femto", "lp_pivot_cap", f.lp_pivot_cap);
    f.lp_tolerance = field_or(s, "femto", "lp_tolerance", f.lp_tolerance);
  }
  if (j.contains("coded")) {
    const json& s = j.at("coded");
    CodedConfig& c = cfg.coded;
    c.n_users = field_or(s, "coded", "n_users", c.n_users);
    c.library_files = field_or(s, "coded", "library_files", c.library_files);
    c.cache_slots_per_node = field_or(s, "coded", "cache_slots_per_node", c.cache_slots_per_node);
    c.requests = field_or(s, "coded", "requests", c.requests);
  }
  if (j.contains("streaming")) {
    const json& s = j.at("streaming");
    StreamingConfig& v = cfg.streaming;
    v.n_users = field_or(s, "streaming", "n_users", v.n_users);
    v.n_helpers = field_or(s, "streaming", "n_helpers", v.n_helpers);
    v.candidates_per_user = field_or(s, "streaming", "candidates_per_user", v.candidates_per_user);
    v.library_files = field_or(s, "streaming", "library_files", v.library_files);
    v.chunks_per_file = field_or(s, "streaming", "chunks_per_file", v.chunks_per_file);
    v.level_bits_mbit = field_or(s, "streaming", "level_bits_mbit", v.level_bits_mbit);
    v.level_quality = field_or(s, "streaming", "level_quality", v.level_quality);
    v.vbr_jitter = field_or(s, "streaming", "vbr_jitter", v.vbr_jitter);
    v.rate_model = field_or(s, "streaming", "rate_model", v.rate_model);
    v.rate_base_mbit_per_slot =
        field_or(s, "streaming", "rate_base_mbit_per_slot", v.rate_base_mbit_per_slot);
    v.rate_low_mbit_per_slot =
        field_or(s, "streaming", "rate_low_mbit_per_slot", v.rate_low_mbit_per_slot);
    v.rate_period_slots = field_or(s, "streaming", "rate_period_slots", v.rate_period_slots);
    v.rate_jitter = field_or(s, "streaming", "rate_jitter", v.rate_jitter);
    v.utility = field_or(s, "streaming", "utility", v.utility);
    v.utility_v = field_or(s, "streaming", "utility_v", v.utility_v);
    v.power_exponent = field_or(s, "streaming", "power_exponent", v.power_exponent);
    v.horizon_slots = field_or(s, "streaming", "horizon_slots", v.horizon_slots);
    v.prebuffer_xi = field_or(s, "streaming", "prebuffer_xi", v.prebuffer_xi);
    v.delay_window_slots = field_or(s, "streaming", "delay_window_slots", v.delay_window_slots);
    v.bs_delay_slots = field_or(s, "streaming", "bs_delay_slots", v.bs_delay_slots);
    v.record_trace = field_or(s, "streaming", "record_trace", v.record_trace);
  }
  if (j.contains("scaling")) {
    const json& s = j.at("scaling");
    ScalingConfig& c = cfg.scaling;
    c.gamma_r = field_or(s, "scaling", "gamma_r", c.gamma_r);
    c.library_files = field_or(s, "scaling", "library_files", c.library_files);
    c.cache_slots_per_node = field_or(s, "scaling", "cache_slots_per_node", c.cache_slots_per_node);
    c.reuse_k = field_or(s, "scaling", "reuse_k", c.reuse_k);
    c.link_rate_files_per_slot =
        field_or(s, "scaling", "link_rate_files_per_slot", c.link_rate_files_per_slot);
    c.cluster_size_nodes = field_or(s, "scaling", "cluster_size_nodes", c.cluster_size_nodes);
    c.fit_a = field_or(s, "scaling", "fit_a", c.fit_a);
    c.fit_b = field_or(s, "scaling", "fit_b", c.fit_b);
    c.fit_d = field_or(s, "scaling", "fit_d", c.fit_d);
    c.fit_a_gamma = field_or(s, "scaling", "fit_a_gamma", c.fit_a_gamma);
    c.rho2 = field_or(s, "scaling", "rho2", c.rho2);
  }
  if (j.contains("baseline")) {
    const json& s = j.at("baseline");
    cfg.baseline.n_users = field_or(s, "baseline", "n_users", cfg.baseline.n_users);
    cfg.baseline.bs_rate_files_per_slot =
        field_or(s, "baseline", "bs_rate_files_per_slot", cfg.baseline.bs_rate_files_per_slot);
  }
  return cfg;
}

std::string config_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = cfg.kind;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  const TradeoffConfig& t = cfg.tradeoff;
  j["tradeoff"] = {{"n_users", t.n_users},
                   {"library_files", t.library_files},
                   {"zipf_exponent", t.zipf_exponent},
                   {"cache_slots_per_node", t.cache_slots_per_node},
                   {"clusters_per_axis", t.clusters_per_axis},
                   {"rounds", t.rounds},
                   {"seeds", t.seeds},
                   {"protocol_guard_delta", t.protocol_guard_delta},
                   {"reuse_k_override", t.reuse_k_override},
                   {"caching", t.caching},
                   {"admission_cap_links_per_cluster", t.admission_cap_links_per_cluster},
                   {"link_rate_files_per_slot", t.link_rate_files_per_slot},
                   {"emit_theory_branch1", t.emit_theory_branch1},
                   {"emit_geometry", t.emit_geometry}};
  const FemtoConfig& f = cfg.femto;
  j["femto"] = {{"n_users", f.n_users},
                {"n_helpers", f.n_helpers},
                {"n_files", f.n_files},
                {"zipf_exponent", f.zipf_exponent},
                {"cache_slots_per_helper", f.cache_slots_per_helper},
                {"helper_rate_min_files_per_slot", f.helper_rate_min_files_per_slot},
                {"helper_rate_max_files_per_slot", f.helper_rate_max_files_per_slot},
                {"helper_reach_probability", f.helper_reach_probability},
                {"bs_rate_files_per_slot", f.bs_rate_files_per_slot},
                {"lp_pivot_cap", f.lp_pivot_cap},
                {"lp_tolerance", f.lp_tolerance}};
  const CodedConfig& c = cfg.coded;
  j["coded"] = {{"n_users", c.n_users},
                {"library_files", c.library_files},
                {"cache_slots_per_node", c.cache_slots_per_node},
                {"requests", c.requests}};
  const StreamingConfig& v = cfg.streaming;
  j["streaming"] = {{"n_users", v.n_users},
                    {"n_helpers", v.n_helpers},
                    {"candidates_per_user", v.candidates_per_user},
                    {"library_files", v.library_files},
                    {"chunks_per_file", v.chunks_per_file},
                    {"level_bits_mbit", v.level_bits_mbit},
                    {"level_quality", v.level_quality},
                    {"vbr_jitter", v.vbr_jitter},
                    {"rate_model", v.rate_model},
                    {"rate_base_mbit_per_slot", v.rate_base_mbit_per_slot},
                    {"rate_low_mbit_per_slot", v.rate_low_mbit_per_slot},
                    {"rate_period_slots", v.rate_period_slots},
                    {"rate_jitter", v.rate_jitter},
                    {"utility", v.utility},
                    {"utility_v", v.utility_v},
                    {"power_exponent", v.power_exponent},
                    {"horizon_slots", v.horizon_slots},
                    {"prebuffer_xi", v.prebuffer_xi},
                    {"delay_window_slots", v.delay_window_slots},
                    {"bs_delay_slots", v.bs_delay_slots},
                    {"record_trace", v.record_trace}};
  const ScalingConfig& sc = cfg.scaling;
  j["scaling"] = {{"gamma_r", sc.gamma_r},
                  {"library_files", sc.library_files},
                  {"cache_slots_per_node", sc.cache_slots_per_node},
                  {"reuse_k", sc.reuse_k},
                  {"link_rate_files_per_slot", sc.link_rate_files_per_slot},
                  {"cluster_size_nodes", sc.cluster_size_nodes},
                  {"fit_a", sc.fit_a},
                  {"fit_b", sc.fit_b},
                  {"fit_d", sc.fit_d},
                  {"fit_a_gamma", sc.fit_a_gamma},
                  {"rho2", sc.rho2}};
  j["baseline"] = {{"n_users", cfg.baseline.n_users},
                   {"bs_rate_files_per_slot", cfg.baseline.bs_rate_files_per_slot}};
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["config_sha256"] = m.config_sha256;
  j["tool_version"] = m.tool_version;
  j["rng_version"] = m.rng_version;
  json outs = json::object();
  for (const auto& [name, hash] : m.outputs) outs[name] = hash;
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

StreamingInstance streaming_instance_from_config(const StreamingConfig& sc) {
  if (sc.n_users < 1 || sc.n_helpers < 0 || sc.candidates_per_user < 0)
    throw std::invalid_argument("config: streaming sizes must be nonnegative");
  StreamingInstance inst;
  inst.n_users = sc.n_users;
  inst.n_helpers = sc.n_helpers;
  inst.user_file.resize(sc.n_users);
  inst.user_candidates.resize(sc.n_users);
  inst.helper_users.assign(sc.n_helpers, {});
  for (int u = 0; u < sc.n_users; ++u) {
    inst.user_file[u] = u % std::max(1, sc.library_files);
    if (sc.n_helpers > 0) {
      int span = std::min(sc.candidates_per_user, sc.n_helpers);
      for (int k = 0; k < span; ++k) inst.user_candidates[u].push_back((u + k) % sc.n_helpers);
      std::sort(inst.user_candidates[u].begin(), inst.user_candidates[u].end());
      for (int h : inst.user_candidates[u]) inst.helper_users[h].push_back(u);
    }
  }
  if (sc.rate_model == "constant")
    inst.rates.kind = RateSpec::Kind::kConstant;
  else if (sc.rate_model == "two_state")
    inst.rates.kind = RateSpec::Kind::kTwoState;
  else
    throw std::invalid_argument("config: streaming.rate_model must be constant or two_state");
  inst.rates.base = sc.rate_base_mbit_per_slot;
  inst.rates.low = sc.rate_low_mbit_per_slot;
  inst.rates.period = sc.rate_period_slots;
  inst.rates.jitter = sc.rate_jitter;
  inst.bs_delay = sc.bs_delay_slots;
  inst.xi = sc.prebuffer_xi;
  inst.delay_window = sc.delay_window_slots;
  return inst;
}

VideoLibraryStream streaming_library_from_config(const StreamingConfig& sc,
                                                 std::uint64_t seed) {
  if (sc.level_bits_mbit.empty() || sc.level_bits_mbit.size() != sc.level_quality.size())
    throw std::invalid_argument(
        "config: streaming.level_bits_mbit and level_quality must align");
  std::vector<ChunkLevel> base;
  base.reserve(sc.level_bits_mbit.size());
  for (std::size_t l = 0; l < sc.level_bits_mbit.size(); ++l)
    base.push_back({sc.level_bits_mbit[l], sc.level_quality[l]});
  Rng rng = Rng(seed).fork(0x11b);
  return synth_vbr_library(sc.library_files, sc.chunks_per_file, base, sc.vbr_jitter, rng);
}

UtilitySpec utility_from_config(const StreamingConfig& sc) {
  UtilitySpec util;
  if (sc.utility == "log")
    util.kind = UtilitySpec::Kind::kLog;
  else if (sc.utility == "power")
    util.kind = UtilitySpec::Kind::kPower;
  else
    throw std::invalid_argument("config: streaming.utility must be log or power");
  util.v = sc.utility_v;
  util.power_exponent = sc.power_exponent;
  util.d_min = *std::min_element(sc.level_quality.begin(), sc.level_quality.end());
  util.d_max = *std::max_element(sc.level_quality.begin(), sc.level_quality.end());
  return util;
}

namespace {

using Outputs = std::vector<std::pair<std::string, std::string>>;

CachingKind caching_kind_from(const std::string& name) {
  if (name == "optimal") return CachingKind::kOptimal;
  if (name == "zipf") return CachingKind::kZipf;
  if (name == "deterministic") return CachingKind::kDeterministic;
  throw std::invalid_argument("config: tradeoff.caching must be optimal, zipf or deterministic");
}

Outputs run_tradeoff_kind(const ExperimentConfig& cfg) {
  const TradeoffConfig& t = cfg.tradeoff;
  TradeoffParams p;
  p.n = t.n_users;
  p.m = t.library_files;
  p.gamma_r = t.zipf_exponent;
  p.M = t.cache_slots_per_node;
  p.clusters_per_axis = t.clusters_per_axis;
  p.rounds = t.rounds;
  p.seeds = t.seeds;
  p.seed = cfg.seed;
  p.delta = t.protocol_guard_delta;
  p.reuse_k_override = t.reuse_k_override;
  p.caching = caching_kind_from(t.caching);
  p.admission_cap = t.admission_cap_links_per_cluster;
  p.workers = cfg.workers;
  p.link_rate = t.link_rate_files_per_slot;

  Outputs out;
  out.emplace_back("tradeoff.csv", tradeoff_csv(simulate_tradeoff(p)));

  int reuse_k = t.reuse_k_override > 0 ? t.reuse_k_override : reuse_factor(t.protocol_guard_delta);
  if (t.emit_theory_branch1) {
    ScalingCurveParams sc;
    sc.gamma_r = t.zipf_exponent;
    NetworkGeometry geo = grid_nodes(t.n_users);
    int c0 = *std::min_element(t.clusters_per_axis.begin(), t.clusters_per_axis.end());
    double g_c = static_cast<double>(geo.n) / (static_cast<double>(c0) * c0);
    out.emplace_back("theory.csv",
                     theory_csv(theorem_curve(sc, t.library_files, t.cache_slots_per_node,
                                              reuse_k, t.link_rate_files_per_slot, g_c)));
  }
  if (t.emit_geometry) {
    NetworkGeometry geo = grid_nodes(t.n_users);
    ClusterPartition part = partition_clusters(geo, 1.0 / t.clusters_per_axis.front());
    out.emplace_back("geometry.csv",
                     geometry_csv(geo, part, color_clusters(part, reuse_k)));
  }
  return out;
}

Outputs run_femto_kind(const ExperimentConfig& cfg) {
  const FemtoConfig& f = cfg.femto;
  if (f.helper_rate_min_files_per_slot < 0.0 ||
      f.helper_rate_max_files_per_slot < f.helper_rate_min_files_per_slot)
    throw std::invalid_argument("config: femto.helper_rate_min/max out of order");
  if (f.helper_reach_probability < 0.0 || f.helper_reach_probability > 1.0)
    throw std::invalid_argument("config: femto.helper_reach_probability in [0,1]");

  FemtoInstance inst;
  inst.n_users = f.n_users;
  inst.n_helpers = f.n_helpers;
  inst.n_files = f.n_files;
  inst.file_pmf = zipf_pmf(f.n_files, f.zipf_exponent);
  inst.bs_rate.assign(f.n_users, f.bs_rate_files_per_slot);
  inst.capacity.assign(f.n_helpers, f.cache_slots_per_helper);
  Rng reach_rng = Rng(cfg.seed).fork(1);
  Rng rate_rng = Rng(cfg.seed).fork(2);
  inst.helper_rate.assign(f.n_helpers, std::vector<double>(f.n_users, 0.0));
  for (int h = 0; h < f.n_helpers; ++h)
    for (int u = 0; u < f.n_users; ++u) {
      bool reachable = reach_rng.next_double() < f.helper_reach_probability;
      double rate = f.helper_rate_min_files_per_slot +
                    (f.helper_rate_max_files_per_slot - f.helper_rate_min_files_per_slot) *
                        rate_rng.next_double();
      if (reachable) inst.helper_rate[h][u] = rate;
    }
  inst.validate();

  Placement greedy = greedy_uncoded_placement(inst);
  Placement coded = coded_placement(inst, f.lp_pivot_cap, f.lp_tolerance);
  if (!coded.converged)
    throw std::runtime_error("femto-place: LP did not converge within the pivot cap");

  CsvWriter summary({"method", "expected_delay", "saving", "converged", "iterations"});
  summary.row({"bs_only", fmt_double(bs_only_delay(inst)), fmt_double(0.0), "1", "0"});
  summary.row({"greedy", fmt_double(greedy.expected_delay), fmt_double(greedy.saving),
               greedy.converged ? "1" : "0", std::to_string(greedy.iterations)});
  summary.row({"coded", fmt_double(coded.expected_delay), fmt_double(coded.saving),
               coded.converged ? "1" : "0", std::to_string(coded.iterations)});

  Outputs out;
  out.emplace_back("placement_greedy.csv", placement_csv(greedy));
  out.emplace_back("placement_coded.csv", placement_csv(coded));
  out.emplace_back("femto_summary.csv", summary.str());
  return out;
}

Outputs run_coded_kind(const ExperimentConfig& cfg) {
  const CodedConfig& c = cfg.coded;
  SubpacketPlan plan = subpacketize(c.n_users, c.library_files, c.cache_slots_per_node);
  std::vector<int> requests = c.requests;
  if (requests.empty()) {
    requests.resize(c.n_users);
    for (int u = 0; u < c.n_users; ++u) requests[u] = u % c.library_files;
  }
  if (static_cast<int>(requests.size()) != c.n_users)
    throw std::invalid_argument("config: coded.requests must list one file per user");
  for (int r : requests)
    if (r < 0 || r >= c.library_files)
      throw std::invalid_argument("config: coded.requests entry out of range");

  std::vector<Transmission> tx = deliver(plan, requests);
  bool ok = decode_check(plan, requests, tx);
  if (!ok) throw std::runtime_error("coded: decode check failed");
  auto [ln, ld] = normalized_load(plan, tx);
  auto [en, ed] = expected_normalized_load(plan);

  CsvWriter summary({"n", "m", "M", "t", "transmissions", "packets_per_file", "load_num",
                     "load_den", "expected_load_num", "expected_load_den", "decode_ok"});
  summary.row({std::to_string(plan.n), std::to_string(plan.m), std::to_string(plan.M),
               std::to_string(plan.t), std::to_string(tx.size()),
               std::to_string(plan.packets_per_file), std::to_string(ln), std::to_string(ld),
               std::to_string(en), std::to_string(ed), ok ? "1" : "0"});

  Outputs out;
  out.emplace_back("session.txt", session_dump(plan, tx));
  out.emplace_back("coded_summary.csv", summary.str());
  return out;
}

Outputs run_streaming_kind(const ExperimentConfig& cfg) {
  const StreamingConfig& sc = cfg.streaming;
  StreamingInstance inst = streaming_instance_from_config(sc);
  VideoLibraryStream lib = streaming_library_from_config(sc, cfg.seed);
  UtilitySpec util = utility_from_config(sc);
  StreamingResult res =
      run_streaming(inst, lib, util, sc.horizon_slots, cfg.seed, sc.record_trace);

  CsvWriter agg({"utility_sum", "mean_backlog_second_half_mbit", "max_backlog_mbit",
                 "backlog_slope_mbit_per_slot", "mean_arrival_mbit_per_slot", "unstable"});
  agg.row({fmt_double(res.utility_sum), fmt_double(res.mean_backlog_second_half),
           fmt_double(res.max_backlog), fmt_double(res.backlog_slope),
           fmt_double(res.mean_arrival_bits), res.unstable ? "1" : "0"});

  Outputs out;
  out.emplace_back("library.csv", library_csv(lib));
  out.emplace_back("streaming_summary.csv", streaming_summary_csv(res));
  out.emplace_back("streaming_aggregate.csv", agg.str());
  if (sc.record_trace) out.emplace_back("trace.csv", streaming_trace_csv(res.trace));
  return out;
}

Outputs run_scaling_kind(const ExperimentConfig& cfg) {
  const ScalingConfig& s = cfg.scaling;
  ScalingCurveParams sc;
  sc.gamma_r = s.gamma_r;
  sc.rho2 = s.rho2;
  sc.fit_a = s.fit_a;
  sc.fit_b = s.fit_b;
  sc.fit_d = s.fit_d;
  sc.fit_a_gamma = s.fit_a_gamma;
  TheoryCurve curve = theorem_curve(sc, s.library_files, s.cache_slots_per_node, s.reuse_k,
                                    s.link_rate_files_per_slot, s.cluster_size_nodes);
  Outputs out;
  out.emplace_back("theory.csv", theory_csv(curve));
  return out;
}

Outputs run_baseline_kind(const ExperimentConfig& cfg) {
  TradeoffPoint pt =
      bs_unicast_baseline(cfg.baseline.n_users, cfg.baseline.bs_rate_files_per_slot);
  Outputs out;
  out.emplace_back("baseline.csv", tradeoff_csv({pt}));
  return out;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
  Outputs outputs;
  if (cfg.kind == "tradeoff")
    outputs = run_tradeoff_kind(cfg);
  else if (cfg.kind == "femto-place")
    outputs = run_femto_kind(cfg);
  else if (cfg.kind == "coded")
    outputs = run_coded_kind(cfg);
  else if (cfg.kind == "streaming")
    outputs = run_streaming_kind(cfg);
  else if (cfg.kind == "scaling")
    outputs = run_scaling_kind(cfg);
  else if (cfg.kind == "baseline")
    outputs = run_baseline_kind(cfg);
  else
    throw std::invalid_argument("config: unknown kind '" + cfg.kind + "'");

  std::sort(outputs.begin(), outputs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  RunManifest man;
  man.config_sha256 = sha256_hex(config_json(cfg));
  man.tool_version = std::string(kToolVersion);
  man.rng_version = std::string(kRngVersion);

  std::filesystem::create_directories(cfg.out_dir);
  for (const auto& [name, content] : outputs) {
    write_file((std::filesystem::path(cfg.out_dir) / name).string(), content);
    man.outputs.emplace_back(name, sha256_hex(content));
  }
  write_file((std::filesystem::path(cfg.out_dir) / "manifest.json").string(),
             manifest_json(man));
  return man;
}

namespace {

std::vector<std::pair<double, double>> load_curve(const std::string& csv_text) {
  auto rows = parse_csv(csv_text);
  if (rows.size() < 2) throw std::invalid_argument("compare: curve csv needs data rows");
  const auto& header = rows[0];
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  int xc = col("p_o"), yc = col("t_min_normalized"), bc = -1;
  if (xc < 0 || yc < 0) {
    xc = col("p");
    yc = col("T");
    bc = col("branch");
  }
  if (xc < 0 || yc < 0)
    throw std::invalid_argument("compare: curve csv must carry (p_o, t_min_normalized) or (p, T)");

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (bc >= 0 && rows[i][bc] != "1") continue;  // dominant-term comparisons use branch 1
    double x = std::stod(rows[i][xc]), y = std::stod(rows[i][yc]);
    if (x > 0.0 && y > 0.0) pts.emplace_back(x, y);
  }
  if (pts.size() < 2) throw std::invalid_argument("compare: need >= 2 positive curve points");
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

CurveComparison compare_curves(const std::string& first_csv, const std::string& second_csv,
                               double tolerance) {
  auto first = load_curve(first_csv);
  auto second = load_curve(second_csv);
  double lo = std::max(first.front().first, second.front().first);
  double hi = std::min(first.back().first, second.back().first);
  if (lo > hi) throw std::runtime_error("compare: curves have no outage overlap");

  CurveComparison cmp;
  cmp.tolerance = tolerance;
  CsvWriter rep({"p", "simulated", "theoretical", "rel_deviation"});
  double dev_sum = 0.0;
  for (const auto& [x, y] : first) {
    if (x < lo || x > hi) continue;
    double ref = loglog_interp(second, x);
    double dev = std::abs(y - ref) / ref;
    rep.row({fmt_double(x), fmt_double(y), fmt_double(ref), fmt_double(dev)});
    cmp.max_rel_deviation = std::max(cmp.max_rel_deviation, dev);
    dev_sum += dev;
    ++cmp.points;
  }
  if (cmp.points == 0) throw std::runtime_error("compare: curves have no outage overlap");
  cmp.mean_rel_deviation = dev_sum / cmp.points;
  cmp.pass = cmp.max_rel_deviation <= tolerance;
  cmp.report_csv = rep.str();
  return cmp;
}

}  // namespace d2dsim
