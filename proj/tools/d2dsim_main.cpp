#include <cstdio>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "d2dsim/csv.hpp"
#include "d2dsim/experiment.hpp"

namespace {

int run_kind(const std::string& forced_kind, const std::string& config_path,
             std::uint64_t seed_offset, const std::string& out_dir, int workers) {
  d2dsim::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = d2dsim::parse_config(d2dsim::read_file(config_path));
  if (cfg.kind.empty()) cfg.kind = forced_kind;
  if (cfg.kind != forced_kind)
    throw std::invalid_argument("config: kind '" + cfg.kind + "' does not match subcommand '" +
                                forced_kind + "'");
  cfg.seed += seed_offset;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (workers > 0) cfg.workers = workers;

  d2dsim::RunManifest man = d2dsim::run_experiment(cfg);
  std::printf("%s: wrote %zu outputs to %s (config %s)\n", cfg.kind.c_str(),
              man.outputs.size(), cfg.out_dir.c_str(), man.config_sha256.substr(0, 12).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cache-enabled D2D network simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path, out_dir;
  std::uint64_t seed_offset = 0;
  int workers = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed-offset", seed_offset, "added to the config seed");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--workers", workers, "worker thread override");

  const char* kinds[] = {"tradeoff", "femto-place", "coded", "streaming", "scaling", "baseline"};
  const char* blurbs[] = {"sweep cluster sizes for the outage/throughput tradeoff",
                          "place files on femto helpers (greedy and coded LP)",
                          "run one coded multicast delivery session",
                          "simulate adaptive video streaming from helper caches",
                          "emit the asymptotic throughput curve",
                          "emit the base-station unicast baseline"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(kinds[i], blurbs[i]);

  auto* cmp = app.add_subcommand("compare", "compare a simulated curve against a reference");
  std::string sim_path, theory_path, report_path;
  double tolerance = 0.25;
  cmp->add_option("--simulated", sim_path, "simulated curve csv")->required();
  cmp->add_option("--theory", theory_path, "reference curve csv")->required();
  cmp->add_option("--tolerance", tolerance, "max relative deviation allowed");
  cmp->add_option("--report", report_path, "write the per-point comparison csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) {
      d2dsim::CurveComparison res = d2dsim::compare_curves(
          d2dsim::read_file(sim_path), d2dsim::read_file(theory_path), tolerance);
      if (!report_path.empty()) d2dsim::write_file(report_path, res.report_csv);
      std::printf("compare: %d points, max dev %.4f, mean dev %.4f, tolerance %.4f -> %s\n",
                  res.points, res.max_rel_deviation, res.mean_rel_deviation, res.tolerance,
                  res.pass ? "pass" : "fail");
      return res.pass ? 0 : 3;
    }
    for (const char* kind : kinds)
      if (app.get_subcommand(kind)->parsed())
        return run_kind(kind, config_path, seed_offset, out_dir, workers);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
