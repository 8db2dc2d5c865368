#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pafot/harness.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitMismatch = 3;

pafot::ExperimentConfig load_config(const std::string& config_path) {
  pafot::ExperimentConfig cfg;
  if (const char* env = std::getenv("PAFOT_OUT_DIR")) cfg.output_dir = env;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    pafot::merge_config(cfg, pafot::json::parse(in));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-based scenario fuzzer for a rule-based driving agent"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)")
      ->expected(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a fuzzing experiment");
  std::string technique, out_dir;
  int runs = -1, generations = -1, population = -1;
  double budget = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  run_cmd->add_option("--technique", technique, "pafot | avfuzzer | random");
  run_cmd->add_option("--runs", runs, "independent runs");
  run_cmd->add_option("--generations", generations, "GA generations per run");
  run_cmd->add_option("--population", population, "population size");
  run_cmd->add_option("--budget", budget, "seconds of simulated time per scenario");
  run_cmd->add_option("--seed", seed, "master RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--out", out_dir, "output directory");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Replay and verify a recorded scenario");
  std::string records_path, record_id, trace_out;
  double replay_budget = -1.0;
  replay_cmd->add_option("--records", records_path, "records.jsonl file")->required();
  replay_cmd->add_option("--id", record_id, "record id, e.g. r0-g3-i2")->required();
  replay_cmd->add_option("--trace", trace_out, "write the 30 Hz state trace here");
  replay_cmd->add_option("--budget", replay_budget,
                         "scenario budget the run used (or pass the same --config)");

  // report
  auto* report_cmd = app.add_subcommand("report", "Emit CSV reports from records");
  std::string report_records, report_out = ".";
  double report_budget = -1.0;
  report_cmd->add_option("--records", report_records, "records.jsonl file")->required();
  report_cmd->add_option("--out", report_out, "report output directory");
  report_cmd->add_option("--budget", report_budget, "scenario budget for histogram bins");

  CLI11_PARSE(app, argc, argv);

  pafot::ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*run_cmd) {
      if (!technique.empty()) {
        const auto t = pafot::technique_from_string(technique);
        if (!t) {
          std::cerr << "config error: unknown technique '" << technique << "'\n";
          return kExitConfig;
        }
        cfg.technique = *t;
      }
      if (runs > 0) cfg.runs = runs;
      if (generations > 0) cfg.ga.generations = generations;
      if (population > 0) cfg.ga.population_size = population;
      if (budget > 0) cfg.setup.budget = budget;
      if (seed_set) cfg.ga.rng_seed = seed;
      if (!out_dir.empty()) cfg.output_dir = out_dir;

      const auto summary = pafot::run_experiment(cfg);
      std::cout << summary.technique << ": " << summary.collisions << " collisions in "
                << summary.scenarios << " scenarios ("
                << summary.total_sim_time << " s simulated)\n"
                << "outputs in " << cfg.output_dir.string() << "\n";
      return 0;
    }
    if (*replay_cmd) {
      if (replay_budget > 0) cfg.setup.budget = replay_budget;
      const auto records = pafot::load_records(records_path);
      const auto it = std::find_if(records.begin(), records.end(),
                                   [&](const auto& r) { return r.id == record_id; });
      if (it == records.end()) {
        std::cerr << "no record with id " << record_id << "\n";
        return kExitIo;
      }
      const auto result = pafot::replay(*it, cfg);
      if (!trace_out.empty()) pafot::write_trace_csv(result.trace, trace_out);
      if (!result.match) {
        std::cerr << "determinism violation: " << result.mismatch << "\n";
        return kExitMismatch;
      }
      std::cout << record_id << ": replay matches (outcome "
                << pafot::to_string(result.result.outcome) << ", "
                << result.result.end_time << " s)\n";
      return 0;
    }
    if (*report_cmd) {
      const auto records = pafot::load_records(report_records);
      const double b = report_budget > 0 ? report_budget : cfg.setup.budget;
      pafot::emit_report(records, b, report_out);
      std::cout << "report files written to " << report_out << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
