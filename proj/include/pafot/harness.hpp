#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pafot/serialization.hpp"

namespace pafot {

enum class Technique { kPafot, kAvFuzzer, kRandom };

std::string to_string(Technique t);
std::optional<Technique> technique_from_string(const std::string& s);

struct ExperimentConfig {
  Technique technique = Technique::kPafot;
  int runs = 10;
  GAConfig ga;
  ScenarioSetup setup;
  std::filesystem::path output_dir = "out";
};

// Reads a JSON config file (merging over defaults) and then applies any
// command-line overrides the caller already placed in `cfg`.
void merge_config(ExperimentConfig& cfg, const json& j);

// One evaluated scenario, as persisted to the append-only records file.
// Everything needed to replay it deterministically is here; wall-clock never
// is, so reruns are byte-identical.
struct ScenarioRecord {
  std::string id;  // "r<run>-g<generation>-i<individual>"
  std::string technique;
  int run = 0;
  int generation = 0;
  int individual = 0;
  std::string phase;  // "main" or "local-fuzz"
  json genome;
  FitnessRecord fitness;
  Outcome outcome = Outcome::kTimeout;
  double collision_time = -1.0;  // s, -1 when no collision
  double sim_duration = 0.0;     // simulated seconds consumed
  std::uint64_t eval_seed = 0;
  std::string trace_ref;  // trace file name under traces/, may be empty
};

json to_json(const ScenarioRecord& r);
ScenarioRecord record_from_json(const json& j);

std::vector<ScenarioRecord> load_records(const std::filesystem::path& file);

struct RunSummary {
  int run = 0;
  long evaluations = 0;
  long collisions = 0;
  int local_fuzz_activations = 0;
  int restarts = 0;
  double total_sim_time = 0.0;
};

struct SummaryReport {
  std::string technique;
  long scenarios = 0;
  long collisions = 0;
  double mean_time_to_collision = 0.0;  // over colliding scenarios
  double min_time_to_collision = 0.0;
  double max_time_to_collision = 0.0;
  double total_sim_time = 0.0;
  long local_fuzz_activations = 0;
  long restarts = 0;
  std::vector<RunSummary> runs;
};

// Executes cfg.runs independent searches with per-run derived seeds,
// streaming records to <output_dir>/records.jsonl as scenarios complete and
// writing traces for colliding scenarios under <output_dir>/traces/.
// Also emits summary.json and the report CSVs.
SummaryReport run_experiment(const ExperimentConfig& cfg);

struct ReplayResult {
  bool match = false;
  std::string mismatch;  // human-readable diagnosis when !match
  SimulationTrace trace;
  ScenarioResult result;
};

// Re-executes a record's scenario and checks outcome, collision time, and
// fitness score against what was stored.
ReplayResult replay(const ScenarioRecord& record, const ExperimentConfig& cfg);

void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& file);

// Report files in plot-ready delimited form:
//   totals.csv     per-technique scenario/collision counts and timings
//   cumulative.csv collisions found vs cumulative simulated time
//   per_run.csv    safe/unsafe scenario counts per run
//   histogram.csv  collision times in 10-second bins over [0, budget]
void emit_report(const std::vector<ScenarioRecord>& records, double budget,
                 const std::filesystem::path& out_dir);

}  // namespace pafot
