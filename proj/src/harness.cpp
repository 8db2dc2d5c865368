#include "pafot/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pafot {

namespace fs = std::filesystem;

std::string to_string(Technique t) {
  switch (t) {
    case Technique::kPafot: return "pafot";
    case Technique::kAvFuzzer: return "avfuzzer";
    case Technique::kRandom: return "random";
  }
  return "pafot";
}

std::optional<Technique> technique_from_string(const std::string& s) {
  if (s == "pafot") return Technique::kPafot;
  if (s == "avfuzzer") return Technique::kAvFuzzer;
  if (s == "random") return Technique::kRandom;
  return std::nullopt;
}

void merge_config(ExperimentConfig& cfg, const json& j) {
  if (j.contains("technique")) {
    const auto t = technique_from_string(j.at("technique").get<std::string>());
    if (!t) throw std::invalid_argument("unknown technique in config");
    cfg.technique = *t;
  }
  if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("ga")) merge_config(cfg.ga, j.at("ga"));
  merge_config(cfg.setup, j);  // road/ego/weights/scenario keys live at top level
}

json to_json(const ScenarioRecord& r) {
  return {{"id", r.id},
          {"technique", r.technique},
          {"run", r.run},
          {"generation", r.generation},
          {"individual", r.individual},
          {"phase", r.phase},
          {"genome", r.genome},
          {"fitness", to_json(r.fitness)},
          {"outcome", to_string(r.outcome)},
          {"collision_time", r.collision_time},
          {"sim_duration", r.sim_duration},
          {"eval_seed", r.eval_seed},
          {"trace_ref", r.trace_ref}};
}

ScenarioRecord record_from_json(const json& j) {
  ScenarioRecord r;
  r.id = j.at("id").get<std::string>();
  r.technique = j.at("technique").get<std::string>();
  r.run = j.at("run").get<int>();
  r.generation = j.at("generation").get<int>();
  r.individual = j.at("individual").get<int>();
  r.phase = j.at("phase").get<std::string>();
  r.genome = j.at("genome");
  r.fitness = fitness_from_json(j.at("fitness"));
  const auto outcome = outcome_from_string(j.at("outcome").get<std::string>());
  if (!outcome) throw std::invalid_argument("unknown outcome in record");
  r.outcome = *outcome;
  r.collision_time = j.at("collision_time").get<double>();
  r.sim_duration = j.at("sim_duration").get<double>();
  r.eval_seed = j.at("eval_seed").get<std::uint64_t>();
  r.trace_ref = j.at("trace_ref").get<std::string>();
  return r;
}

std::vector<ScenarioRecord> load_records(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open records file: " + file.string());
  std::vector<ScenarioRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(json::parse(line)));
  }
  return records;
}

void write_trace_csv(const SimulationTrace& trace, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write trace file: " + file.string());
  out << std::setprecision(12);
  const std::size_t n = trace.empty() ? 0 : trace.front().npcs.size();
  out << "time,ego_x,ego_y,ego_heading,ego_speed";
  for (std::size_t i = 0; i < n; ++i) {
    out << ",npc" << i << "_x,npc" << i << "_y,npc" << i << "_heading,npc" << i
        << "_speed";
  }
  out << "\n";
  for (const auto& row : trace) {
    out << row.time << ',' << row.ego.position.x() << ',' << row.ego.position.y()
        << ',' << row.ego.heading << ',' << row.ego.speed;
    for (const auto& npc : row.npcs) {
      out << ',' << npc.position.x() << ',' << npc.position.y() << ','
          << npc.heading << ',' << npc.speed;
    }
    out << "\n";
  }
}

namespace {

GAConfig per_run_config(const ExperimentConfig& cfg, int run) {
  GAConfig ga = cfg.ga;
  ga.rng_seed = derive_seed(cfg.ga.rng_seed, static_cast<std::uint64_t>(run), 0, 100);
  return ga;
}

// Re-runs a record's scenario with trace capture. Returns the trace and the
// fresh result.
std::pair<ScenarioResult, SimulationTrace> rerun(const ScenarioRecord& record,
                                                 const ScenarioSetup& setup) {
  SimulationTrace trace;
  ScenarioResult result;
  if (record.technique == "pafot") {
    ScenarioGenome genome = pi_genome_from_json(record.genome);
    result = run_pi_scenario(setup, genome, record.eval_seed, &trace);
  } else {
    const ManoeuvreGenome genome = manoeuvre_genome_from_json(record.genome);
    result = run_manoeuvre_scenario(setup, genome, record.eval_seed, &trace);
  }
  return {std::move(result), std::move(trace)};
}

}  // namespace

SummaryReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg.ga);
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  fs::create_directories(cfg.output_dir);
  fs::create_directories(cfg.output_dir / "traces");

  const fs::path records_path = cfg.output_dir / "records.jsonl";
  std::ofstream records_out(records_path);
  if (!records_out) {
    throw std::runtime_error("cannot write records file: " + records_path.string());
  }

  SummaryReport summary;
  summary.technique = to_string(cfg.technique);
  const auto wall_start = std::chrono::steady_clock::now();

  for (int run = 0; run < cfg.runs; ++run) {
    const GAConfig ga = per_run_config(cfg, run);
    RunSummary rs;
    rs.run = run;

    auto observer = [&](int gen, int idx, EvalPhase phase, const auto& ev) {
      ScenarioRecord rec;
      rec.id = "r" + std::to_string(run) + "-g" + std::to_string(gen) + "-i" +
               std::to_string(idx);
      rec.technique = summary.technique;
      rec.run = run;
      rec.generation = gen;
      rec.individual = idx;
      rec.phase = to_string(phase);
      rec.genome = to_json(ev.input_genome);  // the replayable form
      rec.fitness = ev.fitness;
      rec.outcome = ev.outcome;
      rec.collision_time = ev.outcome == Outcome::kCollision ? ev.end_time : -1.0;
      rec.sim_duration = ev.end_time;
      rec.eval_seed = ev.eval_seed;
      if (ev.outcome == Outcome::kCollision) {
        rec.trace_ref = rec.id + ".csv";
        auto [result, trace] = rerun(rec, cfg.setup);
        write_trace_csv(trace, cfg.output_dir / "traces" / rec.trace_ref);
        ++rs.collisions;
      }
      records_out << to_json(rec).dump() << "\n";
      records_out.flush();  // keep the file parseable if we are killed
    };

    switch (cfg.technique) {
      case Technique::kPafot: {
        const auto report =
            run_search(ga, GridSearchDomain(cfg.setup, ga), observer);
        rs.evaluations = report.evaluations;
        rs.local_fuzz_activations = report.local_fuzz_activations;
        rs.restarts = report.restarts;
        rs.total_sim_time = report.total_sim_time;
        break;
      }
      case Technique::kAvFuzzer: {
        const auto report = avfuzzer_like(ga, cfg.setup, observer);
        rs.evaluations = report.evaluations;
        rs.local_fuzz_activations = report.local_fuzz_activations;
        rs.restarts = report.restarts;
        rs.total_sim_time = report.total_sim_time;
        break;
      }
      case Technique::kRandom: {
        const auto report = random_fuzz(ga, cfg.setup, observer);
        rs.evaluations = report.evaluations;
        rs.total_sim_time = report.total_sim_time;
        break;
      }
    }
    summary.runs.push_back(rs);
  }
  records_out.close();

  // Aggregate the summary from the records themselves so every number is
  // recomputable from the persisted file.
  const auto records = load_records(records_path);
  double ttc_sum = 0.0;
  summary.min_time_to_collision = kInfiniteTime;
  summary.max_time_to_collision = 0.0;
  for (const auto& rec : records) {
    ++summary.scenarios;
    summary.total_sim_time += rec.sim_duration;
    if (rec.outcome == Outcome::kCollision) {
      ++summary.collisions;
      ttc_sum += rec.collision_time;
      summary.min_time_to_collision =
          std::min(summary.min_time_to_collision, rec.collision_time);
      summary.max_time_to_collision =
          std::max(summary.max_time_to_collision, rec.collision_time);
    }
  }
  summary.mean_time_to_collision =
      summary.collisions > 0 ? ttc_sum / summary.collisions : 0.0;
  if (summary.collisions == 0) summary.min_time_to_collision = 0.0;
  for (const auto& rs : summary.runs) {
    summary.local_fuzz_activations += rs.local_fuzz_activations;
    summary.restarts += rs.restarts;
  }

  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();
  json run_list = json::array();
  for (const auto& rs : summary.runs) {
    run_list.push_back({{"run", rs.run},
                        {"evaluations", rs.evaluations},
                        {"collisions", rs.collisions},
                        {"local_fuzz_activations", rs.local_fuzz_activations},
                        {"restarts", rs.restarts},
                        {"total_sim_time", rs.total_sim_time}});
  }
  const json summary_json = {
      {"technique", summary.technique},
      {"scenarios", summary.scenarios},
      {"collisions", summary.collisions},
      {"mean_time_to_collision", summary.mean_time_to_collision},
      {"min_time_to_collision", summary.min_time_to_collision},
      {"max_time_to_collision", summary.max_time_to_collision},
      {"total_sim_time", summary.total_sim_time},
      {"local_fuzz_activations", summary.local_fuzz_activations},
      {"restarts", summary.restarts},
      {"wall_seconds", wall_seconds},
      {"runs", run_list}};
  std::ofstream(cfg.output_dir / "summary.json") << summary_json.dump(2) << "\n";

  emit_report(records, cfg.setup.budget, cfg.output_dir);
  return summary;
}

ReplayResult replay(const ScenarioRecord& record, const ExperimentConfig& cfg) {
  ReplayResult out;
  auto [result, trace] = rerun(record, cfg.setup);
  out.result = result;
  out.trace = std::move(trace);

  std::ostringstream diag;
  if (result.outcome != record.outcome) {
    diag << "outcome " << to_string(result.outcome) << " != recorded "
         << to_string(record.outcome) << "; ";
  }
  const double replay_ct =
      result.outcome == Outcome::kCollision ? result.end_time : -1.0;
  if (replay_ct != record.collision_time) {
    diag << "collision_time " << replay_ct << " != recorded "
         << record.collision_time << "; ";
  }
  if (result.fitness.score != record.fitness.score) {
    diag << "score " << result.fitness.score << " != recorded "
         << record.fitness.score << "; ";
  }
  out.mismatch = diag.str();
  out.match = out.mismatch.empty();
  return out;
}

void emit_report(const std::vector<ScenarioRecord>& records, double budget,
                 const fs::path& out_dir) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  fs::create_directories(out_dir);

  std::vector<std::string> techniques;
  for (const auto& r : records) {
    if (std::find(techniques.begin(), techniques.end(), r.technique) ==
        techniques.end()) {
      techniques.push_back(r.technique);
    }
  }

  {  // per-technique totals (table shape)
    std::ofstream out(out_dir / "totals.csv");
    out << std::setprecision(12);
    out << "technique,scenarios,collisions,mean_time_to_collision,"
           "min_time_to_collision,max_time_to_collision,total_sim_time\n";
    for (const auto& tech : techniques) {
      long scenarios = 0, collisions = 0;
      double ttc_sum = 0.0, ttc_min = kInfiniteTime, ttc_max = 0.0, sim = 0.0;
      for (const auto& r : records) {
        if (r.technique != tech) continue;
        ++scenarios;
        sim += r.sim_duration;
        if (r.outcome == Outcome::kCollision) {
          ++collisions;
          ttc_sum += r.collision_time;
          ttc_min = std::min(ttc_min, r.collision_time);
          ttc_max = std::max(ttc_max, r.collision_time);
        }
      }
      out << tech << ',' << scenarios << ',' << collisions << ','
          << (collisions ? ttc_sum / collisions : 0.0) << ','
          << (collisions ? ttc_min : 0.0) << ',' << ttc_max << ',' << sim << "\n";
    }
  }

  {  // cumulative collisions vs simulated time
    std::ofstream out(out_dir / "cumulative.csv");
    out << std::setprecision(12);
    out << "technique,sim_time,cumulative_collisions\n";
    for (const auto& tech : techniques) {
      double sim = 0.0;
      long found = 0;
      for (const auto& r : records) {
        if (r.technique != tech) continue;
        sim += r.sim_duration;
        if (r.outcome == Outcome::kCollision) {
          ++found;
          out << tech << ',' << sim << ',' << found << "\n";
        }
      }
    }
  }

  {  // per-run safe/unsafe counts
    std::ofstream out(out_dir / "per_run.csv");
    out << "technique,run,safe,unsafe\n";
    for (const auto& tech : techniques) {
      int max_run = 0;
      for (const auto& r : records) {
        if (r.technique == tech) max_run = std::max(max_run, r.run);
      }
      for (int run = 0; run <= max_run; ++run) {
        long safe = 0, unsafe = 0;
        for (const auto& r : records) {
          if (r.technique != tech || r.run != run) continue;
          (r.outcome == Outcome::kCollision ? unsafe : safe) += 1;
        }
        out << tech << ',' << run << ',' << safe << ',' << unsafe << "\n";
      }
    }
  }

  {  // collision-time histogram, 10-second bins over [0, budget]
    std::ofstream out(out_dir / "histogram.csv");
    out << "technique,bin_start,bin_end,count\n";
    const int bins = std::max(1, static_cast<int>(std::ceil(budget / 10.0)));
    for (const auto& tech : techniques) {
      std::vector<long> counts(bins, 0);
      for (const auto& r : records) {
        if (r.technique != tech || r.outcome != Outcome::kCollision) continue;
        const int bin =
            std::min(bins - 1, static_cast<int>(r.collision_time / 10.0));
        ++counts[bin];
      }
      for (int b = 0; b < bins; ++b) {
        out << tech << ',' << b * 10 << ',' << std::min(budget, (b + 1) * 10.0)
            << ',' << counts[b] << "\n";
      }
    }
  }
}

}  // namespace pafot
