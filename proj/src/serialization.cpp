#include "pafot/serialization.hpp"

#include <stdexcept>

namespace pafot {

json to_json(const ScenarioGenome& g) {
  json npcs = json::array();
  for (const auto& chrom : g.npcs) {
    json genes = json::array();
    for (const auto& pi : chrom.genes) {
      genes.push_back({pi.target_cell, pi.target_speed});
    }
    npcs.push_back({{"init_cell", chrom.init_cell},
                    {"init_speed", chrom.init_speed},
                    {"genes", genes}});
  }
  return {{"npcs", npcs}};
}

ScenarioGenome pi_genome_from_json(const json& j) {
  ScenarioGenome g;
  for (const auto& n : j.at("npcs")) {
    PiChromosome chrom;
    chrom.init_cell = n.at("init_cell").get<int>();
    chrom.init_speed = n.at("init_speed").get<double>();
    for (const auto& gene : n.at("genes")) {
      chrom.genes.push_back({gene.at(0).get<int>(), gene.at(1).get<double>()});
    }
    g.npcs.push_back(std::move(chrom));
  }
  return g;
}

std::string to_string(ManoeuvreAction a) {
  switch (a) {
    case ManoeuvreAction::kKeepLane: return "keep-lane";
    case ManoeuvreAction::kLaneChangeLeft: return "lane-change-left";
    case ManoeuvreAction::kLaneChangeRight: return "lane-change-right";
    case ManoeuvreAction::kAccelerate: return "accelerate";
    case ManoeuvreAction::kDecelerate: return "decelerate";
    case ManoeuvreAction::kBrakeHard: return "brake-hard";
  }
  return "keep-lane";
}

ManoeuvreAction manoeuvre_action_from_string(const std::string& s) {
  if (s == "keep-lane") return ManoeuvreAction::kKeepLane;
  if (s == "lane-change-left") return ManoeuvreAction::kLaneChangeLeft;
  if (s == "lane-change-right") return ManoeuvreAction::kLaneChangeRight;
  if (s == "accelerate") return ManoeuvreAction::kAccelerate;
  if (s == "decelerate") return ManoeuvreAction::kDecelerate;
  if (s == "brake-hard") return ManoeuvreAction::kBrakeHard;
  throw std::invalid_argument("unknown manoeuvre action: " + s);
}

json to_json(const ManoeuvreGenome& g) {
  json npcs = json::array();
  for (const auto& chrom : g.npcs) {
    json genes = json::array();
    for (const auto& gene : chrom.genes) {
      genes.push_back({to_string(gene.action), gene.duration});
    }
    npcs.push_back({{"init_lane", chrom.init_lane},
                    {"init_gap", chrom.init_gap},
                    {"init_speed", chrom.init_speed},
                    {"genes", genes}});
  }
  return {{"npcs", npcs}};
}

ManoeuvreGenome manoeuvre_genome_from_json(const json& j) {
  ManoeuvreGenome g;
  for (const auto& n : j.at("npcs")) {
    ManoeuvreChromosome chrom;
    chrom.init_lane = n.at("init_lane").get<int>();
    chrom.init_gap = n.at("init_gap").get<double>();
    chrom.init_speed = n.at("init_speed").get<double>();
    for (const auto& gene : n.at("genes")) {
      chrom.genes.push_back({manoeuvre_action_from_string(gene.at(0).get<std::string>()),
                             gene.at(1).get<double>()});
    }
    g.npcs.push_back(std::move(chrom));
  }
  return g;
}

json to_json(const FitnessRecord& r) {
  return {{"mettc", r.mettc},        {"md", r.md},
          {"sd_violation", r.sd_violation}, {"et", r.et},
          {"collided", r.collided},  {"score", r.score}};
}

FitnessRecord fitness_from_json(const json& j) {
  FitnessRecord r;
  r.mettc = j.at("mettc").get<double>();
  r.md = j.at("md").get<double>();
  r.sd_violation = j.at("sd_violation").get<double>();
  r.et = j.at("et").get<double>();
  r.collided = j.at("collided").get<bool>();
  r.score = j.at("score").get<double>();
  return r;
}

namespace {
template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}
}  // namespace

void merge_config(RoadModel& road, const json& j) {
  maybe(j, "lane_count", road.lane_count);
  maybe(j, "lane_width", road.lane_width);
  maybe(j, "road_length", road.road_length);
  maybe(j, "speed_limit", road.speed_limit);
}

void merge_config(EgoParams& ego, const json& j) {
  maybe(j, "cruise_speed", ego.cruise_speed);
  maybe(j, "time_headway", ego.time_headway);
  maybe(j, "reaction_delay", ego.reaction_delay);
  maybe(j, "max_brake", ego.max_brake);
  maybe(j, "lane_change_gap", ego.lane_change_gap);
  maybe(j, "lane_keep_gain", ego.lane_keep_gain);
  maybe(j, "emergency_ettc", ego.emergency_ettc);
}

void merge_config(FitnessWeights& w, const json& j) {
  maybe(j, "w_mettc", w.w_mettc);
  maybe(j, "w_md", w.w_md);
  maybe(j, "w_sd", w.w_sd);
  maybe(j, "w_et", w.w_et);
  maybe(j, "ettc_cap", w.ettc_cap);
  maybe(j, "d_cap", w.d_cap);
}

void merge_config(GAConfig& ga, const json& j) {
  maybe(j, "population_size", ga.population_size);
  maybe(j, "generations", ga.generations);
  maybe(j, "p_c", ga.p_c);
  maybe(j, "p_m", ga.p_m);
  maybe(j, "elite_fraction", ga.elite_fraction);
  maybe(j, "genes_per_chromosome", ga.genes_per_chromosome);
  maybe(j, "npc_count", ga.npc_count);
  maybe(j, "rng_seed", ga.rng_seed);
  if (j.contains("local_fuzz")) {
    const json& lf = j.at("local_fuzz");
    maybe(lf, "trigger_percentile", ga.local_fuzz.trigger_percentile);
    maybe(lf, "mutation_rate", ga.local_fuzz.mutation_rate);
    maybe(lf, "sub_generations", ga.local_fuzz.sub_generations);
    maybe(lf, "sub_population", ga.local_fuzz.sub_population);
  }
  if (j.contains("restart")) {
    const json& r = j.at("restart");
    maybe(r, "stagnation_window", ga.restart.stagnation_window);
    maybe(r, "epsilon", ga.restart.epsilon);
  }
}

void merge_config(ScenarioSetup& setup, const json& j) {
  if (j.contains("road")) merge_config(setup.road, j.at("road"));
  if (j.contains("ego")) merge_config(setup.ego, j.at("ego"));
  if (j.contains("weights")) merge_config(setup.weights, j.at("weights"));
  maybe(j, "dt", setup.dt);
  maybe(j, "budget", setup.budget);
  maybe(j, "ego_spawn_x", setup.ego_spawn_x);
  maybe(j, "ego_spawn_lane", setup.ego_spawn_lane);
  maybe(j, "vehicle_length", setup.vehicle_length);
  maybe(j, "vehicle_width", setup.vehicle_width);
  if (j.contains("plan")) {
    const json& p = j.at("plan");
    maybe(p, "dwell_time", setup.plan.dwell_time);
    maybe(p, "arrival_timeout", setup.plan.arrival_timeout);
  }
}

}  // namespace pafot
