#pragma once

#include <string>

#include <json.hpp>

#include "pafot/baselines.hpp"

namespace pafot {

using json = nlohmann::json;

// ---- genomes --------------------------------------------------------------

json to_json(const ScenarioGenome& g);
ScenarioGenome pi_genome_from_json(const json& j);

json to_json(const ManoeuvreGenome& g);
ManoeuvreGenome manoeuvre_genome_from_json(const json& j);

std::string to_string(ManoeuvreAction a);
ManoeuvreAction manoeuvre_action_from_string(const std::string& s);

// ---- fitness --------------------------------------------------------------

json to_json(const FitnessRecord& r);
FitnessRecord fitness_from_json(const json& j);

// ---- configuration --------------------------------------------------------
// Config parsing is merge-style: fields present in the JSON override the
// defaults already in the target, everything else is left alone.

void merge_config(RoadModel& road, const json& j);
void merge_config(EgoParams& ego, const json& j);
void merge_config(FitnessWeights& w, const json& j);
void merge_config(GAConfig& ga, const json& j);
void merge_config(ScenarioSetup& setup, const json& j);

}  // namespace pafot
