#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pafot/ego.hpp"
#include "pafot/genome.hpp"
#include "pafot/metrics.hpp"
#include "pafot/pid.hpp"

namespace pafot {

// Everything a scenario needs besides the genome: the road, the agent under
// test, controller gains, and the sampling/budget policy.
struct ScenarioSetup {
  RoadModel road;
  double dt = 1.0 / 30.0;
  double budget = 60.0;       // s of simulated time per scenario
  double ego_spawn_x = 100.0;
  int ego_spawn_lane = -1;    // -1 = middle lane
  double vehicle_length = 4.7;
  double vehicle_width = 2.0;
  ControlLimits limits;
  EgoParams ego;
  PidGains pid;
  PlanParams plan;
  FitnessWeights weights;
  int sample_stride = 5;  // physics steps per safety sample (30 Hz / 5 = 6 Hz)

  int spawn_lane() const {
    return ego_spawn_lane >= 0 ? ego_spawn_lane : road.lane_count / 2;
  }
};

enum class Outcome { kCollision, kOffRoad, kTimeout, kRoadExhausted, kError };

std::string to_string(Outcome o);
std::optional<Outcome> outcome_from_string(const std::string& s);

struct TraceRow {
  double time = 0.0;
  VehicleState ego;
  std::vector<VehicleState> npcs;
};
using SimulationTrace = std::vector<TraceRow>;

struct ScenarioResult {
  FitnessRecord fitness;
  Outcome outcome = Outcome::kTimeout;
  double end_time = 0.0;  // simulated seconds consumed
  std::optional<CollisionEvent> collision;
  std::vector<SafetySample> samples;
};

// Initial world for a grid-based genome: the ego at its spawn pose, each NPC
// at the center of its initial cell.
WorldState spawn_pi_world(const ScenarioSetup& setup, const ScenarioGenome& genome);

// Runs a grid-based scenario to collision, off-road, road end, or budget.
// Repairs fired during execution are written back into `genome`. `seed`
// drives the 50/50 repair draws; identical inputs give identical results.
ScenarioResult run_pi_scenario(const ScenarioSetup& setup, ScenarioGenome& genome,
                               std::uint64_t seed, SimulationTrace* trace = nullptr);

// Baseline counterpart: NPCs follow absolute-road manoeuvre genes.
ScenarioResult run_manoeuvre_scenario(const ScenarioSetup& setup,
                                      const ManoeuvreGenome& genome,
                                      std::uint64_t seed,
                                      SimulationTrace* trace = nullptr);

}  // namespace pafot
