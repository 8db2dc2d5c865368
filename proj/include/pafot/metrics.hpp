#pragma once

#include <limits>
#include <vector>

#include "pafot/world.hpp"

namespace pafot {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Estimated time to collision: the time for the EV to reach the crossing
// point of the two heading rays at its current speed. Infinity when the
// headings are parallel, the crossing lies behind the EV, or the EV is
// (nearly) stationary.
double ettc(const VehicleState& ev, const VehicleState& npc);

// Euclidean distance between vehicle center points.
double min_distance(const VehicleState& ev, const VehicleState& npc);

// Gap required for a t-second manoeuvre window given the relative speed and
// acceleration of the pair; may be negative and is reported as-is.
double safety_distance(const VehicleState& ev, const VehicleState& npc, double t = 3.0);

struct NpcSafety {
  double ettc = kInfiniteTime;      // s
  double distance = 0.0;            // m
  double safety_distance = 0.0;     // m required by the manoeuvre window
};

// One 6 Hz snapshot of the ego-vs-NPC safety measures.
struct SafetySample {
  double time = 0.0;  // s of simulated time
  std::vector<NpcSafety> npcs;
};

SafetySample sample_safety(const WorldState& world);

struct FitnessWeights {
  double w_mettc = 1.0;
  double w_md = 1.0;
  double w_sd = 1.0;
  double w_et = 1.0;
  double ettc_cap = 10.0;  // s; ETTC values above this contribute nothing
  double d_cap = 50.0;     // m; distances above this contribute nothing
};

struct FitnessRecord {
  double mettc = kInfiniteTime;  // min ETTC over samples/NPCs, capped
  double md = 0.0;               // min distance over samples/NPCs
  double sd_violation = 0.0;     // fraction of samples violating the SD gap
  double et = 0.0;               // s until violation, or the full budget
  bool collided = false;
  double score = 0.0;  // higher = more safety-critical
};

// Aggregates the 6 Hz samples into the scalar fitness. `violation_time` is
// the simulated time of the collision / off-road event when one occurred,
// ignored otherwise. Throws std::invalid_argument on an empty sample list.
FitnessRecord finalize_fitness(const std::vector<SafetySample>& samples,
                               bool violated, double violation_time,
                               double budget, const FitnessWeights& w);

}  // namespace pafot
