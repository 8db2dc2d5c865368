#pragma once

#include <deque>
#include <vector>

#include "pafot/world.hpp"

namespace pafot {

struct EgoParams {
  double cruise_speed = 26.8;     // m/s, ~60 mph
  double time_headway = 1.5;      // s
  double reaction_delay = 0.5;    // s, multiple of the physics dt
  double max_brake = 6.0;         // m/s^2, magnitude
  double lane_change_gap = 15.0;  // m clear in the target lane
  double lane_keep_gain = 0.2;    // rad of heading target per m of offset
  double emergency_ettc = 1.5;    // s
};

// Mutable state the agent carries between steps: delayed perception buffer,
// lane-change intent, and the blocked timer.
struct EgoMemory {
  std::deque<std::vector<VehicleState>> npc_history;  // one snapshot per step
  int target_lane = -1;  // -1 until initialized from the spawn lane
  double blocked_time = 0.0;
};

// One decision step of the rule-based agent. Layers, highest priority first:
// emergency brake, adaptive following, lane change when blocked, cruise with
// lane centering. NPC perception is delayed by reaction_delay; the agent's own
// state is read directly.
Control ego_decide(const WorldState& world, const EgoParams& params, EgoMemory& memory);

}  // namespace pafot
