#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pafot/road.hpp"
#include "pafot/vehicle.hpp"

namespace pafot {

// npc_index for collisions that are not vehicle-vehicle (ego leaving the road
// surface, reported like hitting a static object).
inline constexpr int kStaticObject = -1;

struct CollisionEvent {
  double time = 0.0;  // s of simulated time
  int npc_index = kStaticObject;
  double relative_speed = 0.0;  // m/s, |v_ego - v_npc|
};

// Full simulation state. Time is tracked as an integer step count so that
// sim_time() is exact after any number of steps.
struct WorldState {
  RoadModel road;
  VehicleState ego;
  std::vector<VehicleState> npcs;
  long step_count = 0;
  double dt = 1.0 / 30.0;

  double sim_time() const { return step_count * dt; }
};

// Advances every vehicle one kinematic step. controls[0] is the ego, then one
// entry per NPC in order. Pure: the input world is untouched.
WorldState step_world(const WorldState& world, std::span<const Control> controls,
                      const ControlLimits& limits);

// Overlap test between two oriented rectangles (separating axis).
bool footprints_overlap(const VehicleState& a, const VehicleState& b);

// Collision between the ego and any NPC footprint (lowest index wins on ties)
// or the ego center leaving the road band (npc_index = kStaticObject).
std::optional<CollisionEvent> detect_collision(const WorldState& world);

}  // namespace pafot
