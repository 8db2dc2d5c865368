#include "pafot/ego.hpp"

#include <algorithm>
#include <cmath>

#include "pafot/metrics.hpp"

namespace pafot {

namespace {

// Headway time to an in-lane leader: center distance over ego speed, the
// degenerate collinear case of the ETTC ray crossing.
double headway_time(const VehicleState& ego, const VehicleState& npc) {
  if (ego.speed < 1e-6) return kInfiniteTime;
  return (npc.position - ego.position).norm() / ego.speed;
}

bool gap_clear(const RoadModel& road, const VehicleState& ego,
               const std::vector<VehicleState>& npcs, int lane, double gap) {
  for (const auto& npc : npcs) {
    const auto l = lane_of(road, npc.position);
    if (l && *l == lane && std::abs(npc.position.x() - ego.position.x()) < gap) {
      return false;
    }
  }
  return true;
}

}  // namespace

Control ego_decide(const WorldState& world, const EgoParams& params, EgoMemory& memory) {
  const VehicleState& ego = world.ego;
  const RoadModel& road = world.road;
  const double dt = world.dt;

  // Delayed perception: the agent sees the NPCs as they were reaction_delay
  // ago (or as far back as the history reaches early in a scenario).
  memory.npc_history.push_back(world.npcs);
  const auto delay_steps =
      static_cast<std::size_t>(std::lround(params.reaction_delay / dt));
  while (memory.npc_history.size() > delay_steps + 1) {
    memory.npc_history.pop_front();
  }
  const std::vector<VehicleState>& perceived = memory.npc_history.front();

  const int ego_lane =
      lane_of(road, ego.position).value_or(std::clamp(memory.target_lane, 0, road.lane_count - 1));
  if (memory.target_lane < 0) memory.target_lane = ego_lane;

  auto relevant_lane = [&](const VehicleState& npc) {
    const auto l = lane_of(road, npc.position);
    return l && (*l == ego_lane || *l == memory.target_lane);
  };

  // Nearest perceived leader in the current or target lane.
  const VehicleState* leader = nullptr;
  for (const auto& npc : perceived) {
    if (npc.position.x() <= ego.position.x() || !relevant_lane(npc)) continue;
    if (!leader || npc.position.x() < leader->position.x()) leader = &npc;
  }

  // Lane centering toward the target lane via a heading target.
  const double offset = ego.position.y() - road.lane_center_y(memory.target_lane);
  const double desired_heading =
      std::clamp(-params.lane_keep_gain * offset, -0.3, 0.3);
  Control c;
  c.steer = 2.0 * wrap_angle(desired_heading - ego.heading);

  // Layer (a): emergency brake on imminent collision.
  double threat = kInfiniteTime;
  for (const auto& npc : perceived) {
    threat = std::min(threat, ettc(ego, npc));
    if (relevant_lane(npc) && npc.position.x() > ego.position.x()) {
      threat = std::min(threat, headway_time(ego, npc));
    }
  }
  const double cruise = std::min(params.cruise_speed, road.speed_limit);
  if (threat < params.emergency_ettc) {
    c.accel = -params.max_brake;
  } else if (leader) {
    // Layer (b): adaptive following, matching the leader while holding the
    // time headway.
    const double gap = leader->position.x() - ego.position.x() -
                       0.5 * (ego.length + leader->length);
    const double desired_gap = std::max(2.0, params.time_headway * ego.speed);
    double accel = 0.3 * (gap - desired_gap) + 0.8 * (leader->speed - ego.speed);
    accel = std::min(accel, 1.0 * (cruise - ego.speed));
    c.accel = std::clamp(accel, -params.max_brake, 4.0);
  } else {
    // Layer (d): cruise.
    c.accel = std::clamp(1.0 * (cruise - ego.speed), -params.max_brake, 4.0);
  }

  // Layer (c): lane change when held below 60% of cruise for > 2 s.
  const bool blocked = leader != nullptr && ego.speed < 0.6 * cruise;
  memory.blocked_time = blocked ? memory.blocked_time + dt : 0.0;
  if (memory.blocked_time > 2.0 && memory.target_lane == ego_lane) {
    for (int cand : {ego_lane + 1, ego_lane - 1}) {  // left first
      if (cand < 0 || cand >= road.lane_count) continue;
      if (gap_clear(road, ego, perceived, cand, params.lane_change_gap)) {
        memory.target_lane = cand;
        memory.blocked_time = 0.0;
        break;
      }
    }
  }
  return c;
}

}  // namespace pafot
