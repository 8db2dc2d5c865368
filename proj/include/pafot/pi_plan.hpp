#pragma once

#include <span>
#include <vector>

#include "pafot/grid.hpp"

namespace pafot {

// One gene of an NPC chromosome: drive to this grid cell at this speed.
struct PositionInstruction {
  GridCell target_cell = 2;
  double target_speed = 0.0;  // m/s, within [0, speed_limit]
};

struct PlanParams {
  double dwell_time = 1.0;        // s the NPC must hold a cell before the next PI
  double arrival_timeout = 10.0;  // s before an unreachable PI is skipped
};

// Walks an NPC through its PI sequence. The cursor advances when the NPC has
// held the active target cell for dwell_time, or when arrival_timeout expires;
// after the last PI the NPC holds its final cell and speed indefinitely.
//
// Invalid transitions are repaired in place against the live world state and
// written back into the plan, so the executed sequence is always ring-adjacent
// or a hold.
class PlanExecutor {
 public:
  explicit PlanExecutor(PlanParams params = {}) : params_(params) {}

  // One physics step. `plan` is mutated when a repair fires.
  PositionInstruction step(std::vector<PositionInstruction>& plan,
                           const WorldState& world, const VehicleState& npc,
                           Rng& rng, double dt) {
    const GridFrame frame = grid_frame(world);
    const auto occupied = locate_cell(frame, npc);
    const GridCell current = occupied.value_or(last_commanded_);

    PositionInstruction& active = plan[cursor_];
    // Holding the current cell is always legitimate; adjacency repair only
    // applies to actual transitions.
    const GridCell repaired = active.target_cell == current
                                  ? current
                                  : repair_pi(current, active.target_cell, world, rng);
    active.target_cell = repaired;  // "update the solution"
    last_commanded_ = repaired;

    time_on_pi_ += dt;
    if (occupied && *occupied == repaired) {
      dwell_accum_ += dt;
    } else {
      dwell_accum_ = 0.0;
    }
    if ((dwell_accum_ >= params_.dwell_time || time_on_pi_ >= params_.arrival_timeout) &&
        cursor_ + 1 < plan.size()) {
      ++cursor_;
      dwell_accum_ = 0.0;
      time_on_pi_ = 0.0;
    }
    return active;
  }

  std::size_t cursor() const { return cursor_; }

  void reset(GridCell initial_cell) {
    cursor_ = 0;
    dwell_accum_ = 0.0;
    time_on_pi_ = 0.0;
    last_commanded_ = initial_cell;
  }

 private:
  PlanParams params_;
  std::size_t cursor_ = 0;
  double dwell_accum_ = 0.0;
  double time_on_pi_ = 0.0;
  GridCell last_commanded_ = 2;
};

}  // namespace pafot
