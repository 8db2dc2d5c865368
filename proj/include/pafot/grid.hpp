#pragma once

#include <array>
#include <optional>

#include "pafot/rng.hpp"
#include "pafot/world.hpp"

namespace pafot {

// Target cell of the 3x3 ego-centered grid, numbered 1..8 around the ring:
//
//        +y (left)
//   1    2    3
//   8   ego   4      ego travels toward +x
//   7    6    5
//
// 2 is directly ahead, 8 directly left, 4 directly right, 6 directly behind.
// The center cell (the ego itself) is not a valid target.
using GridCell = int;

inline constexpr int kNumCells = 8;

inline bool cell_valid(GridCell c) { return c >= 1 && c <= kNumCells; }

// Ego-relative frame the grid lives in. Cells are cell_length x cell_width
// rectangles; cell_length is the ego's longitudinal length, cell_width the
// width of the ego's current driving lane.
struct GridFrame {
  Eigen::Vector2d ego_position{0.0, 0.0};
  double ego_heading = 0.0;
  double cell_length = 4.7;
  double cell_width = 3.5;
};

// Frame at the ego's current pose; recomputed every step so the grid travels
// with the ego.
inline GridFrame grid_frame(const WorldState& world) {
  return {world.ego.position, world.ego.heading, world.ego.length,
          world.road.lane_width};
}

// Longitudinal/lateral offset multipliers of a cell's center, in units of
// (cell_length, cell_width).
std::array<int, 2> cell_offset(GridCell cell);

// World position of the geometric center of `cell`.
Eigen::Vector2d cell_center(const GridFrame& frame, GridCell cell);

// Cell whose rectangle contains the vehicle's center point, if any. The
// center cell and everything beyond the 3x3 footprint map to nullopt.
std::optional<GridCell> locate_cell(const GridFrame& frame, const VehicleState& npc);

// The two ring neighbors of a cell (i-1 and i+1 modulo 8 over 1..8).
std::array<GridCell, 2> adjacent_cells(GridCell cell);

// A transition current -> next is valid iff next is ring-adjacent to current
// and next's cell center lies on the road at the current ego pose.
bool is_pi_valid(GridCell current, GridCell next, const WorldState& world);

// Returns `proposed` if valid; otherwise one of current's on-road ring
// neighbors chosen uniformly (50/50 when both qualify), or `current` itself
// when neither does. The caller writes the result back into the genome.
GridCell repair_pi(GridCell current, GridCell proposed, const WorldState& world,
                   Rng& rng);

}  // namespace pafot
