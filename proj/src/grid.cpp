#include "pafot/grid.hpp"

#include <cassert>
#include <cmath>

#include <Eigen/Geometry>

namespace pafot {

std::array<int, 2> cell_offset(GridCell cell) {
  assert(cell_valid(cell));
  // {longitudinal, lateral} multipliers, ring order 1..8.
  static constexpr std::array<std::array<int, 2>, 8> kOffsets = {{
      {1, 1},    // 1 front-left
      {1, 0},    // 2 front
      {1, -1},   // 3 front-right
      {0, -1},   // 4 right
      {-1, -1},  // 5 rear-right
      {-1, 0},   // 6 behind
      {-1, 1},   // 7 rear-left
      {0, 1},    // 8 left
  }};
  return kOffsets[cell - 1];
}

Eigen::Vector2d cell_center(const GridFrame& frame, GridCell cell) {
  const auto [lon, lat] = cell_offset(cell);
  const Eigen::Vector2d local(lon * frame.cell_length, lat * frame.cell_width);
  return frame.ego_position + Eigen::Rotation2Dd(frame.ego_heading) * local;
}

std::optional<GridCell> locate_cell(const GridFrame& frame, const VehicleState& npc) {
  const Eigen::Vector2d local =
      Eigen::Rotation2Dd(-frame.ego_heading) * (npc.position - frame.ego_position);
  const long lon = std::lround(local.x() / frame.cell_length);
  const long lat = std::lround(local.y() / frame.cell_width);
  if (std::abs(lon) > 1 || std::abs(lat) > 1) return std::nullopt;
  if (lon == 0 && lat == 0) return std::nullopt;  // the ego's own cell
  for (GridCell c = 1; c <= kNumCells; ++c) {
    const auto [clon, clat] = cell_offset(c);
    if (clon == lon && clat == lat) return c;
  }
  return std::nullopt;
}

std::array<GridCell, 2> adjacent_cells(GridCell cell) {
  assert(cell_valid(cell));
  const GridCell prev = cell == 1 ? kNumCells : cell - 1;
  const GridCell next = cell == kNumCells ? 1 : cell + 1;
  return {prev, next};
}

bool is_pi_valid(GridCell current, GridCell next, const WorldState& world) {
  const auto neighbors = adjacent_cells(current);
  if (next != neighbors[0] && next != neighbors[1]) return false;
  const auto frame = grid_frame(world);
  return lane_of(world.road, cell_center(frame, next)).has_value();
}

GridCell repair_pi(GridCell current, GridCell proposed, const WorldState& world,
                   Rng& rng) {
  if (is_pi_valid(current, proposed, world)) return proposed;
  const auto frame = grid_frame(world);
  const auto neighbors = adjacent_cells(current);
  std::array<GridCell, 2> valid{};
  int n = 0;
  for (GridCell c : neighbors) {
    if (lane_of(world.road, cell_center(frame, c))) valid[n++] = c;
  }
  if (n == 0) return current;  // boxed in, hold position
  if (n == 1) return valid[0];
  return valid[bernoulli(rng, 0.5) ? 0 : 1];
}

}  // namespace pafot
