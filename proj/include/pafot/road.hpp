#pragma once

#include <Eigen/Core>
#include <optional>

namespace pafot {

// Straight multi-lane road strip. Lane i occupies y in [i*lane_width,
// (i+1)*lane_width), traffic flows toward +x, left is +y.
struct RoadModel {
  int lane_count = 4;
  double lane_width = 3.5;      // m
  double road_length = 2000.0;  // m
  double speed_limit = 26.8;    // m/s, ~60 mph

  double width() const { return lane_count * lane_width; }
  double lane_center_y(int lane) const { return (lane + 0.5) * lane_width; }
};

// Lane index containing the given position, or nullopt when the point is off
// the road band. The boundary y = i*lane_width belongs to lane i.
inline std::optional<int> lane_of(const RoadModel& road, const Eigen::Vector2d& position) {
  const double y = position.y();
  if (y < 0.0 || y >= road.width()) return std::nullopt;
  return static_cast<int>(y / road.lane_width);
}

}  // namespace pafot
