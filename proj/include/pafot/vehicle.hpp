#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <numbers>

namespace pafot {

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a <= 0.0) a += two_pi;
  return a - std::numbers::pi;
}

struct VehicleState {
  Eigen::Vector2d position{0.0, 0.0};
  double heading = 0.0;       // rad, road direction = 0
  double speed = 0.0;         // m/s, >= 0
  double acceleration = 0.0;  // m/s^2, as applied on the last step
  double length = 4.7;        // m
  double width = 2.0;         // m

  Eigen::Vector2d direction() const {
    return {std::cos(heading), std::sin(heading)};
  }
  Eigen::Vector2d velocity() const { return speed * direction(); }

  // Corners of the oriented footprint rectangle, counter-clockwise.
  std::array<Eigen::Vector2d, 4> footprint() const {
    const Eigen::Rotation2Dd rot(heading);
    const double hl = 0.5 * length;
    const double hw = 0.5 * width;
    return {position + rot * Eigen::Vector2d(hl, hw),
            position + rot * Eigen::Vector2d(-hl, hw),
            position + rot * Eigen::Vector2d(-hl, -hw),
            position + rot * Eigen::Vector2d(hl, -hw)};
  }
};

// Heading-rate / acceleration command pair. Values are clamped to the limits
// below before being applied; out-of-range inputs are never an error.
struct Control {
  double steer = 0.0;  // rad/s heading-rate command
  double accel = 0.0;  // m/s^2
};

struct ControlLimits {
  double steer_max = 0.8;   // rad/s
  double accel_max = 4.0;   // m/s^2
  double brake_max = -8.0;  // m/s^2 (negative)

  Control clamp(Control c) const {
    c.steer = std::clamp(c.steer, -steer_max, steer_max);
    c.accel = std::clamp(c.accel, brake_max, accel_max);
    return c;
  }
};

}  // namespace pafot
