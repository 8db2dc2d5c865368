#pragma once

#include <cmath>

#include "pafot/vehicle.hpp"

namespace pafot {

struct PidChannelGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct PidGains {
  PidChannelGains lateral{2.5, 0.0, 0.5};
  PidChannelGains longitudinal{1.5, 0.1, 0.0};
  double integrator_clamp = 5.0;
};

// Per-channel controller state, carried explicitly by the caller (one pair
// per NPC).
struct PidChannelState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;  // no derivative kick on the first sample
};

struct PidState {
  PidChannelState lateral;
  PidChannelState longitudinal;
};

inline double pid_step(double error, const PidChannelGains& g, PidChannelState& s,
                       double integrator_clamp, double dt) {
  s.integral = std::clamp(s.integral + error * dt, -integrator_clamp, integrator_clamp);
  const double derivative = s.primed ? (error - s.prev_error) / dt : 0.0;
  s.prev_error = error;
  s.primed = true;
  return g.kp * error + g.ki * s.integral + g.kd * derivative;
}

// Waypoint-tracking control: steer is a PID on the heading error toward the
// waypoint, accel a PID on the speed error. Output is unclamped here; the
// world clamps on application.
inline Control pid_control(const VehicleState& npc, const Eigen::Vector2d& waypoint,
                           double target_speed, const PidGains& gains,
                           PidState& state, double dt) {
  const Eigen::Vector2d to_wp = waypoint - npc.position;
  double heading_error = 0.0;
  // Steer toward the waypoint only while it is ahead; chasing a waypoint that
  // has slipped behind would command a U-turn at speed, so hold heading and
  // let the speed channel close the gap instead.
  if (to_wp.norm() > 1e-9 && to_wp.dot(npc.direction()) > 0.0) {
    heading_error = wrap_angle(std::atan2(to_wp.y(), to_wp.x()) - npc.heading);
  }
  Control c;
  c.steer = pid_step(heading_error, gains.lateral, state.lateral,
                     gains.integrator_clamp, dt);
  c.accel = pid_step(target_speed - npc.speed, gains.longitudinal,
                     state.longitudinal, gains.integrator_clamp, dt);
  return c;
}

}  // namespace pafot
