#include "pafot/world.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace pafot {

namespace {

VehicleState step_vehicle(const VehicleState& v, Control c, double dt,
                          const ControlLimits& limits) {
  c = limits.clamp(c);
  VehicleState out = v;
  out.heading = wrap_angle(v.heading + c.steer * dt);
  out.speed = std::max(0.0, v.speed + c.accel * dt);
  out.acceleration = (out.speed - v.speed) / dt;  // reflects the >= 0 clamp
  out.position = v.position + out.speed * dt * out.direction();
  return out;
}

// Projects both rectangles onto `axis` and reports a gap.
bool separated_on_axis(const std::array<Eigen::Vector2d, 4>& a,
                       const std::array<Eigen::Vector2d, 4>& b,
                       const Eigen::Vector2d& axis) {
  double amin = std::numeric_limits<double>::infinity(), amax = -amin;
  double bmin = amin, bmax = -amin;
  for (const auto& p : a) {
    const double d = p.dot(axis);
    amin = std::min(amin, d);
    amax = std::max(amax, d);
  }
  for (const auto& p : b) {
    const double d = p.dot(axis);
    bmin = std::min(bmin, d);
    bmax = std::max(bmax, d);
  }
  return amax < bmin || bmax < amin;
}

}  // namespace

WorldState step_world(const WorldState& world, std::span<const Control> controls,
                      const ControlLimits& limits) {
  assert(controls.size() == world.npcs.size() + 1);
  WorldState out = world;
  out.ego = step_vehicle(world.ego, controls[0], world.dt, limits);
  for (std::size_t i = 0; i < world.npcs.size(); ++i) {
    out.npcs[i] = step_vehicle(world.npcs[i], controls[i + 1], world.dt, limits);
  }
  out.step_count = world.step_count + 1;
  return out;
}

bool footprints_overlap(const VehicleState& a, const VehicleState& b) {
  const auto fa = a.footprint();
  const auto fb = b.footprint();
  const Eigen::Vector2d axes[4] = {
      a.direction(), Eigen::Vector2d(-a.direction().y(), a.direction().x()),
      b.direction(), Eigen::Vector2d(-b.direction().y(), b.direction().x())};
  for (const auto& axis : axes) {
    if (separated_on_axis(fa, fb, axis)) return false;
  }
  return true;
}

std::optional<CollisionEvent> detect_collision(const WorldState& world) {
  for (std::size_t i = 0; i < world.npcs.size(); ++i) {
    if (footprints_overlap(world.ego, world.npcs[i])) {
      CollisionEvent ev;
      ev.time = world.sim_time();
      ev.npc_index = static_cast<int>(i);
      ev.relative_speed = (world.ego.velocity() - world.npcs[i].velocity()).norm();
      return ev;
    }
  }
  if (!lane_of(world.road, world.ego.position)) {
    CollisionEvent ev;
    ev.time = world.sim_time();
    ev.npc_index = kStaticObject;
    ev.relative_speed = world.ego.speed;
    return ev;
  }
  return std::nullopt;
}

}  // namespace pafot
