#include "pafot/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace pafot {

namespace {
constexpr double kParallelTolerance = 1e-9;  // |sin| of the angle between rays
constexpr double kSpeedEpsilon = 1e-6;       // m/s

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}
}  // namespace

double ettc(const VehicleState& ev, const VehicleState& npc) {
  if (ev.speed < kSpeedEpsilon) return kInfiniteTime;
  // Ray intersection in direction-vector form; identical to the tan/cot
  // closed form wherever both are defined, and well behaved at the
  // axis-aligned headings where tan or cot diverge.
  const Eigen::Vector2d d1 = ev.direction();
  const Eigen::Vector2d d2 = npc.direction();
  const double denom = cross2(d1, d2);
  if (std::abs(denom) < kParallelTolerance) return kInfiniteTime;
  const Eigen::Vector2d r = npc.position - ev.position;
  const double dist_to_crossing = cross2(r, d2) / denom;
  if (dist_to_crossing <= 0.0) return kInfiniteTime;  // crossing behind the EV
  return dist_to_crossing / ev.speed;
}

double min_distance(const VehicleState& ev, const VehicleState& npc) {
  return (npc.position - ev.position).norm();
}

double safety_distance(const VehicleState& ev, const VehicleState& npc, double t) {
  return (ev.speed - npc.speed) * t +
         0.5 * (ev.acceleration - npc.acceleration) * t * t;
}

SafetySample sample_safety(const WorldState& world) {
  SafetySample sample;
  sample.time = world.sim_time();
  sample.npcs.reserve(world.npcs.size());
  for (const auto& npc : world.npcs) {
    NpcSafety s;
    s.ettc = ettc(world.ego, npc);
    s.distance = min_distance(world.ego, npc);
    s.safety_distance = safety_distance(world.ego, npc);
    sample.npcs.push_back(s);
  }
  return sample;
}

FitnessRecord finalize_fitness(const std::vector<SafetySample>& samples,
                               bool violated, double violation_time,
                               double budget, const FitnessWeights& w) {
  if (samples.empty()) {
    throw std::invalid_argument("finalize_fitness: empty sample list");
  }
  FitnessRecord rec;
  rec.collided = violated;
  rec.md = kInfiniteTime;
  long violating = 0;
  for (const auto& sample : samples) {
    bool sd_violated = false;
    for (const auto& s : sample.npcs) {
      rec.mettc = std::min(rec.mettc, s.ettc);
      rec.md = std::min(rec.md, s.distance);
      if (s.distance < s.safety_distance) sd_violated = true;
    }
    if (sd_violated) ++violating;
  }
  rec.mettc = std::min(rec.mettc, w.ettc_cap);
  rec.sd_violation = static_cast<double>(violating) / samples.size();
  rec.et = violated ? violation_time : budget;

  const auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };
  rec.score = w.w_mettc * unit(1.0 - rec.mettc / w.ettc_cap) +
              w.w_md * unit(1.0 - rec.md / w.d_cap) +
              w.w_sd * unit(rec.sd_violation) +
              w.w_et * unit(1.0 - rec.et / budget);
  return rec;
}

}  // namespace pafot
