#include "pafot/scenario.hpp"

#include <cmath>

namespace pafot {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kCollision: return "collision";
    case Outcome::kOffRoad: return "off-road";
    case Outcome::kTimeout: return "timeout";
    case Outcome::kRoadExhausted: return "road-exhausted";
    case Outcome::kError: return "error";
  }
  return "error";
}

std::optional<Outcome> outcome_from_string(const std::string& s) {
  if (s == "collision") return Outcome::kCollision;
  if (s == "off-road") return Outcome::kOffRoad;
  if (s == "timeout") return Outcome::kTimeout;
  if (s == "road-exhausted") return Outcome::kRoadExhausted;
  if (s == "error") return Outcome::kError;
  return std::nullopt;
}

namespace {

VehicleState make_vehicle(const ScenarioSetup& setup, Eigen::Vector2d position,
                          double speed) {
  VehicleState v;
  v.position = std::move(position);
  v.heading = 0.0;
  v.speed = speed;
  v.length = setup.vehicle_length;
  v.width = setup.vehicle_width;
  return v;
}

WorldState spawn_base(const ScenarioSetup& setup) {
  WorldState world;
  world.road = setup.road;
  world.dt = setup.dt;
  const double cruise = std::min(setup.ego.cruise_speed, setup.road.speed_limit);
  world.ego = make_vehicle(
      setup,
      {setup.ego_spawn_x, setup.road.lane_center_y(setup.spawn_lane())}, cruise);
  return world;
}

bool state_finite(const VehicleState& v) {
  return v.position.allFinite() && std::isfinite(v.heading) && std::isfinite(v.speed);
}

// Shared simulation loop. `npc_controls(world)` produces one control per NPC
// for the current step.
template <class NpcControls>
ScenarioResult run_loop(const ScenarioSetup& setup, WorldState world,
                        NpcControls&& npc_controls, SimulationTrace* trace) {
  ScenarioResult result;
  EgoMemory ego_memory;
  const long total_steps = std::lround(setup.budget / setup.dt);

  auto record_trace = [&](const WorldState& w) {
    if (trace) trace->push_back({w.sim_time(), w.ego, w.npcs});
  };
  record_trace(world);

  std::vector<Control> controls(world.npcs.size() + 1);
  for (long step = 0; step < total_steps; ++step) {
    controls[0] = ego_decide(world, setup.ego, ego_memory);
    const std::vector<Control> npc = npc_controls(world);
    for (std::size_t i = 0; i < npc.size(); ++i) controls[i + 1] = npc[i];

    world = step_world(world, controls, setup.limits);
    record_trace(world);

    bool finite = state_finite(world.ego);
    for (const auto& v : world.npcs) finite = finite && state_finite(v);
    if (!finite) {
      result.outcome = Outcome::kError;
      result.end_time = world.sim_time();
      result.fitness = FitnessRecord{};  // minimum score
      return result;
    }

    const bool on_stride = world.step_count % setup.sample_stride == 0;
    if (on_stride) result.samples.push_back(sample_safety(world));

    if (auto ev = detect_collision(world)) {
      result.collision = ev;
      result.outcome =
          ev->npc_index == kStaticObject ? Outcome::kOffRoad : Outcome::kCollision;
      result.end_time = world.sim_time();
      if (!on_stride) result.samples.push_back(sample_safety(world));
      result.fitness = finalize_fitness(result.samples, true, result.end_time,
                                        setup.budget, setup.weights);
      return result;
    }
    if (world.ego.position.x() > setup.road.road_length) {
      result.outcome = Outcome::kRoadExhausted;
      result.end_time = world.sim_time();
      if (result.samples.empty()) result.samples.push_back(sample_safety(world));
      result.fitness = finalize_fitness(result.samples, false, result.end_time,
                                        setup.budget, setup.weights);
      return result;
    }
  }
  result.outcome = Outcome::kTimeout;
  result.end_time = setup.budget;
  if (result.samples.empty()) result.samples.push_back(sample_safety(world));
  result.fitness = finalize_fitness(result.samples, false, result.end_time,
                                    setup.budget, setup.weights);
  return result;
}

}  // namespace

WorldState spawn_pi_world(const ScenarioSetup& setup, const ScenarioGenome& genome) {
  WorldState world = spawn_base(setup);
  const GridFrame frame = grid_frame(world);
  for (const auto& chrom : genome.npcs) {
    Eigen::Vector2d pos = cell_center(frame, chrom.init_cell);
    // Keep the footprint on the road if the initial cell fell off the band.
    const double margin = 0.5 * setup.vehicle_width;
    pos.y() = std::clamp(pos.y(), margin, setup.road.width() - margin);
    VehicleState npc = make_vehicle(setup, pos, chrom.init_speed);
    // The front/behind cell centers sit exactly one vehicle length away, which
    // puts bumpers in contact at t=0. Nudge such spawns outward so no scenario
    // starts pre-collided.
    Eigen::Vector2d away = pos - world.ego.position;
    if (away.norm() < 1e-9) away = {1.0, 0.0};
    away.normalize();
    while (footprints_overlap(world.ego, npc)) npc.position += 0.5 * away;
    npc.position += 0.5 * away;
    world.npcs.push_back(npc);
  }
  return world;
}

ScenarioResult run_pi_scenario(const ScenarioSetup& setup, ScenarioGenome& genome,
                               std::uint64_t seed, SimulationTrace* trace) {
  WorldState world = spawn_pi_world(setup, genome);
  const std::size_t n = genome.npcs.size();

  std::vector<PlanExecutor> executors(n, PlanExecutor(setup.plan));
  std::vector<PidState> pid_states(n);
  for (std::size_t i = 0; i < n; ++i) {
    executors[i].reset(genome.npcs[i].init_cell);
  }

  auto npc_controls = [&](const WorldState& w) {
    std::vector<Control> out(n);
    const GridFrame frame = grid_frame(w);
    for (std::size_t i = 0; i < n; ++i) {
      // Stateless per-step repair randomness: a repair that was written back
      // into the genome replays as a no-op without shifting later draws, so
      // re-running a repaired genome reproduces the run exactly.
      Rng step_rng(derive_seed(seed, i, static_cast<std::uint64_t>(w.step_count)));
      const PositionInstruction active =
          executors[i].step(genome.npcs[i].genes, w, w.npcs[i], step_rng, w.dt);
      const Eigen::Vector2d waypoint = cell_center(frame, active.target_cell);
      // Station-keeping: the cells travel with the ego, so bias the commanded
      // speed by the along-track gap to the waypoint. A pure speed target
      // could never hold an ego-relative position.
      const double along =
          (waypoint - w.npcs[i].position).dot(w.npcs[i].direction());
      const double v_cmd = std::clamp(active.target_speed + 0.5 * along, 0.0,
                                      setup.road.speed_limit);
      out[i] = pid_control(w.npcs[i], waypoint, v_cmd, setup.pid,
                           pid_states[i], w.dt);
    }
    return out;
  };
  return run_loop(setup, std::move(world), npc_controls, trace);
}

namespace {

struct ManoeuvreExec {
  std::size_t gene = 0;
  double time_in_gene = 0.0;
  int target_lane = 0;
  double target_speed = 0.0;
  bool gene_entered = false;
};

}  // namespace

ScenarioResult run_manoeuvre_scenario(const ScenarioSetup& setup,
                                      const ManoeuvreGenome& genome,
                                      std::uint64_t /*seed*/,
                                      SimulationTrace* trace) {
  WorldState world = spawn_base(setup);
  const std::size_t n = genome.npcs.size();
  std::vector<ManoeuvreExec> execs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& chrom = genome.npcs[i];
    const int lane = std::clamp(chrom.init_lane, 0, setup.road.lane_count - 1);
    world.npcs.push_back(make_vehicle(
        setup,
        {setup.ego_spawn_x + chrom.init_gap, setup.road.lane_center_y(lane)},
        chrom.init_speed));
    execs[i].target_lane = lane;
    execs[i].target_speed = chrom.init_speed;
  }

  auto npc_controls = [&](const WorldState& w) {
    std::vector<Control> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& genes = genome.npcs[i].genes;
      ManoeuvreExec& e = execs[i];
      const VehicleState& npc = w.npcs[i];

      const ManoeuvreGene gene =
          genes.empty() ? ManoeuvreGene{} : genes[std::min(e.gene, genes.size() - 1)];
      if (!e.gene_entered) {
        e.gene_entered = true;
        if (gene.action == ManoeuvreAction::kLaneChangeLeft) {
          e.target_lane = std::min(e.target_lane + 1, setup.road.lane_count - 1);
        } else if (gene.action == ManoeuvreAction::kLaneChangeRight) {
          e.target_lane = std::max(e.target_lane - 1, 0);
        }
      }

      Control c;
      switch (gene.action) {
        case ManoeuvreAction::kAccelerate:
          e.target_speed = std::min(e.target_speed + 2.5 * w.dt, setup.road.speed_limit);
          break;
        case ManoeuvreAction::kDecelerate:
          e.target_speed = std::max(e.target_speed - 2.5 * w.dt, 0.0);
          break;
        case ManoeuvreAction::kBrakeHard:
          e.target_speed = 0.0;
          break;
        default:
          break;
      }
      if (gene.action == ManoeuvreAction::kBrakeHard) {
        c.accel = setup.limits.brake_max;
      } else {
        c.accel = 1.5 * (e.target_speed - npc.speed);
      }
      const double offset =
          npc.position.y() - setup.road.lane_center_y(e.target_lane);
      const double desired_heading = std::clamp(-0.2 * offset, -0.3, 0.3);
      c.steer = 2.0 * wrap_angle(desired_heading - npc.heading);
      out[i] = c;

      e.time_in_gene += w.dt;
      if (e.time_in_gene >= gene.duration && e.gene + 1 < genes.size()) {
        ++e.gene;
        e.time_in_gene = 0.0;
        e.gene_entered = false;
      }
    }
    return out;
  };
  return run_loop(setup, std::move(world), npc_controls, trace);
}

}  // namespace pafot
