#include <doctest.h>

#include <cmath>

#include "pafot/ego.hpp"
#include "pafot/metrics.hpp"
#include "pafot/rng.hpp"
#include "pafot/scenario.hpp"

using namespace pafot;

namespace {

WorldState cruise_world(int lane = 2) {
  WorldState w;
  w.road = RoadModel{4, 3.5, 2000.0, 26.8};
  w.ego.position = {100.0, w.road.lane_center_y(lane)};
  w.ego.speed = 26.8;
  return w;
}

VehicleState npc_at(const WorldState& w, double dx, int lane, double speed) {
  VehicleState v = w.ego;
  v.position = {w.ego.position.x() + dx, w.road.lane_center_y(lane)};
  v.speed = speed;
  return v;
}

}  // namespace

TEST_CASE("empty road at cruise in the lane center is a fixed point") {
  WorldState w = cruise_world();
  EgoMemory mem;
  const Control c = ego_decide(w, EgoParams{}, mem);
  CHECK(std::abs(c.steer) < 1e-9);
  CHECK(std::abs(c.accel) < 1e-9);
}

TEST_CASE("converges to the lane center and cruise speed from an offset start") {
  WorldState w = cruise_world();
  w.ego.position.y() += 1.2;
  w.ego.speed = 20.0;
  EgoMemory mem;
  const EgoParams params;
  const ControlLimits limits;
  for (int i = 0; i < 300; ++i) {  // 10 s
    const Control c = ego_decide(w, params, mem);
    w = step_world(w, std::array{c}, limits);
  }
  CHECK(std::abs(w.ego.position.y() - w.road.lane_center_y(2)) < 0.2);
  CHECK(w.ego.speed == doctest::Approx(26.8).epsilon(0.02));
  CHECK(std::abs(w.ego.heading) < 0.02);
}

TEST_CASE("emergency brake on an imminent in-lane obstacle") {
  WorldState w = cruise_world();
  w.ego.speed = 20.0;
  w.npcs.push_back(npc_at(w, 5.0, 2, 0.0));  // headway 0.25 s << 1.5 s
  EgoMemory mem;
  const EgoParams params;
  const Control c = ego_decide(w, params, mem);
  CHECK(c.accel == -params.max_brake);
}

TEST_CASE("no emergency reaction to an adjacent-lane neighbor") {
  WorldState w = cruise_world();
  w.npcs.push_back(npc_at(w, 2.0, 3, 26.8));  // alongside, one lane left
  EgoMemory mem;
  const Control c = ego_decide(w, EgoParams{}, mem);
  CHECK(c.accel >= 0.0);
}

TEST_CASE("following a slower leader commands deceleration") {
  WorldState w = cruise_world();
  w.ego.speed = 20.0;
  w.npcs.push_back(npc_at(w, 44.7, 2, 10.0));  // 40 m bumper gap, leader slower
  EgoMemory mem;
  const Control c = ego_decide(w, EgoParams{}, mem);
  CHECK(c.accel < 0.0);
  CHECK(c.accel >= -EgoParams{}.max_brake);
}

TEST_CASE("reaction delay defers the response to a sudden threat") {
  WorldState w = cruise_world();
  w.ego.speed = 20.0;
  const EgoParams params;  // reaction_delay 0.5 s = 15 steps at 30 Hz
  w.dt = 1.0 / 30.0;
  w.npcs.push_back(npc_at(w, 500.0, 2, 20.0));  // far away, harmless
  EgoMemory mem;
  for (int i = 0; i < 40; ++i) ego_decide(w, params, mem);  // fill the buffer

  // The obstacle teleports to 5 m ahead; the agent keeps acting on stale
  // perception for the full delay window.
  w.npcs[0] = npc_at(w, 5.0, 2, 0.0);
  int calls_until_brake = 0;
  while (calls_until_brake < 100) {
    ++calls_until_brake;
    if (ego_decide(w, params, mem).accel == -params.max_brake) break;
  }
  CHECK(calls_until_brake == 16);  // 15 stale snapshots + the fresh one

  // A zero-delay agent reacts on the very first call.
  EgoParams instant = params;
  instant.reaction_delay = 0.0;
  EgoMemory mem2;
  CHECK(ego_decide(w, instant, mem2).accel == -instant.max_brake);
}

TEST_CASE("blocked ego changes lane, preferring the left") {
  WorldState w = cruise_world(2);
  w.ego.speed = 10.0;  // below 60% of cruise
  w.dt = 1.0 / 30.0;
  w.npcs.push_back(npc_at(w, 20.0, 2, 10.0));  // slow leader, ahead in-lane
  EgoMemory mem;
  const EgoParams params;
  for (int i = 0; i < static_cast<int>(2.5 / w.dt); ++i) {
    ego_decide(w, params, mem);
  }
  CHECK(mem.target_lane == 3);
}

TEST_CASE("blocked ego falls back to the right when the left is occupied") {
  WorldState w = cruise_world(2);
  w.ego.speed = 10.0;
  w.dt = 1.0 / 30.0;
  w.npcs.push_back(npc_at(w, 20.0, 2, 10.0));
  w.npcs.push_back(npc_at(w, 0.0, 3, 10.0));  // flanker inside the 15 m gap
  EgoMemory mem;
  for (int i = 0; i < static_cast<int>(2.5 / w.dt); ++i) {
    ego_decide(w, EgoParams{}, mem);
  }
  CHECK(mem.target_lane == 1);
}

TEST_CASE("ego_decide is deterministic") {
  Rng rng(31);
  WorldState a = cruise_world();
  a.dt = 1.0 / 30.0;
  a.npcs.push_back(npc_at(a, 30.0, 2, 20.0));
  a.npcs.push_back(npc_at(a, -10.0, 3, 25.0));
  WorldState b = a;
  EgoMemory ma, mb;
  const ControlLimits limits;
  for (int i = 0; i < 600; ++i) {
    const Control npc0{uniform_real(rng, -0.2, 0.2), uniform_real(rng, -3, 2)};
    const Control npc1{uniform_real(rng, -0.2, 0.2), uniform_real(rng, -3, 2)};
    const Control ca = ego_decide(a, EgoParams{}, ma);
    const Control cb = ego_decide(b, EgoParams{}, mb);
    REQUIRE(ca.steer == cb.steer);
    REQUIRE(ca.accel == cb.accel);
    a = step_world(a, std::array{ca, npc0, npc1}, limits);
    b = step_world(b, std::array{cb, npc0, npc1}, limits);
  }
}

namespace {

// A hand-built two-NPC trap: a leader that settles in the front cell and
// brakes to a stop while a flanker occupies the left cell, denying the
// escape lane. The braking NPC out-brakes the agent's max_brake, so the
// delayed emergency reaction cannot recover the gap.
ScenarioGenome pincer_genome() {
  ScenarioGenome g;
  PiChromosome leader;
  leader.init_cell = 2;
  leader.init_speed = 26.8;
  leader.genes.assign(6, PositionInstruction{2, 0.0});
  PiChromosome flanker;
  flanker.init_cell = 8;
  flanker.init_speed = 26.8;
  flanker.genes.assign(6, PositionInstruction{8, 26.8});
  g.npcs = {leader, flanker};
  return g;
}

}  // namespace

TEST_CASE("planted pincer scenario ends in a collision within 30 s") {
  ScenarioSetup setup;
  setup.budget = 30.0;
  ScenarioGenome genome = pincer_genome();
  const ScenarioResult res = run_pi_scenario(setup, genome, 42);
  CHECK(res.outcome == Outcome::kCollision);
  REQUIRE(res.collision.has_value());
  CHECK(res.collision->npc_index == 0);
  CHECK(res.end_time < 30.0);
  CHECK(res.fitness.collided);
  CHECK(res.fitness.score > 1.0);  // ET and proximity terms both engaged
}

TEST_CASE("scenario outcomes: lone distant NPC times out, samples at 6 Hz") {
  ScenarioSetup setup;
  setup.budget = 10.0;
  ScenarioGenome g;
  PiChromosome c;
  c.init_cell = 8;  // alongside in the next lane
  c.init_speed = 26.8;
  c.genes.assign(3, PositionInstruction{8, 26.8});
  g.npcs = {c};
  const ScenarioResult res = run_pi_scenario(setup, g, 7);
  CHECK(res.outcome == Outcome::kTimeout);
  CHECK(res.end_time == 10.0);
  // 10 s at 30 Hz sampled every 5th step = 60 samples.
  CHECK(res.samples.size() == 60);
}

TEST_CASE("road end produces road-exhausted, not an error") {
  ScenarioSetup setup;
  setup.budget = 120.0;
  setup.road.road_length = 400.0;  // ~11 s of cruise from x=100
  ScenarioGenome g;  // no NPCs at all
  const ScenarioResult res = run_pi_scenario(setup, g, 1);
  CHECK(res.outcome == Outcome::kRoadExhausted);
  CHECK(res.end_time < 20.0);
}

TEST_CASE("run_pi_scenario is bit-deterministic in seed and genome") {
  ScenarioSetup setup;
  setup.budget = 20.0;
  Rng rng(9);
  ScenarioGenome g;
  for (int n = 0; n < 2; ++n) {
    PiChromosome c;
    c.init_cell = uniform_int(rng, 1, 8);
    c.init_speed = uniform_real(rng, 8.0, 26.8);
    for (int i = 0; i < 6; ++i) {
      c.genes.push_back({uniform_int(rng, 1, 8), uniform_real(rng, 0.0, 26.8)});
    }
    g.npcs.push_back(c);
  }
  ScenarioGenome g1 = g, g2 = g;
  SimulationTrace t1, t2;
  const ScenarioResult r1 = run_pi_scenario(setup, g1, 555, &t1);
  const ScenarioResult r2 = run_pi_scenario(setup, g2, 555, &t2);
  CHECK(r1.outcome == r2.outcome);
  CHECK(r1.fitness.score == r2.fitness.score);
  CHECK(r1.end_time == r2.end_time);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    REQUIRE(t1[i].ego.position == t2[i].ego.position);
    for (std::size_t n = 0; n < t1[i].npcs.size(); ++n) {
      REQUIRE(t1[i].npcs[n].position == t2[i].npcs[n].position);
    }
  }
  // Repairs were written back identically.
  for (std::size_t n = 0; n < g1.npcs.size(); ++n) {
    for (std::size_t i = 0; i < g1.npcs[n].genes.size(); ++i) {
      REQUIRE(g1.npcs[n].genes[i].target_cell == g2.npcs[n].genes[i].target_cell);
    }
  }
}

TEST_CASE("no scenario starts pre-collided, for any initial cell") {
  ScenarioSetup setup;
  for (GridCell c = 1; c <= kNumCells; ++c) {
    ScenarioGenome g;
    PiChromosome chrom;
    chrom.init_cell = c;
    chrom.init_speed = 26.8;
    chrom.genes.assign(1, PositionInstruction{c, 26.8});
    g.npcs = {chrom};
    const WorldState w = spawn_pi_world(setup, g);
    CHECK(!footprints_overlap(w.ego, w.npcs[0]));
  }
}
