#pragma once

#include <vector>

#include "pafot/pi_plan.hpp"

namespace pafot {

// One NPC of a grid-based scenario: where it starts relative to the ego and
// the PI sequence it executes.
struct PiChromosome {
  GridCell init_cell = 2;
  double init_speed = 0.0;
  std::vector<PositionInstruction> genes;
};

// An individual of the grid-based search: one chromosome per NPC.
struct ScenarioGenome {
  std::vector<PiChromosome> npcs;

  std::size_t gene_count() const {
    std::size_t n = 0;
    for (const auto& c : npcs) n += c.genes.size();
    return n;
  }
};

// Baseline encoding: absolute-road manoeuvres instead of ego-relative cells.
enum class ManoeuvreAction {
  kKeepLane,
  kLaneChangeLeft,
  kLaneChangeRight,
  kAccelerate,
  kDecelerate,
  kBrakeHard,
};
inline constexpr int kNumManoeuvreActions = 6;

struct ManoeuvreGene {
  ManoeuvreAction action = ManoeuvreAction::kKeepLane;
  double duration = 5.0;  // s, > 0
};

struct ManoeuvreChromosome {
  int init_lane = 0;
  double init_gap = 50.0;  // m ahead of the ego spawn
  double init_speed = 0.0;
  std::vector<ManoeuvreGene> genes;
};

struct ManoeuvreGenome {
  std::vector<ManoeuvreChromosome> npcs;

  std::size_t gene_count() const {
    std::size_t n = 0;
    for (const auto& c : npcs) n += c.genes.size();
    return n;
  }
};

}  // namespace pafot
