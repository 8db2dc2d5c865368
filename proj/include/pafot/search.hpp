#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pafot/scenario.hpp"

namespace pafot {

struct LocalFuzzConfig {
  double trigger_percentile = 0.9;  // of all scores seen so far
  double mutation_rate = 0.8;
  int sub_generations = 3;
  int sub_population = 0;  // 0 = same as the main population size
};

struct RestartConfig {
  int stagnation_window = 5;  // generations
  double epsilon = 0.01;      // score delta counted as improvement
};

struct GAConfig {
  int population_size = 8;
  int generations = 20;
  double p_c = 0.5;
  double p_m = 0.5;
  double elite_fraction = 0.25;
  int genes_per_chromosome = 6;
  int npc_count = 2;
  LocalFuzzConfig local_fuzz;
  RestartConfig restart;
  std::uint64_t rng_seed = 1;
};

inline void validate(const GAConfig& cfg) {
  if (cfg.population_size < 4) throw std::invalid_argument("population_size must be >= 4");
  if (cfg.generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (cfg.p_c < 0.0 || cfg.p_c > 1.0) throw std::invalid_argument("p_c out of [0,1]");
  if (cfg.p_m < 0.0 || cfg.p_m > 1.0) throw std::invalid_argument("p_m out of [0,1]");
  if (cfg.elite_fraction <= 0.0 || cfg.elite_fraction >= 1.0) {
    throw std::invalid_argument("elite_fraction out of (0,1)");
  }
  if (cfg.genes_per_chromosome < 1) throw std::invalid_argument("genes_per_chromosome must be >= 1");
  if (cfg.npc_count < 1) throw std::invalid_argument("npc_count must be >= 1");
}

enum class EvalPhase { kMain, kLocalFuzz };

inline const char* to_string(EvalPhase p) {
  return p == EvalPhase::kMain ? "main" : "local-fuzz";
}

template <class G>
struct Evaluated {
  G genome;        // post-repair; what the GA keeps evolving
  G input_genome;  // exactly as evaluated; replaying this + eval_seed
                   // reproduces the run bit-for-bit
  FitnessRecord fitness;
  Outcome outcome = Outcome::kTimeout;
  double end_time = 0.0;
  std::uint64_t eval_seed = 0;
};

// Higher score wins; ties broken by lower ET. Callers needing the insertion
// order tie-break use stable sorts / strict > comparisons.
template <class G>
bool better(const Evaluated<G>& a, const Evaluated<G>& b) {
  if (a.fitness.score != b.fitness.score) return a.fitness.score > b.fitness.score;
  return a.fitness.et < b.fitness.et;
}

// Swap crossover: with probability p_c one uniformly chosen chromosome of a
// and one of b trade places wholesale. The multiset of chromosomes across the
// pair is preserved.
template <class G>
void crossover(G& a, G& b, double p_c, Rng& rng) {
  if (a.npcs.empty() || b.npcs.empty() || !bernoulli(rng, p_c)) return;
  const int i = uniform_int(rng, 0, static_cast<int>(a.npcs.size()) - 1);
  const int j = uniform_int(rng, 0, static_cast<int>(b.npcs.size()) - 1);
  std::swap(a.npcs[i], b.npcs[j]);
}

// With probability p_m replaces one uniformly chosen gene (across all
// chromosomes) with a fresh random one. Adjacency violations introduced here
// are left for execution-time repair.
template <class G, class RandomizeGene>
void mutate(G& genome, double p_m, Rng& rng, RandomizeGene&& randomize_gene) {
  const auto total = genome.gene_count();
  if (total == 0 || !bernoulli(rng, p_m)) return;
  auto target = static_cast<std::size_t>(
      uniform_int(rng, 0, static_cast<int>(total) - 1));
  for (std::size_t c = 0; c < genome.npcs.size(); ++c) {
    if (target < genome.npcs[c].genes.size()) {
      randomize_gene(genome, c, target, rng);
      return;
    }
    target -= genome.npcs[c].genes.size();
  }
}

inline int elite_count(double elite_fraction, int k) {
  return static_cast<int>(std::ceil(elite_fraction * k));
}

// Indices of `evaluated` ordered best-first (score desc, ET asc, insertion
// order).
template <class G>
std::vector<std::size_t> rank(const std::vector<Evaluated<G>>& evaluated) {
  std::vector<std::size_t> order(evaluated.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return better(evaluated[a], evaluated[b]);
  });
  return order;
}

// Elitist selection: the top ceil(elite_fraction*k) genomes carry over
// unchanged, the rest come from binary-tournament parents put through
// crossover and mutation.
template <class G, class RandomizeGene>
std::vector<G> select_next_generation(const std::vector<Evaluated<G>>& evaluated,
                                      const GAConfig& cfg, Rng& rng,
                                      RandomizeGene&& randomize_gene) {
  const int k = static_cast<int>(evaluated.size());
  const auto order = rank(evaluated);
  const int elites = std::min(elite_count(cfg.elite_fraction, k), k);

  std::vector<G> next;
  next.reserve(k);
  for (int i = 0; i < elites; ++i) next.push_back(evaluated[order[i]].genome);

  auto tournament = [&]() -> const Evaluated<G>& {
    const auto& a = evaluated[uniform_int(rng, 0, k - 1)];
    const auto& b = evaluated[uniform_int(rng, 0, k - 1)];
    return better(a, b) ? a : b;
  };
  while (static_cast<int>(next.size()) < k) {
    G a = tournament().genome;
    G b = tournament().genome;
    crossover(a, b, cfg.p_c, rng);
    mutate(a, cfg.p_m, rng, randomize_gene);
    mutate(b, cfg.p_m, rng, randomize_gene);
    next.push_back(std::move(a));
    if (static_cast<int>(next.size()) < k) next.push_back(std::move(b));
  }
  return next;
}

// Fires when the running best improved by less than epsilon over the last
// stagnation_window generations. `history` is the per-generation best-so-far
// within the current epoch (cleared on restart).
inline bool stagnated(const std::vector<double>& history, const RestartConfig& cfg) {
  const auto w = static_cast<std::size_t>(cfg.stagnation_window);
  if (history.size() < w) return false;
  return history.back() - history[history.size() - w] < cfg.epsilon;
}

struct GenerationStat {
  double best = 0.0;
  double mean = 0.0;
};

template <class G>
struct FoundCollision {
  G genome;
  std::uint64_t eval_seed = 0;
  double time = 0.0;  // simulated collision time within the scenario
  int generation = 0;
  int index = 0;
  EvalPhase phase = EvalPhase::kMain;
};

template <class G>
struct SearchReport {
  std::vector<FoundCollision<G>> collisions;
  std::vector<GenerationStat> per_generation;
  long evaluations = 0;
  double total_sim_time = 0.0;  // simulated seconds across all scenarios
  int local_fuzz_activations = 0;
  int restarts = 0;
  std::optional<Evaluated<G>> best;
};

namespace detail {
inline double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(p * (values.size() - 1));
  return values[idx];
}
}  // namespace detail

// The full GA loop: evaluate, conditional local fuzz, elitist selection,
// stagnation restart. `Domain` supplies the genome type, genome/gene
// randomization, and the scenario evaluation:
//
//   using Genome = ...;
//   Genome random_genome(Rng&) const;
//   void randomize_gene(Genome&, std::size_t chromosome, std::size_t gene, Rng&) const;
//   Evaluated<Genome> evaluate(Genome, std::uint64_t eval_seed) const;
//
// `observer(generation, index, phase, evaluated)` fires once per evaluation
// in a deterministic order. The whole search is a pure function of
// (cfg, domain).
template <class Domain, class Observer>
SearchReport<typename Domain::Genome> run_search(const GAConfig& cfg,
                                                 const Domain& domain,
                                                 Observer&& observer) {
  using G = typename Domain::Genome;
  validate(cfg);

  const int k = cfg.population_size;
  const int sub_pop =
      cfg.local_fuzz.sub_population > 0 ? cfg.local_fuzz.sub_population : k;

  SearchReport<G> report;
  std::vector<double> all_scores;
  std::vector<double> epoch_history;  // best-so-far per generation, this epoch
  double epoch_best = -1.0;

  Rng init_rng(derive_seed(cfg.rng_seed, 0, 0, 10));
  std::vector<G> population;
  population.reserve(k);
  for (int i = 0; i < k; ++i) population.push_back(domain.random_genome(init_rng));

  auto randomize_gene = [&](G& g, std::size_t c, std::size_t i, Rng& rng) {
    domain.randomize_gene(g, c, i, rng);
  };

  auto run_one = [&](G genome, int gen, int idx, EvalPhase phase) {
    const std::uint64_t eval_seed = derive_seed(
        cfg.rng_seed, static_cast<std::uint64_t>(gen),
        static_cast<std::uint64_t>(idx), phase == EvalPhase::kMain ? 0 : 1);
    Evaluated<G> ev = domain.evaluate(std::move(genome), eval_seed);
    ev.eval_seed = eval_seed;
    ++report.evaluations;
    report.total_sim_time += ev.end_time;
    all_scores.push_back(ev.fitness.score);
    if (ev.outcome == Outcome::kCollision) {
      report.collisions.push_back(
          {ev.input_genome, eval_seed, ev.end_time, gen, idx, phase});
    }
    if (!report.best || better(ev, *report.best)) report.best = ev;
    observer(gen, idx, phase, ev);
    return ev;
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Evaluated<G>> evaluated;
    evaluated.reserve(k);
    for (int i = 0; i < k; ++i) {
      evaluated.push_back(run_one(population[i], gen, i, EvalPhase::kMain));
    }

    GenerationStat stat;
    double sum = 0.0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      sum += evaluated[i].fitness.score;
      if (better(evaluated[i], evaluated[best_idx])) best_idx = i;
    }
    stat.best = evaluated[best_idx].fitness.score;
    stat.mean = sum / evaluated.size();
    report.per_generation.push_back(stat);
    epoch_best = std::max(epoch_best, stat.best);
    epoch_history.push_back(epoch_best);

    // Local fuzzer: hill-climb around a promising non-colliding seed.
    const bool promising =
        stat.best >= detail::percentile(all_scores, cfg.local_fuzz.trigger_percentile);
    if (promising && evaluated[best_idx].outcome != Outcome::kCollision &&
        cfg.local_fuzz.sub_generations > 0) {
      ++report.local_fuzz_activations;
      Rng lf_rng(derive_seed(cfg.rng_seed, gen, 0, 20));
      Evaluated<G> current = evaluated[best_idx];
      for (int sg = 0; sg < cfg.local_fuzz.sub_generations; ++sg) {
        for (int j = 0; j < sub_pop; ++j) {
          G cand = current.genome;
          mutate(cand, cfg.local_fuzz.mutation_rate, lf_rng, randomize_gene);
          Evaluated<G> ev = run_one(std::move(cand), gen, k + sg * sub_pop + j,
                                    EvalPhase::kLocalFuzz);
          if (better(ev, current)) current = ev;
        }
      }
      if (better(current, evaluated[best_idx])) {
        evaluated[best_idx] = current;  // the improved seed rejoins the GA
      }
    }

    if (gen + 1 == cfg.generations) break;

    Rng sel_rng(derive_seed(cfg.rng_seed, gen, 0, 30));
    population = select_next_generation(evaluated, cfg, sel_rng, randomize_gene);

    if (stagnated(epoch_history, cfg.restart)) {
      ++report.restarts;
      Rng restart_rng(derive_seed(cfg.rng_seed, gen, 0, 40));
      population.clear();
      for (int i = 0; i < k; ++i) population.push_back(domain.random_genome(restart_rng));
      if (report.best) population[0] = report.best->genome;  // keep the champion
      epoch_history.clear();
      epoch_best = -1.0;
    }
  }
  return report;
}

// The grid-based search domain: ego-relative PI genomes evaluated in the
// embedded simulator.
class GridSearchDomain {
 public:
  using Genome = ScenarioGenome;

  GridSearchDomain(ScenarioSetup setup, const GAConfig& cfg)
      : setup_(std::move(setup)), cfg_(cfg) {
    // Cells that are on-road at the spawn pose; initial placements and walk
    // steps are drawn from these.
    const WorldState base = spawn_pi_world(setup_, ScenarioGenome{});
    spawn_frame_ = grid_frame(base);
    for (GridCell c = 1; c <= kNumCells; ++c) {
      if (lane_of(setup_.road, cell_center(spawn_frame_, c))) spawn_cells_.push_back(c);
    }
    if (spawn_cells_.empty()) {
      throw std::invalid_argument("no on-road grid cell at the ego spawn pose");
    }
  }

  Genome random_genome(Rng& rng) const {
    Genome g;
    for (int npc = 0; npc < cfg_.npc_count; ++npc) {
      PiChromosome chrom;
      chrom.init_cell =
          spawn_cells_[uniform_int(rng, 0, static_cast<int>(spawn_cells_.size()) - 1)];
      chrom.init_speed = random_cruise_speed(rng);
      GridCell cur = chrom.init_cell;
      for (int i = 0; i < cfg_.genes_per_chromosome; ++i) {
        cur = random_walk_step(cur, rng);
        chrom.genes.push_back({cur, random_cruise_speed(rng)});
      }
      g.npcs.push_back(std::move(chrom));
    }
    return g;
  }

  void randomize_gene(Genome& g, std::size_t chrom, std::size_t gene, Rng& rng) const {
    g.npcs[chrom].genes[gene] = {uniform_int(rng, 1, kNumCells),
                                 uniform_real(rng, 0.0, setup_.road.speed_limit)};
  }

  Evaluated<Genome> evaluate(Genome genome, std::uint64_t eval_seed) const {
    Evaluated<Genome> ev;
    ev.input_genome = genome;  // pre-repair, for exact replay
    const ScenarioResult res = run_pi_scenario(setup_, genome, eval_seed);
    ev.genome = std::move(genome);
    ev.fitness = res.fitness;
    ev.outcome = res.outcome;
    ev.end_time = res.end_time;
    return ev;
  }

  const ScenarioSetup& setup() const { return setup_; }

 private:
  double random_cruise_speed(Rng& rng) const {
    return uniform_real(rng, 0.3 * setup_.road.speed_limit, setup_.road.speed_limit);
  }

  // Hold, or move to an on-road ring neighbor, uniformly.
  GridCell random_walk_step(GridCell cur, Rng& rng) const {
    std::vector<GridCell> options{cur};
    for (GridCell c : adjacent_cells(cur)) {
      if (lane_of(setup_.road, cell_center(spawn_frame_, c))) options.push_back(c);
    }
    return options[uniform_int(rng, 0, static_cast<int>(options.size()) - 1)];
  }

  ScenarioSetup setup_;
  GAConfig cfg_;
  GridFrame spawn_frame_;
  std::vector<GridCell> spawn_cells_;
};

}  // namespace pafot
