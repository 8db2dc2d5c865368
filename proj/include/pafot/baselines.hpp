#pragma once

#include "pafot/search.hpp"

namespace pafot {

// Baseline search domain over absolute-road manoeuvre genomes. NPCs spawn
// uniformly over lanes within [20, 120] m ahead of the ego, so both baselines
// pay the distance-closing cost that the grid encoding avoids.
class ManoeuvreDomain {
 public:
  using Genome = ManoeuvreGenome;

  ManoeuvreDomain(ScenarioSetup setup, const GAConfig& cfg)
      : setup_(std::move(setup)), cfg_(cfg) {}

  Genome random_genome(Rng& rng) const;
  void randomize_gene(Genome& g, std::size_t chrom, std::size_t gene, Rng& rng) const;
  Evaluated<Genome> evaluate(Genome genome, std::uint64_t eval_seed) const;

  ManoeuvreGene random_gene(Rng& rng) const;
  ManoeuvreChromosome random_chromosome(Rng& rng, int gene_count,
                                        double gene_duration) const;

  const ScenarioSetup& setup() const { return setup_; }

 private:
  ScenarioSetup setup_;
  GAConfig cfg_;
};

// GA over manoeuvre genomes: the same loop and operators as the grid search,
// parameterized over the gene type.
template <class Observer>
SearchReport<ManoeuvreGenome> avfuzzer_like(const GAConfig& cfg,
                                            const ScenarioSetup& setup,
                                            Observer&& observer) {
  return run_search(cfg, ManoeuvreDomain(setup, cfg), std::forward<Observer>(observer));
}

// Random baseline: the same number of scenario evaluations as the GA's
// primary budget (generations x population), each scenario assigning every
// NPC a fresh random manoeuvre every `interval` seconds.
template <class Observer>
SearchReport<ManoeuvreGenome> random_fuzz(const GAConfig& cfg,
                                          const ScenarioSetup& setup,
                                          Observer&& observer,
                                          double interval = 5.0) {
  validate(cfg);
  const ManoeuvreDomain domain(setup, cfg);
  const int genes = std::max(1, static_cast<int>(std::ceil(setup.budget / interval)));
  const long total = static_cast<long>(cfg.generations) * cfg.population_size;

  SearchReport<ManoeuvreGenome> report;
  for (long s = 0; s < total; ++s) {
    const int gen = static_cast<int>(s) / cfg.population_size;
    const int idx = static_cast<int>(s) % cfg.population_size;
    Rng rng(derive_seed(cfg.rng_seed, gen, idx, 50));
    ManoeuvreGenome genome;
    for (int npc = 0; npc < cfg.npc_count; ++npc) {
      genome.npcs.push_back(domain.random_chromosome(rng, genes, interval));
    }
    const std::uint64_t eval_seed = derive_seed(cfg.rng_seed, gen, idx, 0);
    Evaluated<ManoeuvreGenome> ev = domain.evaluate(std::move(genome), eval_seed);
    ev.eval_seed = eval_seed;
    ++report.evaluations;
    report.total_sim_time += ev.end_time;
    if (ev.outcome == Outcome::kCollision) {
      report.collisions.push_back(
          {ev.input_genome, eval_seed, ev.end_time, gen, idx, EvalPhase::kMain});
    }
    if (!report.best || better(ev, *report.best)) report.best = ev;
    observer(gen, idx, EvalPhase::kMain, ev);
  }
  return report;
}

}  // namespace pafot
