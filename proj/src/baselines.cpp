#include "pafot/baselines.hpp"

namespace pafot {

ManoeuvreGene ManoeuvreDomain::random_gene(Rng& rng) const {
  ManoeuvreGene gene;
  gene.action =
      static_cast<ManoeuvreAction>(uniform_int(rng, 0, kNumManoeuvreActions - 1));
  gene.duration = uniform_real(rng, 2.0, 8.0);
  return gene;
}

ManoeuvreChromosome ManoeuvreDomain::random_chromosome(Rng& rng, int gene_count,
                                                       double gene_duration) const {
  ManoeuvreChromosome chrom;
  chrom.init_lane = uniform_int(rng, 0, setup_.road.lane_count - 1);
  chrom.init_gap = uniform_real(rng, 20.0, 120.0);
  chrom.init_speed =
      uniform_real(rng, 0.3 * setup_.road.speed_limit, setup_.road.speed_limit);
  for (int i = 0; i < gene_count; ++i) {
    ManoeuvreGene gene = random_gene(rng);
    if (gene_duration > 0.0) gene.duration = gene_duration;
    chrom.genes.push_back(gene);
  }
  return chrom;
}

ManoeuvreGenome ManoeuvreDomain::random_genome(Rng& rng) const {
  ManoeuvreGenome g;
  for (int npc = 0; npc < cfg_.npc_count; ++npc) {
    g.npcs.push_back(random_chromosome(rng, cfg_.genes_per_chromosome, 0.0));
  }
  return g;
}

void ManoeuvreDomain::randomize_gene(Genome& g, std::size_t chrom, std::size_t gene,
                                     Rng& rng) const {
  g.npcs[chrom].genes[gene] = random_gene(rng);
}

Evaluated<ManoeuvreGenome> ManoeuvreDomain::evaluate(Genome genome,
                                                     std::uint64_t eval_seed) const {
  Evaluated<Genome> ev;
  ev.input_genome = genome;  // manoeuvre runs never mutate the genome
  const ScenarioResult res = run_manoeuvre_scenario(setup_, genome, eval_seed);
  ev.genome = std::move(genome);
  ev.fitness = res.fitness;
  ev.outcome = res.outcome;
  ev.end_time = res.end_time;
  return ev;
}

}  // namespace pafot
