#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "pafot/search.hpp"

using namespace pafot;

namespace {

// Cheap deterministic domain for exercising the GA loop without the
// simulator. The score is the first gene speed of the first chromosome
// unless `fixed_score` pins it.
struct StubDomain {
  using Genome = ScenarioGenome;
  int npc_count = 1;
  int genes_per_chromosome = 3;
  double fixed_score = -1.0;

  Genome random_genome(Rng& rng) const {
    Genome g;
    for (int n = 0; n < npc_count; ++n) {
      PiChromosome c;
      c.init_cell = uniform_int(rng, 1, 8);
      c.init_speed = uniform_real(rng, 0.0, 1.0);
      for (int i = 0; i < genes_per_chromosome; ++i) {
        c.genes.push_back({uniform_int(rng, 1, 8), uniform_real(rng, 0.0, 1.0)});
      }
      g.npcs.push_back(std::move(c));
    }
    return g;
  }

  void randomize_gene(Genome& g, std::size_t c, std::size_t i, Rng& rng) const {
    g.npcs[c].genes[i] = {uniform_int(rng, 1, 8), uniform_real(rng, 0.0, 1.0)};
  }

  Evaluated<Genome> evaluate(Genome g, std::uint64_t /*seed*/) const {
    Evaluated<Genome> ev;
    ev.genome = std::move(g);
    ev.fitness.score =
        fixed_score >= 0.0 ? fixed_score : ev.genome.npcs[0].genes[0].target_speed;
    ev.fitness.et = 1.0;
    ev.outcome = Outcome::kTimeout;
    ev.end_time = 1.0;
    return ev;
  }
};

ScenarioGenome tagged_genome(double tag, int npcs = 2, int genes = 3) {
  ScenarioGenome g;
  for (int n = 0; n < npcs; ++n) {
    PiChromosome c;
    c.init_speed = tag + n;  // unique chromosome marker
    for (int i = 0; i < genes; ++i) c.genes.push_back({2, tag});
    g.npcs.push_back(std::move(c));
  }
  return g;
}

Evaluated<ScenarioGenome> scored(double score, double et = 1.0) {
  Evaluated<ScenarioGenome> ev;
  ev.genome = tagged_genome(score);
  ev.fitness.score = score;
  ev.fitness.et = et;
  return ev;
}

}  // namespace

TEST_CASE("config validation rejects out-of-range parameters") {
  GAConfig ok;
  CHECK_NOTHROW(validate(ok));
  GAConfig bad = ok;
  bad.population_size = 2;
  CHECK_THROWS(validate(bad));
  bad = ok;
  bad.p_c = 1.5;
  CHECK_THROWS(validate(bad));
  bad = ok;
  bad.elite_fraction = 0.0;
  CHECK_THROWS(validate(bad));
}

TEST_CASE("GridSearchDomain random genomes are well-formed ego-relative walks") {
  ScenarioSetup setup;
  GAConfig cfg;
  cfg.npc_count = 2;
  cfg.genes_per_chromosome = 6;
  const GridSearchDomain domain(setup, cfg);

  const WorldState base = spawn_pi_world(setup, ScenarioGenome{});
  const GridFrame frame = grid_frame(base);
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const ScenarioGenome g = domain.random_genome(rng);
    REQUIRE(g.npcs.size() == 2);
    for (const auto& chrom : g.npcs) {
      REQUIRE(chrom.genes.size() == 6);
      CHECK(lane_of(setup.road, cell_center(frame, chrom.init_cell)).has_value());
      CHECK(chrom.init_speed >= 0.3 * setup.road.speed_limit);
      CHECK(chrom.init_speed <= setup.road.speed_limit);
      GridCell cur = chrom.init_cell;
      for (const auto& gene : chrom.genes) {
        const auto adj = adjacent_cells(cur);
        const bool hold_or_step = gene.target_cell == cur ||
                                  gene.target_cell == adj[0] ||
                                  gene.target_cell == adj[1];
        CHECK(hold_or_step);
        CHECK(lane_of(setup.road, cell_center(frame, gene.target_cell)).has_value());
        cur = gene.target_cell;
      }
    }
  }
  // Same seed, same genomes.
  Rng r1(99), r2(99);
  const ScenarioGenome a = domain.random_genome(r1);
  const ScenarioGenome b = domain.random_genome(r2);
  REQUIRE(a.npcs.size() == b.npcs.size());
  for (std::size_t i = 0; i < a.npcs.size(); ++i) {
    CHECK(a.npcs[i].init_cell == b.npcs[i].init_cell);
    CHECK(a.npcs[i].init_speed == b.npcs[i].init_speed);
  }
}

TEST_CASE("crossover swaps whole chromosomes at rate p_c") {
  Rng rng(7);
  const int trials = 10000;
  int swapped = 0;
  for (int t = 0; t < trials; ++t) {
    ScenarioGenome a = tagged_genome(10.0);
    ScenarioGenome b = tagged_genome(20.0);
    crossover(a, b, 0.5, rng);

    // The multiset of chromosome markers across the pair is conserved.
    std::multiset<double> markers;
    for (const auto& c : a.npcs) markers.insert(c.init_speed);
    for (const auto& c : b.npcs) markers.insert(c.init_speed);
    REQUIRE(markers == std::multiset<double>{10.0, 11.0, 20.0, 21.0});

    bool a_has_foreign = false;
    for (const auto& c : a.npcs) a_has_foreign |= c.init_speed >= 20.0;
    swapped += a_has_foreign;
  }
  CHECK(swapped / double(trials) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("mutate rewrites at most one gene at rate p_m") {
  Rng rng(8);
  StubDomain domain;
  const int trials = 10000;
  int changed_count = 0;
  for (int t = 0; t < trials; ++t) {
    ScenarioGenome g = tagged_genome(5.0);
    const ScenarioGenome before = g;
    mutate(g, 0.5, rng, [&](ScenarioGenome& gg, std::size_t c, std::size_t i,
                            Rng& r) { domain.randomize_gene(gg, c, i, r); });
    int diffs = 0;
    for (std::size_t c = 0; c < g.npcs.size(); ++c) {
      CHECK(g.npcs[c].init_speed == before.npcs[c].init_speed);  // never touched
      for (std::size_t i = 0; i < g.npcs[c].genes.size(); ++i) {
        const bool same =
            g.npcs[c].genes[i].target_cell == before.npcs[c].genes[i].target_cell &&
            g.npcs[c].genes[i].target_speed == before.npcs[c].genes[i].target_speed;
        diffs += !same;
      }
    }
    REQUIRE(diffs <= 1);
    changed_count += diffs;
  }
  // A fresh random gene almost never equals the old one, so the change rate
  // tracks p_m.
  CHECK(changed_count / double(trials) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("elite_count is the ceiling of the elite fraction") {
  CHECK(elite_count(0.25, 4) == 1);
  CHECK(elite_count(0.25, 8) == 2);
  CHECK(elite_count(0.25, 16) == 4);
  CHECK(elite_count(0.25, 20) == 5);
  CHECK(elite_count(0.25, 10) == 3);  // ceil(2.5)
}

TEST_CASE("rank orders by score, then lower ET, then insertion order") {
  std::vector<Evaluated<ScenarioGenome>> evs;
  evs.push_back(scored(0.5, 10.0));  // 0
  evs.push_back(scored(0.9, 10.0));  // 1
  evs.push_back(scored(0.5, 2.0));   // 2: same score as 0, earlier ET
  evs.push_back(scored(0.9, 10.0));  // 3: exact tie with 1 -> insertion order
  const auto order = rank(evs);
  CHECK(order == std::vector<std::size_t>{1, 3, 2, 0});
}

TEST_CASE("select_next_generation carries the elites unchanged") {
  GAConfig cfg;
  cfg.population_size = 8;
  std::vector<Evaluated<ScenarioGenome>> evs;
  for (int i = 0; i < 8; ++i) evs.push_back(scored(i * 0.1));
  Rng rng(3);
  StubDomain domain;
  const auto next = select_next_generation(
      evs, cfg, rng, [&](ScenarioGenome& g, std::size_t c, std::size_t i,
                         Rng& r) { domain.randomize_gene(g, c, i, r); });
  REQUIRE(next.size() == 8);
  // ceil(0.25 * 8) = 2 elites: the 0.7 and 0.6 genomes, in that order.
  CHECK(next[0].npcs[0].genes[0].target_speed == doctest::Approx(0.7));
  CHECK(next[1].npcs[0].genes[0].target_speed == doctest::Approx(0.6));
}

TEST_CASE("stagnated fires only after a full flat window") {
  RestartConfig cfg;  // window 5, epsilon 0.01
  CHECK(!stagnated({0.5, 0.5, 0.5}, cfg));  // history too short
  CHECK(stagnated({0.5, 0.5, 0.5, 0.5, 0.5}, cfg));
  CHECK(!stagnated({0.5, 0.5, 0.5, 0.5, 0.6}, cfg));  // improved within window
  CHECK(stagnated({0.1, 0.6, 0.6, 0.6, 0.6, 0.605}, cfg));
}

TEST_CASE("run_search accounting: one generation evaluates exactly k genomes") {
  GAConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 1;
  cfg.local_fuzz.sub_generations = 0;
  StubDomain domain;
  std::vector<std::tuple<int, int, EvalPhase>> log;
  const auto report = run_search(cfg, domain, [&](int gen, int idx, EvalPhase ph,
                                                  const Evaluated<ScenarioGenome>&) {
    log.emplace_back(gen, idx, ph);
  });
  CHECK(report.evaluations == 4);
  CHECK(report.per_generation.size() == 1);
  CHECK(report.total_sim_time == doctest::Approx(4.0));
  REQUIRE(log.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(log[i] == std::make_tuple(0, i, EvalPhase::kMain));
  }
  REQUIRE(report.best.has_value());
}

TEST_CASE("local fuzzer adds sub_generations x sub_population evaluations") {
  GAConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 2;
  cfg.local_fuzz.sub_generations = 3;  // sub_population 0 -> k
  cfg.restart.epsilon = -1.0;          // never restart
  StubDomain domain;
  domain.fixed_score = 0.5;  // flat fitness: every generation is "promising"
  int local = 0;
  const auto report =
      run_search(cfg, domain, [&](int, int idx, EvalPhase ph,
                                  const Evaluated<ScenarioGenome>&) {
        if (ph == EvalPhase::kLocalFuzz) {
          ++local;
          CHECK(idx >= 4);  // local-fuzz indices continue past the population
        }
      });
  CHECK(report.local_fuzz_activations == 2);
  CHECK(report.evaluations == 2 * (4 + 3 * 4));
  CHECK(local == 2 * 3 * 4);
}

TEST_CASE("restart fires on stagnation and reinjects the champion") {
  GAConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 6;
  cfg.local_fuzz.sub_generations = 0;
  cfg.restart.stagnation_window = 1;  // flat-by-construction: restart each gen
  StubDomain domain;                  // genome-derived score
  double best_before_gen = -1.0;
  double running_best = -1.0;
  int injected_checks = 0;
  const auto report = run_search(
      cfg, domain,
      [&](int gen, int idx, EvalPhase, const Evaluated<ScenarioGenome>& ev) {
        if (gen > 0 && idx == 0) {
          // After every restart the champion is re-evaluated at slot 0.
          CHECK(ev.fitness.score == doctest::Approx(best_before_gen));
          ++injected_checks;
        }
        running_best = std::max(running_best, ev.fitness.score);
        if (idx == cfg.population_size - 1) best_before_gen = running_best;
      });
  CHECK(report.restarts == 5);
  CHECK(injected_checks == 5);
}

TEST_CASE("run_search is a pure function of config and domain") {
  ScenarioSetup setup;
  setup.budget = 5.0;
  GAConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 2;
  cfg.npc_count = 2;
  cfg.genes_per_chromosome = 3;
  cfg.local_fuzz.sub_generations = 1;
  cfg.local_fuzz.sub_population = 2;
  cfg.rng_seed = 2024;
  const GridSearchDomain domain(setup, cfg);

  using Key = std::tuple<int, int, int>;
  std::map<Key, std::pair<double, std::uint64_t>> first, second;
  run_search(cfg, domain, [&](int g, int i, EvalPhase p,
                              const Evaluated<ScenarioGenome>& ev) {
    first[{g, i, int(p)}] = {ev.fitness.score, ev.eval_seed};
  });
  run_search(cfg, domain, [&](int g, int i, EvalPhase p,
                              const Evaluated<ScenarioGenome>& ev) {
    second[{g, i, int(p)}] = {ev.fitness.score, ev.eval_seed};
  });
  CHECK(first == second);
  CHECK(!first.empty());
}

TEST_CASE("collision bookkeeping records generation, index, and phase") {
  ScenarioSetup setup;
  setup.budget = 15.0;
  GAConfig cfg;
  cfg.population_size = 6;
  cfg.generations = 4;
  cfg.npc_count = 2;
  cfg.genes_per_chromosome = 4;
  cfg.rng_seed = 5;
  const GridSearchDomain domain(setup, cfg);

  std::set<std::tuple<int, int, int>> observed_collisions;
  const auto report = run_search(
      cfg, domain, [&](int g, int i, EvalPhase p,
                       const Evaluated<ScenarioGenome>& ev) {
        if (ev.outcome == Outcome::kCollision) {
          observed_collisions.insert({g, i, int(p)});
        }
      });
  CHECK(report.collisions.size() == observed_collisions.size());
  for (const auto& c : report.collisions) {
    CHECK(observed_collisions.count({c.generation, c.index, int(c.phase)}) == 1);
    CHECK(c.time > 0.0);
    // The stored genome + seed reproduce the collision exactly.
    ScenarioGenome g = c.genome;
    const ScenarioResult res = run_pi_scenario(setup, g, c.eval_seed);
    CHECK(res.outcome == Outcome::kCollision);
    CHECK(res.end_time == doctest::Approx(c.time));
  }
}
