#pragma once

#include <random>
#include <utility>
#include <vector>

#include "ecosim/semantics.hpp"

namespace ecosim {

using Rng = std::mt19937_64;

struct EvolutionParams {
  double crossover_fraction = 0.10;
  double mutation_fraction = 0.10;
  int base_pop_size = 40;
  double size_factor = 10.0;
  double parsimony_alpha = 0.5;
  int max_generations = 100;
  int stagnation_window = 15;
};

// Immutable view of a Habitat's Agent-pool taken when a Population is seeded.
struct PoolSnapshot {
  std::vector<Agent> agents;
  std::vector<AgentSequence> sequences;
};

struct Individual {
  AgentSequence seq;
  double raw = 0.0;
  double effective = 0.0;
};

struct Population {
  std::vector<Individual> individuals;
  int generation = 0;
};

int dynamic_population_size(double avg_len, const EvolutionParams& p);

double average_length(const Population& pop);

// Parsimony pressure: sequences longer than the population average are
// evaluated with a divided fitness, keeping the (0,1] range.
double effective_fitness(const AgentSequence& seq, const UserRequest& request, double avg_len,
                         const EvolutionParams& p);
double apply_parsimony(double raw, std::size_t len, double avg_len, const EvolutionParams& p);

// Computes raw and effective fitness for every individual against the
// population's current average length.
void evaluate(Population& pop, const UserRequest& request, const EvolutionParams& p);

Population seed_population(const PoolSnapshot& pool, const UserRequest& request,
                           const EvolutionParams& p, Rng& rng);

// Fitness-proportional, non-elitist sampling with replacement; the next
// generation's size follows the parents' average length.
Population select_next_generation(const Population& pop, const EvolutionParams& p, Rng& rng);

// One-point crossover with an independent cut per parent; tails exchanged.
std::pair<AgentSequence, AgentSequence> crossover(const AgentSequence& p1, const AgentSequence& p2,
                                                  Rng& rng);

// One point mutation: insert, replace, or delete at a uniform position.
// Delete is excluded at length 1.
AgentSequence mutate(const AgentSequence& ind, const PoolSnapshot& pool, Rng& rng);

struct EvolveResult {
  AgentSequence best;
  double best_raw_fitness = 0.0;
  int generations_run = 0;
  // Mean member count per individual, one entry per evaluated generation.
  std::vector<double> mean_length_per_generation;
};

EvolveResult evolve(const PoolSnapshot& pool, const UserRequest& request, const EvolutionParams& p,
                    Rng& rng);

}  // namespace ecosim
