#include "ecosim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecosim/errors.hpp"

namespace ecosim {

int dynamic_population_size(double avg_len, const EvolutionParams& p) {
  return p.base_pop_size + static_cast<int>(std::lround(p.size_factor * avg_len));
}

double average_length(const Population& pop) {
  if (pop.individuals.empty()) return 1.0;
  std::size_t total = 0;
  for (const auto& ind : pop.individuals) total += ind.seq.members.size();
  return static_cast<double>(total) / static_cast<double>(pop.individuals.size());
}

double apply_parsimony(double raw, std::size_t len, double avg_len, const EvolutionParams& p) {
  double l = static_cast<double>(len);
  if (l <= avg_len) return raw;
  return raw / (1.0 + p.parsimony_alpha * (l - avg_len));
}

double effective_fitness(const AgentSequence& seq, const UserRequest& request, double avg_len,
                         const EvolutionParams& p) {
  return apply_parsimony(raw_fitness(seq, request), seq.members.size(), avg_len, p);
}

void evaluate(Population& pop, const UserRequest& request, const EvolutionParams& p) {
  double avg_len = average_length(pop);
  for (auto& ind : pop.individuals) {
    ind.raw = raw_fitness(ind.seq, request);
    ind.effective = apply_parsimony(ind.raw, ind.seq.members.size(), avg_len, p);
  }
}

namespace {

std::vector<HabitatId> merge_provenance(const std::vector<HabitatId>& a,
                                        const std::vector<HabitatId>& b) {
  std::vector<HabitatId> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AgentSequence random_seed_individual(const PoolSnapshot& pool, Rng& rng) {
  // 50% singletons, 25% stored sequences, 25% random 2-3-length concatenations.
  std::uniform_int_distribution<int> kind_dist(0, 3);
  std::uniform_int_distribution<std::size_t> agent_dist(0, pool.agents.size() - 1);
  int kind = kind_dist(rng);
  if (kind == 2 && !pool.sequences.empty()) {
    std::uniform_int_distribution<std::size_t> seq_dist(0, pool.sequences.size() - 1);
    return pool.sequences[seq_dist(rng)];
  }
  if (kind == 3) {
    std::uniform_int_distribution<int> len_dist(2, 3);
    int len = len_dist(rng);
    AgentSequence seq;
    for (int i = 0; i < len; ++i) seq.members.push_back(pool.agents[agent_dist(rng)]);
    return seq;
  }
  return AgentSequence{{pool.agents[agent_dist(rng)]}, {}};
}

// Sample k distinct indices from [0,n) via partial Fisher-Yates.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, n - 1);
    std::swap(idx[i], idx[d(rng)]);
  }
  idx.resize(k);
  return idx;
}

std::size_t cohort_size(double fraction, std::size_t pop_size) {
  if (fraction <= 0.0 || pop_size == 0) return 0;
  auto c = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(pop_size)));
  return std::max<std::size_t>(1, std::min(c, pop_size));
}

}  // namespace

Population seed_population(const PoolSnapshot& pool, const UserRequest& request,
                           const EvolutionParams& p, Rng& rng) {
  if (pool.agents.empty()) throw EmptyPool("cannot seed population from an empty Agent-pool");
  Population pop;
  int n0 = dynamic_population_size(1.0, p);
  for (int i = 0; i < n0; ++i) pop.individuals.push_back({random_seed_individual(pool, rng)});
  // One sizing iteration against the realized average length.
  int n1 = dynamic_population_size(average_length(pop), p);
  while (static_cast<int>(pop.individuals.size()) < n1)
    pop.individuals.push_back({random_seed_individual(pool, rng)});
  if (static_cast<int>(pop.individuals.size()) > n1) pop.individuals.resize(n1);
  evaluate(pop, request, p);
  return pop;
}

Population select_next_generation(const Population& pop, const EvolutionParams& p, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(pop.individuals.size());
  for (const auto& ind : pop.individuals) weights.push_back(ind.effective);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  int n = dynamic_population_size(average_length(pop), p);
  Population next;
  next.generation = pop.generation + 1;
  next.individuals.reserve(n);
  for (int i = 0; i < n; ++i) next.individuals.push_back(pop.individuals[pick(rng)]);
  return next;
}

std::pair<AgentSequence, AgentSequence> crossover(const AgentSequence& p1, const AgentSequence& p2,
                                                  Rng& rng) {
  auto cut = [&](const AgentSequence& parent) -> std::size_t {
    if (parent.members.size() <= 1) return parent.members.size();
    std::uniform_int_distribution<std::size_t> d(1, parent.members.size() - 1);
    return d(rng);
  };
  std::size_t c1 = cut(p1);
  std::size_t c2 = cut(p2);
  auto prov = merge_provenance(p1.provenance, p2.provenance);
  AgentSequence child1, child2;
  child1.members.assign(p1.members.begin(), p1.members.begin() + c1);
  child1.members.insert(child1.members.end(), p2.members.begin() + c2, p2.members.end());
  child2.members.assign(p2.members.begin(), p2.members.begin() + c2);
  child2.members.insert(child2.members.end(), p1.members.begin() + c1, p1.members.end());
  child1.provenance = prov;
  child2.provenance = prov;
  return {std::move(child1), std::move(child2)};
}

AgentSequence mutate(const AgentSequence& ind, const PoolSnapshot& pool, Rng& rng) {
  if (pool.agents.empty()) throw EmptyPool("cannot mutate with an empty Agent-pool");
  AgentSequence out = ind;
  std::uniform_int_distribution<std::size_t> pos_dist(0, out.members.size() - 1);
  std::size_t pos = pos_dist(rng);
  int ops = out.members.size() == 1 ? 2 : 3;  // delete excluded at length 1
  std::uniform_int_distribution<int> op_dist(0, ops - 1);
  int op = op_dist(rng);
  std::uniform_int_distribution<std::size_t> agent_dist(0, pool.agents.size() - 1);
  switch (op) {
    case 0:  // insert
      out.members.insert(out.members.begin() + pos, pool.agents[agent_dist(rng)]);
      break;
    case 1:  // replace
      out.members[pos] = pool.agents[agent_dist(rng)];
      break;
    default:  // delete
      out.members.erase(out.members.begin() + pos);
      break;
  }
  return out;
}

EvolveResult evolve(const PoolSnapshot& pool, const UserRequest& request, const EvolutionParams& p,
                    Rng& rng) {
  Population pop = seed_population(pool, request, p, rng);

  EvolveResult result;
  bool have_best = false;
  int since_improvement = 0;

  auto consider = [&](const Population& candidates) {
    bool improved = false;
    for (const auto& ind : candidates.individuals) {
      bool better = !have_best || ind.raw > result.best_raw_fitness ||
                    (ind.raw == result.best_raw_fitness &&
                     ind.seq.members.size() < result.best.members.size());
      if (better) {
        if (!have_best || ind.raw > result.best_raw_fitness) improved = true;
        result.best = ind.seq;
        result.best_raw_fitness = ind.raw;
        have_best = true;
      }
    }
    return improved;
  };

  for (int gen = 0; gen < p.max_generations; ++gen) {
    result.mean_length_per_generation.push_back(average_length(pop));
    ++result.generations_run;
    bool improved = consider(pop);
    since_improvement = improved ? 0 : since_improvement + 1;
    if (result.best_raw_fitness >= 1.0) break;
    if (since_improvement >= p.stagnation_window) break;
    if (gen + 1 == p.max_generations) break;

    pop = select_next_generation(pop, p, rng);
    std::size_t n = pop.individuals.size();

    // Crossover cohort: pair up a random 10% of the survivors.
    std::size_t cx = cohort_size(p.crossover_fraction, n);
    auto cx_idx = sample_indices(n, cx, rng);
    for (std::size_t i = 0; i + 1 < cx_idx.size(); i += 2) {
      auto [c1, c2] = crossover(pop.individuals[cx_idx[i]].seq, pop.individuals[cx_idx[i + 1]].seq, rng);
      pop.individuals[cx_idx[i]].seq = std::move(c1);
      pop.individuals[cx_idx[i + 1]].seq = std::move(c2);
    }

    // Mutation cohort: independent draw, may overlap the crossover cohort.
    std::size_t mu = cohort_size(p.mutation_fraction, n);
    for (std::size_t idx : sample_indices(n, mu, rng))
      pop.individuals[idx].seq = mutate(pop.individuals[idx].seq, pool, rng);

    evaluate(pop, request, p);
  }
  return result;
}

}  // namespace ecosim
