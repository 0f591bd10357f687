#include "qfm/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qfm/error.hpp"

namespace qfm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool dominates(const FitnessVector& a, const FitnessVector& b) {
  return a.objectives[0] < b.objectives[0] && a.objectives[1] < b.objectives[1];
}

// (rank asc, crowding desc); the first argument wins ties.
bool preferred(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding >= b.crowding;
}

void assign_rank_and_crowding(Population& population) {
  std::vector<FitnessVector> fitness(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) fitness[i] = *population[i].fitness;
  const auto fronts = non_dominated_sort(fitness);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<FitnessVector> front_fitness;
    front_fitness.reserve(fronts[f].size());
    for (const std::size_t idx : fronts[f]) front_fitness.push_back(fitness[idx]);
    const auto crowding = crowding_distance(front_fitness);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      population[fronts[f][k]].rank = static_cast<int>(f);
      population[fronts[f][k]].crowding = crowding[k];
    }
  }
}

GenerationStats collect_stats(std::size_t generation, const Population& population,
                              const CachedEvaluator& evaluator) {
  GenerationStats stats;
  stats.generation = generation;
  stats.best_objective1 = kInf;
  stats.best_objective2 = kInf;
  for (const auto& ind : population) {
    stats.best_objective1 = std::min(stats.best_objective1, ind.fitness->objectives[0]);
    stats.best_objective2 = std::min(stats.best_objective2, ind.fitness->objectives[1]);
    if (ind.rank == 0) ++stats.front_size;
  }
  stats.evaluation_slots = evaluator.evaluation_slots();
  stats.evaluator_calls = evaluator.evaluator_calls();
  stats.cache_hits = evaluator.cache_hits();
  stats.kernel_evaluations = evaluator.kernel_evaluations();
  return stats;
}

}  // namespace

FitnessVector CachedEvaluator::evaluate(const Chromosome& chromosome) {
  ++slots_;
  if (cache_enabled_) {
    const auto it = cache_.find(chromosome.bits);
    if (it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++calls_;
  const FitnessVector fitness = inner_.evaluate(chromosome);
  if (!std::isfinite(fitness.objectives[0]) || !std::isfinite(fitness.objectives[1])) {
    throw Error(ErrorCode::InvalidArgument,
                "evaluator produced a non-finite fitness for bits " + chromosome.bits);
  }
  if (cache_enabled_) cache_.emplace(chromosome.bits, fitness);
  return fitness;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(
    std::span<const FitnessVector> fitness) {
  const std::size_t n = fitness.size();
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::vector<std::size_t>> fronts;

  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(fitness[p], fitness[q])) {
        dominated[p].push_back(q);
      } else if (dominates(fitness[q], fitness[p])) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) current.push_back(p);
  }

  while (!current.empty()) {
    std::sort(current.begin(), current.end());
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (const std::size_t p : current) {
      for (const std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const FitnessVector> front) {
  const std::size_t n = front.size();
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "crowding distance of an empty front");
  }
  std::vector<double> distance(n, 0.0);
  for (std::size_t obj = 0; obj < 2; ++obj) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return front[a].objectives[obj] < front[b].objectives[obj];
    });
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    const double range =
        front[order.back()].objectives[obj] - front[order.front()].objectives[obj];
    if (range <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (distance[order[k]] == kInf) continue;
      distance[order[k]] += (front[order[k + 1]].objectives[obj] -
                             front[order[k - 1]].objectives[obj]) /
                            range;
    }
  }
  return distance;
}

namespace {

void check_fractions(const GaConfig& config) {
  for (const double f : {config.crossover_fraction, config.mutation_probability,
                         config.mutation_bit_fraction}) {
    if (f < 0.0 || f > 1.0) {
      throw Error(ErrorCode::InvalidArgument, "GA fractions must lie in [0, 1]");
    }
  }
}

}  // namespace

Population step(Population population, CachedEvaluator& evaluator, const GaConfig& config,
                Rng& rng) {
  if (population.empty()) {
    throw Error(ErrorCode::InvalidArgument, "step on an empty population");
  }
  check_fractions(config);
  const std::size_t bit_count = population.front().chromosome.bits.size();
  const std::size_t offspring_count = config.offspring_per_generation;
  const std::size_t crossover_count = std::min<std::size_t>(
      offspring_count,
      static_cast<std::size_t>(std::llround(config.crossover_fraction * offspring_count)));
  const std::size_t flip_count =
      static_cast<std::size_t>(std::llround(config.mutation_bit_fraction * bit_count));

  const auto tournament = [&]() -> std::size_t {
    const std::size_t a = rng.uniform_int(population.size());
    const std::size_t b = rng.uniform_int(population.size());
    return preferred(population[a], population[b]) ? a : b;
  };

  std::vector<std::size_t> parent_pool;
  Population offspring;
  offspring.reserve(offspring_count);
  for (std::size_t k = 0; k < crossover_count; ++k) {
    const std::size_t pa = tournament();
    const std::size_t pb = tournament();
    parent_pool.push_back(pa);
    parent_pool.push_back(pb);
    const std::size_t cut = 1 + rng.uniform_int(bit_count - 1);
    Individual child;
    child.chromosome = population[pa].chromosome;
    child.chromosome.bits = population[pa].chromosome.bits.substr(0, cut) +
                            population[pb].chromosome.bits.substr(cut);
    offspring.push_back(std::move(child));
  }
  for (std::size_t k = crossover_count; k < offspring_count; ++k) {
    const std::size_t src =
        parent_pool.empty() ? tournament() : parent_pool[rng.uniform_int(parent_pool.size())];
    Individual child;
    child.chromosome = population[src].chromosome;
    offspring.push_back(std::move(child));
  }

  std::vector<std::size_t> indices(bit_count);
  for (auto& child : offspring) {
    if (rng.uniform() >= config.mutation_probability) continue;
    // Flip flip_count distinct positions (partial Fisher-Yates).
    std::iota(indices.begin(), indices.end(), 0);
    for (std::size_t k = 0; k < flip_count; ++k) {
      const std::size_t j = k + rng.uniform_int(bit_count - k);
      std::swap(indices[k], indices[j]);
      char& bit = child.chromosome.bits[indices[k]];
      bit = bit == '0' ? '1' : '0';
    }
  }

  for (auto& child : offspring) {
    child.fitness = evaluator.evaluate(child.chromosome);
  }

  Population combined = std::move(population);
  combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));

  std::vector<FitnessVector> fitness(combined.size());
  for (std::size_t i = 0; i < combined.size(); ++i) fitness[i] = *combined[i].fitness;
  const auto fronts = non_dominated_sort(fitness);

  Population next;
  next.reserve(config.population_size);
  for (std::size_t f = 0; f < fronts.size() && next.size() < config.population_size; ++f) {
    std::vector<FitnessVector> front_fitness;
    front_fitness.reserve(fronts[f].size());
    for (const std::size_t idx : fronts[f]) front_fitness.push_back(fitness[idx]);
    const auto crowding = crowding_distance(front_fitness);

    std::vector<std::size_t> members(fronts[f].size());
    std::iota(members.begin(), members.end(), 0);
    if (next.size() + members.size() > config.population_size) {
      std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return crowding[a] > crowding[b];
      });
    }
    for (const std::size_t k : members) {
      if (next.size() == config.population_size) break;
      Individual survivor = std::move(combined[fronts[f][k]]);
      survivor.rank = static_cast<int>(f);
      survivor.crowding = crowding[k];
      next.push_back(std::move(survivor));
    }
  }
  return next;
}

GaResult run(const GaConfig& config, FitnessEvaluator& evaluator) {
  if (config.population_size == 0) {
    throw Error(ErrorCode::InvalidArgument, "population size must be positive");
  }
  Rng rng(config.seed);
  CachedEvaluator cached(evaluator, config.fitness_cache);

  Population population;
  population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    Individual ind;
    ind.chromosome = random_chromosome(rng, config.qubit_budget, config.layer_budget);
    ind.fitness = cached.evaluate(ind.chromosome);
    population.push_back(std::move(ind));
  }
  assign_rank_and_crowding(population);

  GaResult result;
  result.history.push_back(collect_stats(1, population, cached));

  const std::size_t steps = config.generations <= 1 ? 0 : config.generations - 1;
  for (std::size_t s = 0; s < steps; ++s) {
    population = step(std::move(population), cached, config, rng);
    result.history.push_back(collect_stats(s + 2, population, cached));
  }

  result.population = std::move(population);
  result.evaluation_slots = cached.evaluation_slots();
  result.evaluator_calls = cached.evaluator_calls();
  result.cache_hits = cached.cache_hits();
  return result;
}

}  // namespace qfm
