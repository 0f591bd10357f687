#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qfm/encoding.hpp"
#include "qfm/rng.hpp"

namespace qfm {

/// Two objectives, both minimized. Evaluators negate maximized metrics.
struct FitnessVector {
  std::array<double, 2> objectives{0.0, 0.0};
};

struct Individual {
  Chromosome chromosome;
  std::optional<FitnessVector> fitness;
  int rank = -1;          // front index, 0 = non-dominated
  double crowding = 0.0;
};

using Population = std::vector<Individual>;

struct GaConfig {
  std::size_t population_size = 100;
  std::size_t offspring_per_generation = 15;
  double crossover_fraction = 0.3;
  double mutation_probability = 0.7;
  double mutation_bit_fraction = 0.2;
  /// Total generation count, the initial random population included; the
  /// default runs 1199 variation steps after the initial evaluation.
  std::size_t generations = 1200;
  std::uint64_t seed = 1;
  unsigned qubit_budget = 6;
  unsigned layer_budget = 6;
  bool fitness_cache = true;
};

class FitnessEvaluator {
 public:
  virtual ~FitnessEvaluator() = default;
  virtual FitnessVector evaluate(const Chromosome& chromosome) = 0;
  /// Cumulative cost spent so far in evaluator-defined units (kernel
  /// evaluations for the experiment evaluators); surfaced in run statistics.
  virtual std::uint64_t kernel_evaluations() const { return 0; }
};

/// Bit-string-keyed fitness cache around an evaluator. Every request counts
/// as one evaluation slot whether or not it hits the cache.
class CachedEvaluator {
 public:
  CachedEvaluator(FitnessEvaluator& inner, bool cache_enabled)
      : inner_(inner), cache_enabled_(cache_enabled) {}

  FitnessVector evaluate(const Chromosome& chromosome);

  std::uint64_t evaluation_slots() const { return slots_; }
  std::uint64_t evaluator_calls() const { return calls_; }
  std::uint64_t cache_hits() const { return hits_; }
  std::uint64_t kernel_evaluations() const { return inner_.kernel_evaluations(); }

 private:
  FitnessEvaluator& inner_;
  bool cache_enabled_;
  std::unordered_map<std::string, FitnessVector> cache_;
  std::uint64_t slots_ = 0;
  std::uint64_t calls_ = 0;
  std::uint64_t hits_ = 0;
};

/// Fronts of mutually non-dominated points; a point is dominated when some
/// other point is strictly better in every objective. Front indices are
/// ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const FitnessVector> fitness);

/// Standard normalized-gap crowding: boundary members of each objective get
/// infinity, interior members the sum of neighbor gaps over the objective
/// range; a zero range contributes nothing.
std::vector<double> crowding_distance(std::span<const FitnessVector> front);

struct GenerationStats {
  std::size_t generation = 0;
  double best_objective1 = 0.0;
  double best_objective2 = 0.0;
  std::size_t front_size = 0;
  std::uint64_t evaluation_slots = 0;
  std::uint64_t evaluator_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t kernel_evaluations = 0;
};

struct GaResult {
  Population population;
  std::vector<GenerationStats> history;
  std::uint64_t evaluation_slots = 0;
  std::uint64_t evaluator_calls = 0;
  std::uint64_t cache_hits = 0;
};

/// One NSGA-II generation: tournament parent selection, single-point
/// crossover for round(crossover_fraction * offspring) children and parent
/// copies for the rest, per-offspring mutation flipping
/// round(mutation_bit_fraction * L) distinct bits, then elitist survival of
/// parents and offspring by front order and descending crowding.
Population step(Population population, CachedEvaluator& evaluator, const GaConfig& config,
                Rng& rng);

/// Evaluates a random initial population, then runs generations - 1 steps.
GaResult run(const GaConfig& config, FitnessEvaluator& evaluator);

}  // namespace qfm
