#include "qfm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "qfm/error.hpp"
#include "qfm/kernel.hpp"
#include "qfm/simulator.hpp"

namespace qfm {

namespace {

// Sentinel for candidates whose evaluation failed: strictly worse than any
// reachable first objective (-accuracy >= -1, -KTA >= -1) and effectively
// infinite size, so NSGA-II deprioritizes them instead of aborting the run.
constexpr double kSentinelObjective1 = 2.0;
constexpr double kSentinelObjective2 = 1e18;

GramMatrix build_gram(const FeatureMapCircuit& fm, const Matrix& samples,
                      const CircuitKernel* kernel_override) {
  if (kernel_override == nullptr) return gram_matrix(fm, samples);
  const KernelFn bound = [&](std::span<const double> x, std::span<const double> y) {
    return (*kernel_override)(fm, x, y);
  };
  return gram_matrix_fn(bound, samples);
}

CrossKernel build_cross(const FeatureMapCircuit& fm, const Matrix& a, const Matrix& b,
                        const CircuitKernel* kernel_override) {
  if (kernel_override == nullptr) return cross_kernel(fm, a, b);
  const KernelFn bound = [&](std::span<const double> x, std::span<const double> y) {
    return (*kernel_override)(fm, x, y);
  };
  return cross_kernel_fn(bound, a, b);
}

}  // namespace

std::string ApproachSpec::id() const {
  std::string s = std::to_string(base);
  if (refinement == Refinement::MinRmse) s += ".1";
  if (refinement == Refinement::MaxKta) s += ".2";
  return s;
}

ApproachSpec ApproachSpec::parse(const std::string& id) {
  ApproachSpec spec;
  if (id.empty() || id.front() < '1' || id.front() > '3') {
    throw Error(ErrorCode::Config, "unknown approach '" + id + "'");
  }
  spec.base = id.front() - '0';
  if (id.size() == 1) {
    spec.refinement = Refinement::None;
  } else if (id.substr(1) == ".1") {
    spec.refinement = Refinement::MinRmse;
  } else if (id.substr(1) == ".2") {
    spec.refinement = Refinement::MaxKta;
  } else {
    throw Error(ErrorCode::Config, "unknown approach '" + id + "'");
  }
  return spec;
}

CandidateEvaluator::CandidateEvaluator(const ApproachSpec& approach,
                                       const ExperimentConfig& config, const Dataset& train,
                                       const Dataset* test,
                                       std::optional<ApproxPartition> partition,
                                       const CircuitKernel* kernel_override)
    : approach_(approach),
      svm_c_(config.svm_c),
      feature_count_(static_cast<unsigned>(train.feature_count())),
      train_(train),
      test_(test),
      partition_(std::move(partition)),
      kernel_override_(kernel_override) {
  if (approach_.base == 1 && test_ == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "approach 1 evaluator needs the test split");
  }
  if (approach_.base == 3 && !partition_.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "approach 3 evaluator needs a partition");
  }
}

FitnessVector CandidateEvaluator::evaluate(const Chromosome& chromosome) {
  try {
    const FeatureMapCircuit fm = decode_chromosome(chromosome, feature_count_);
    const double sm = size_metric(fm).sm;
    FitnessVector fitness;
    switch (approach_.base) {
      case 1: {
        const GramMatrix gram = build_gram(fm, train_.features, kernel_override_);
        counters_.all += gram.evaluation_count;
        counters_.train += gram.evaluation_count;
        const SvmModel model = train_svm(gram.entries, train_.labels, svm_c_);
        const CrossKernel cross =
            build_cross(fm, test_->features, train_.features, kernel_override_);
        counters_.all += cross.evaluation_count;
        counters_.test += cross.evaluation_count;
        counters_.train += cross.evaluation_count;
        const double acc = accuracy(model, cross.entries, test_->labels);
        fitness.objectives = {-acc, weighted_size(sm, acc)};
        break;
      }
      case 2: {
        const GramMatrix gram = build_gram(fm, train_.features, kernel_override_);
        counters_.all += gram.evaluation_count;
        counters_.train += gram.evaluation_count;
        fitness.objectives = {-kta(gram.entries, train_.labels), sm};
        break;
      }
      case 3: {
        KtaApproxResult approx;
        if (kernel_override_ == nullptr) {
          approx = kta_approx(fm, train_.features, train_.labels, *partition_);
        } else {
          const KernelFn bound = [&](std::span<const double> x, std::span<const double> y) {
            return (*kernel_override_)(fm, x, y);
          };
          approx = kta_approx_fn(bound, train_.features, train_.labels, *partition_);
        }
        counters_.all += approx.evaluation_count;
        counters_.train += approx.evaluation_count;
        fitness.objectives = {-approx.value, sm};
        break;
      }
      default:
        throw Error(ErrorCode::InvalidArgument, "unknown approach base");
    }
    if (!std::isfinite(fitness.objectives[0]) || !std::isfinite(fitness.objectives[1])) {
      throw Error(ErrorCode::Simulation, "non-finite fitness");
    }
    return fitness;
  } catch (const Error&) {
    ++failures_;
    return FitnessVector{{kSentinelObjective1, kSentinelObjective2}};
  }
}

BestSelection select_best(std::span<const FeatureMapCircuit> circuits, const Dataset& train,
                          const Dataset& validation, double svm_c) {
  if (circuits.empty()) {
    throw Error(ErrorCode::InvalidArgument, "select_best on an empty population");
  }
  BestSelection best;
  double best_accuracy = -1.0;
  double best_sm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const GramMatrix gram = gram_matrix(circuits[i], train.features);
    best.evaluations.all += gram.evaluation_count;
    best.evaluations.train += gram.evaluation_count;
    const SvmModel model = train_svm(gram.entries, train.labels, svm_c);
    const CrossKernel cross = cross_kernel(circuits[i], validation.features, train.features);
    best.evaluations.all += cross.evaluation_count;
    best.evaluations.validation += cross.evaluation_count;
    best.evaluations.train += cross.evaluation_count;
    const double acc = accuracy(model, cross.entries, validation.labels);
    const double sm = size_metric(circuits[i]).sm;
    if (acc > best_accuracy || (acc == best_accuracy && sm < best_sm)) {
      best_accuracy = acc;
      best_sm = sm;
      best.index = i;
    }
  }
  best.validation_accuracy = best_accuracy;
  return best;
}

namespace {

Dataset build_dataset(const ExperimentConfig& config) {
  if (config.dataset == "moons") {
    return make_moons(config.dataset_size, config.noise, mix_seed(config.seed, "dataset"));
  }
  if (config.dataset == "circles") {
    return make_circles(config.dataset_size, config.noise, mix_seed(config.seed, "dataset"));
  }
  if (config.dataset == "random") {
    return make_random(config.dataset_size, mix_seed(config.seed, "dataset"));
  }
  if (config.dataset == "csv") {
    return load_csv(config.csv_path, config.label_column, config.positive_label,
                    config.negative_label);
  }
  throw Error(ErrorCode::Config, "unknown dataset '" + config.dataset + "'");
}

BaselineResult rbf_baseline(const ExperimentConfig& config, const Splits& splits) {
  BaselineResult baseline;
  const std::size_t d = splits.train.feature_count();
  baseline.gamma = config.rbf_gamma > 0.0 ? config.rbf_gamma : 1.0 / static_cast<double>(d);
  const KernelFn k = rbf_kernel(baseline.gamma);
  const GramMatrix gram = gram_matrix_fn(k, splits.train.features);
  const SvmModel model = train_svm(gram.entries, splits.train.labels, config.svm_c);
  baseline.train_accuracy = accuracy(model, gram.entries, splits.train.labels);
  baseline.test_accuracy =
      accuracy(model, cross_kernel_fn(k, splits.test.features, splits.train.features).entries,
               splits.test.labels);
  baseline.validation_accuracy = accuracy(
      model, cross_kernel_fn(k, splits.validation.features, splits.train.features).entries,
      splits.validation.labels);
  return baseline;
}

std::vector<std::array<double, 3>> decision_grid(const FeatureMapCircuit& fm,
                                                 const SvmModel& model, const Dataset& train,
                                                 const Dataset& validation,
                                                 SplitEvals& evals) {
  constexpr std::size_t kGrid = 100;
  double x_min = validation.features(0, 0);
  double x_max = x_min;
  double y_min = validation.features(0, 1);
  double y_max = y_min;
  for (std::size_t r = 0; r < validation.size(); ++r) {
    x_min = std::min(x_min, validation.features(r, 0));
    x_max = std::max(x_max, validation.features(r, 0));
    y_min = std::min(y_min, validation.features(r, 1));
    y_max = std::max(y_max, validation.features(r, 1));
  }

  Matrix grid(kGrid * kGrid, 2);
  for (std::size_t iy = 0; iy < kGrid; ++iy) {
    const double y = y_min + (y_max - y_min) * static_cast<double>(iy) / (kGrid - 1);
    for (std::size_t ix = 0; ix < kGrid; ++ix) {
      const double x = x_min + (x_max - x_min) * static_cast<double>(ix) / (kGrid - 1);
      grid(iy * kGrid + ix, 0) = x;
      grid(iy * kGrid + ix, 1) = y;
    }
  }
  const CrossKernel cross = cross_kernel(fm, grid, train.features);
  evals.all += cross.evaluation_count;
  evals.train += cross.evaluation_count;

  std::vector<std::array<double, 3>> rows;
  rows.reserve(grid.rows());
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    rows.push_back({grid(r, 0), grid(r, 1), decision_function(model, cross.entries.row(r))});
  }
  return rows;
}

struct BaseRun {
  GaResult ga;
  SplitEvals ga_evals;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto problems = validate_config(config);
  if (!problems.empty()) {
    std::string message = "invalid config:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw Error(ErrorCode::Config, message);
  }

  const Dataset dataset = build_dataset(config);
  PipelineOptions pipeline;
  pipeline.scale_features = config.scale_features;
  pipeline.pca_components = config.pca_components;
  pipeline.validation_is_train_plus_test = config.dataset == "random";
  SplitSpec spec = config.splits;
  if (pipeline.validation_is_train_plus_test) spec.validation_count = 0;
  const Splits splits = prepare_splits(dataset, spec, mix_seed(config.seed, "split"), pipeline);
  const unsigned feature_count = static_cast<unsigned>(splits.train.feature_count());

  ExperimentReport report;
  report.config = config;
  report.dataset_name = dataset.name;
  report.feature_count = feature_count;
  {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    report.timestamp = buf;
  }
  report.baseline = rbf_baseline(config, splits);

  // One GA run is shared by every suffix of the same base approach.
  std::vector<ApproachSpec> requested;
  for (const auto& id : config.approaches) requested.push_back(ApproachSpec::parse(id));
  std::vector<int> bases;
  for (const auto& spec_in : requested) {
    if (std::find(bases.begin(), bases.end(), spec_in.base) == bases.end()) {
      bases.push_back(spec_in.base);
    }
  }

  const auto run_base = [&](int base) {
    ApproachSpec base_spec;
    base_spec.base = base;

    std::optional<ApproxPartition> partition;
    if (base == 3) {
      Rng partition_rng(mix_seed(config.seed, "partition"));
      partition = make_partition(splits.train.size(), config.kta_subsets, partition_rng);
    }
    CandidateEvaluator evaluator(base_spec, config, splits.train,
                                 base == 1 ? &splits.test : nullptr, std::move(partition));

    GaConfig ga;
    ga.population_size = config.population_size;
    ga.offspring_per_generation = config.offspring_per_generation;
    ga.crossover_fraction = config.crossover_fraction;
    ga.mutation_probability = config.mutation_probability;
    ga.mutation_bit_fraction = config.mutation_bit_fraction;
    ga.generations = config.generations;
    ga.seed = mix_seed(config.seed, "ga" + std::to_string(base));
    ga.qubit_budget = config.qubit_budget;
    ga.layer_budget = config.layer_budget;

    BaseRun run_record;
    run_record.ga = run(ga, evaluator);
    run_record.ga_evals = evaluator.counters();
    return run_record;
  };

  std::map<int, BaseRun> base_runs;
  if (config.parallel_approaches && bases.size() > 1) {
    std::vector<BaseRun> results(bases.size());
    std::vector<std::exception_ptr> errors(bases.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          results[i] = run_base(bases[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& error : errors) {
      if (error) std::rethrow_exception(error);
    }
    for (std::size_t i = 0; i < bases.size(); ++i) {
      base_runs.emplace(bases[i], std::move(results[i]));
    }
  } else {
    for (const int base : bases) base_runs.emplace(base, run_base(base));
  }

  for (const auto& approach : requested) {
    const BaseRun& base_run = base_runs.at(approach.base);
    ApproachResult result;
    result.id = approach.id();
    result.ga_history = base_run.ga.history;
    result.counters.ga = base_run.ga_evals;
    result.ga_evaluation_slots = base_run.ga.evaluation_slots;
    result.ga_evaluator_calls = base_run.ga.evaluator_calls;
    result.ga_cache_hits = base_run.ga.cache_hits;

    std::vector<FeatureMapCircuit> circuits;
    circuits.reserve(base_run.ga.population.size());
    for (const auto& ind : base_run.ga.population) {
      circuits.push_back(decode_chromosome(ind.chromosome, feature_count));
    }

    std::vector<RefineTrace> traces(circuits.size());
    if (approach.refinement != ApproachSpec::Refinement::None) {
      RefineConfig refine_config;
      refine_config.objective = approach.refinement == ApproachSpec::Refinement::MinRmse
                                    ? RefineObjective::MinRmse
                                    : RefineObjective::MaxKta;
      refine_config.budget = config.refine_budget;
      refine_config.initial_step = config.refine_initial_step;
      refine_config.final_step = config.refine_final_step;

      std::vector<std::size_t> to_refine(circuits.size());
      std::iota(to_refine.begin(), to_refine.end(), 0);
      if (config.refine_top_k > 0 && config.refine_top_k < circuits.size()) {
        // Top k by the primary GA objective.
        std::stable_sort(to_refine.begin(), to_refine.end(), [&](std::size_t a, std::size_t b) {
          return base_run.ga.population[a].fitness->objectives[0] <
                 base_run.ga.population[b].fitness->objectives[0];
        });
        to_refine.resize(config.refine_top_k);
      }
      for (const std::size_t idx : to_refine) {
        if (circuits[idx].rotation_count() == 0) continue;
        RefineResult refined =
            refine_circuit(circuits[idx], splits.train.features, splits.train.labels,
                           refine_config, config.svm_c, config.rmse_confidence,
                           config.rmse_variant);
        result.counters.refinement.all += refined.kernel_evaluations;
        result.counters.refinement.train += refined.kernel_evaluations;
        RefinementRecord record;
        record.individual = idx;
        record.initial_objective = refined.initial_objective;
        record.final_objective = refined.final_objective;
        record.evaluations = refined.trace.evaluations.size();
        result.refinements.push_back(record);
        circuits[idx] = std::move(refined.circuit);
        traces[idx] = std::move(refined.trace);
      }
    }

    const BestSelection selection =
        select_best(circuits, splits.train, splits.validation, config.svm_c);
    result.counters.selection = selection.evaluations;
    result.best_index = selection.index;
    result.validation_accuracy = selection.validation_accuracy;

    const FeatureMapCircuit& best = circuits[selection.index];
    result.best_chromosome = base_run.ga.population[selection.index].chromosome;
    result.best_overrides = best.overrides;
    if (!traces[selection.index].empty()) result.best_trace = traces[selection.index];

    const GramMatrix train_gram = gram_matrix(best, splits.train.features);
    result.counters.reporting.all += train_gram.evaluation_count;
    result.counters.reporting.train += train_gram.evaluation_count;
    const SvmModel model = train_svm(train_gram.entries, splits.train.labels, config.svm_c);
    result.train_accuracy = accuracy(model, train_gram.entries, splits.train.labels);
    result.train_kta = kta(train_gram.entries, splits.train.labels);
    result.margin = margins(model, train_gram.entries, splits.train.labels);

    const CrossKernel test_cross =
        cross_kernel(best, splits.test.features, splits.train.features);
    result.counters.reporting.all += test_cross.evaluation_count;
    result.counters.reporting.test += test_cross.evaluation_count;
    result.counters.reporting.train += test_cross.evaluation_count;
    result.test_accuracy = accuracy(model, test_cross.entries, splits.test.labels);

    const CrossKernel validation_cross =
        cross_kernel(best, splits.validation.features, splits.train.features);
    result.counters.reporting.all += validation_cross.evaluation_count;
    result.counters.reporting.validation += validation_cross.evaluation_count;
    result.counters.reporting.train += validation_cross.evaluation_count;
    result.roc = roc_points(model, validation_cross.entries, splits.validation.labels);
    result.auc = roc_auc(result.roc);
    result.confusion = confusion_matrix(model, validation_cross.entries,
                                        splits.validation.labels);

    result.size = size_metric(best, result.test_accuracy);
    result.weighted_size_value = *result.size.ws;
    result.circuit_text = render_circuit(best);
    result.gate_list_text = gate_list(best);

    if (feature_count == 2) {
      result.decision_grid = decision_grid(best, model, splits.train, splits.validation,
                                           result.counters.reporting);
    }
    report.approaches.push_back(std::move(result));
  }

  std::uint64_t total = 0;
  for (const auto& [base, run_record] : base_runs) total += run_record.ga_evals.all;
  for (const auto& a : report.approaches) {
    total += a.counters.refinement.all + a.counters.selection.all + a.counters.reporting.all;
  }
  report.total_kernel_evaluations = total;
  return report;
}

}  // namespace qfm
