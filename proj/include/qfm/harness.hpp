#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfm/alignment.hpp"
#include "qfm/config.hpp"
#include "qfm/data.hpp"
#include "qfm/nsga2.hpp"
#include "qfm/refine.hpp"
#include "qfm/svm.hpp"

namespace qfm {

/// One of the nine experiment approaches. The base selects the first GA
/// objective (test accuracy, training KTA, or its subset approximation, all
/// paired with a size metric); the suffix selects the post-GA parameter
/// refinement.
struct ApproachSpec {
  enum class Objective1 { TestAccuracy, TrainKta, TrainKtaApprox };
  enum class Objective2 { WeightedSize, UnweightedSize };
  enum class Refinement { None, MinRmse, MaxKta };

  int base = 1;  // 1, 2 or 3
  Refinement refinement = Refinement::None;

  Objective1 objective1() const {
    return base == 1 ? Objective1::TestAccuracy
                     : (base == 2 ? Objective1::TrainKta : Objective1::TrainKtaApprox);
  }
  Objective2 objective2() const {
    return base == 1 ? Objective2::WeightedSize : Objective2::UnweightedSize;
  }

  std::string id() const;
  static ApproachSpec parse(const std::string& id);
};

/// Kernel evaluation bookkeeping: `all` counts every evaluation once, the
/// per-split counters count the evaluations touching a point of that split
/// (a cross-split pair increments both splits).
struct SplitEvals {
  std::uint64_t all = 0;
  std::uint64_t train = 0;
  std::uint64_t test = 0;
  std::uint64_t validation = 0;
};

struct PhaseCounters {
  SplitEvals ga;
  SplitEvals refinement;
  SplitEvals selection;
  SplitEvals reporting;
};

/// GA fitness evaluator for one base approach. By construction it only ever
/// touches the splits its approach may read: train for the KTA approaches,
/// train and test for the accuracy approach, validation never.
class CandidateEvaluator final : public FitnessEvaluator {
 public:
  CandidateEvaluator(const ApproachSpec& approach, const ExperimentConfig& config,
                     const Dataset& train, const Dataset* test,
                     std::optional<ApproxPartition> partition,
                     const CircuitKernel* kernel_override = nullptr);

  FitnessVector evaluate(const Chromosome& chromosome) override;
  std::uint64_t kernel_evaluations() const override { return counters_.all; }

  const SplitEvals& counters() const { return counters_; }
  std::uint64_t failures() const { return failures_; }

 private:
  ApproachSpec approach_;
  double svm_c_;
  unsigned feature_count_;
  const Dataset& train_;
  const Dataset* test_;
  std::optional<ApproxPartition> partition_;
  const CircuitKernel* kernel_override_;
  SplitEvals counters_;
  std::uint64_t failures_ = 0;
};

struct BestSelection {
  std::size_t index = 0;
  double validation_accuracy = 0.0;
  SplitEvals evaluations;
};

/// Trains an SVM per circuit on the training split and picks the highest
/// validation accuracy; ties fall to smaller SM, then lower index.
BestSelection select_best(std::span<const FeatureMapCircuit> circuits, const Dataset& train,
                          const Dataset& validation, double svm_c);

struct RefinementRecord {
  std::size_t individual = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t evaluations = 0;
};

struct ApproachResult {
  std::string id;
  Chromosome best_chromosome;
  std::vector<double> best_overrides;  // empty when unrefined
  std::size_t best_index = 0;
  SizeMetrics size;
  double weighted_size_value = 0.0;  // WS at the test accuracy
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double train_kta = 0.0;
  MarginStats margin;                   // training split
  std::vector<RocPoint> roc;            // validation split
  double auc = 0.0;
  ConfusionCounts confusion;            // validation split
  std::string circuit_text;
  std::string gate_list_text;
  std::vector<GenerationStats> ga_history;
  PhaseCounters counters;
  std::uint64_t ga_evaluation_slots = 0;
  std::uint64_t ga_evaluator_calls = 0;
  std::uint64_t ga_cache_hits = 0;
  std::vector<RefinementRecord> refinements;
  std::optional<RefineTrace> best_trace;  // refinement trace of the best model
  /// 100x100 decision grid rows (x, y, df) over the validation bounding box;
  /// only filled for 2-D data, written to CSV rather than the JSON report.
  std::vector<std::array<double, 3>> decision_grid;
};

struct BaselineResult {
  double gamma = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double validation_accuracy = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string dataset_name;
  std::size_t feature_count = 0;
  BaselineResult baseline;
  std::vector<ApproachResult> approaches;
  std::uint64_t total_kernel_evaluations = 0;
  std::string timestamp;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes report.json plus, per approach, roc_<id>.csv, circuit_<id>.txt,
/// gatrace_<id>.log and (2-D data only) decision_grid_<id>.csv. The JSON
/// file is written atomically.
void emit_report(const ExperimentReport& report, const std::string& out_dir);

std::string report_to_json(const ExperimentReport& report);

}  // namespace qfm
