#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qfm/encoding.hpp"
#include "qfm/kernel.hpp"
#include "qfm/matrix.hpp"
#include "qfm/svm.hpp"

namespace qfm {

enum class RefineObjective { MinRmse, MaxKta };

struct RefineConfig {
  RefineObjective objective = RefineObjective::MaxKta;
  std::size_t budget = 100;     // objective evaluations allowed
  double initial_step = 0.5;    // trust-region radius
  double final_step = 1e-3;     // radius below which the search stops
};

/// Every evaluated point in order, with the index of the best one.
struct RefineTrace {
  std::vector<std::pair<std::vector<double>, double>> evaluations;
  std::size_t best_index = 0;

  bool empty() const { return evaluations.empty(); }
};

struct CobylaResult {
  std::vector<double> point;
  RefineTrace trace;
};

/// Current continuous proportionality of each rotation gate in slot order
/// (override when present, the discrete gene value otherwise).
std::vector<double> extract_parameters(const FeatureMapCircuit& fm);

/// Copy of the circuit with overrides set to `parameters`.
FeatureMapCircuit with_parameters(FeatureMapCircuit fm, std::vector<double> parameters);

/// Derivative-free descent with linear surrogate models on a simplex inside
/// a shrinking trust region. Spends at most `budget` evaluations and returns
/// the best point seen, never worse than f(x0).
CobylaResult cobyla_minimize(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const RefineConfig& config);

/// Kernel hook used to stub out the statevector path in dry runs.
using CircuitKernel = std::function<double(const FeatureMapCircuit&, std::span<const double>,
                                           std::span<const double>)>;

struct RefineResult {
  FeatureMapCircuit circuit;
  RefineTrace trace;
  std::uint64_t kernel_evaluations = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

/// Tunes the rotation proportionalities of a circuit on the training split,
/// either minimizing the adjusted RMSE of a retrained SVM or maximizing
/// kernel-target alignment. Each objective evaluation recomputes the
/// training Gram matrix. Gate structure is untouched; the discrete gene
/// parameters stay in the chromosome and the tuned values live in the
/// returned circuit's overrides.
RefineResult refine_circuit(const FeatureMapCircuit& fm, const Matrix& train_features,
                            std::span<const int> train_labels, const RefineConfig& config,
                            double svm_c = 1.0, double rmse_confidence = 1.0,
                            RmseVariant rmse_variant = RmseVariant::Symmetric,
                            const CircuitKernel* kernel_override = nullptr);

/// CSV rows: evaluation index, parameters..., objective.
void write_trace_csv(std::ostream& out, const RefineTrace& trace);

}  // namespace qfm
