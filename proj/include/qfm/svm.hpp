#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfm/matrix.hpp"

namespace qfm {

/// Trained dual soft-margin SVM over a precomputed kernel matrix.
/// dual_coefficients[i] = alpha_i * y_i, so the decision function is
/// df(x) = sum_i dual_coefficients[i] * k(x, x_i) + bias.
struct SvmModel {
  std::vector<double> dual_coefficients;
  double bias = 0.0;
  std::vector<std::size_t> training_refs;  // indices with alpha_i > 0
  double regularization = 1.0;             // C
};

struct MarginStats {
  double mean = 0.0;
  double std_dev = 0.0;
  std::vector<double> per_point;  // signed functional margins y_i * df(x_i)
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

enum class RmseVariant { Symmetric, Literal };

/// Solves the standard dual problem on a precomputed kernel matrix with
/// working-pair coordinate ascent (SMO, maximal-violating-pair selection) to
/// KKT tolerance 1e-6. Bias comes from the free support vectors.
/// Throws Error(DegenerateProblem) unless both classes are present.
SvmModel train_svm(const Matrix& gram, std::span<const int> labels, double c);

/// kernel_row holds the kernel values of one point against all training
/// points, in training order.
double decision_function(const SvmModel& model, std::span<const double> kernel_row);

/// Value of the dual objective at the model's coefficients; used to compare
/// against independent solvers.
double dual_objective(const SvmModel& model, const Matrix& gram, std::span<const int> labels);

/// Fraction of rows of `cross` classified as their label; sgn(0) counts as +1.
double accuracy(const SvmModel& model, const Matrix& cross, std::span<const int> labels);

MarginStats margins(const SvmModel& model, const Matrix& gram, std::span<const int> labels);

/// Root mean squared shortfall from the confidence target m: points already
/// classified past the target contribute zero. The Symmetric variant
/// penalizes negatives by their distance to -m; Literal keeps the (a - m)
/// form for the negative branch.
double rmse(const SvmModel& model, const Matrix& gram, std::span<const int> labels,
            double confidence = 1.0, RmseVariant variant = RmseVariant::Symmetric);

/// Threshold sweep over the decision values, from (0,0) to (1,1) inclusive,
/// monotone in both coordinates. Requires both classes.
std::vector<RocPoint> roc_points(const SvmModel& model, const Matrix& cross,
                                 std::span<const int> labels);

double roc_auc(const std::vector<RocPoint>& curve);

ConfusionCounts confusion_matrix(const SvmModel& model, const Matrix& cross,
                                 std::span<const int> labels);

}  // namespace qfm
