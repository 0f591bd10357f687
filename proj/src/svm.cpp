#include "qfm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qfm/error.hpp"

namespace qfm {

namespace {

constexpr double kKktTolerance = 1e-6;
constexpr double kTau = 1e-12;

void check_labels(std::span<const int> labels) {
  bool pos = false;
  bool neg = false;
  for (const int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "labels must be -1 or +1");
    }
  }
  if (!pos || !neg) {
    throw Error(ErrorCode::DegenerateProblem, "training labels contain a single class");
  }
}

std::vector<double> decision_values(const SvmModel& model, const Matrix& cross) {
  if (cross.cols() != model.dual_coefficients.size()) {
    throw Error(ErrorCode::Dimension, "kernel matrix column count != training set size");
  }
  std::vector<double> df(cross.rows());
  for (std::size_t i = 0; i < cross.rows(); ++i) {
    df[i] = decision_function(model, cross.row(i));
  }
  return df;
}

int predicted_class(double df) { return df >= 0.0 ? 1 : -1; }  // sgn(0) = +1

}  // namespace

SvmModel train_svm(const Matrix& gram, std::span<const int> labels, double c) {
  const std::size_t n = labels.size();
  if (gram.rows() != n || gram.cols() != n || n == 0) {
    throw Error(ErrorCode::Dimension, "gram matrix shape does not match labels");
  }
  if (!(c > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "regularization C must be positive");
  }
  check_labels(labels);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a at a = 0
  const auto q = [&](std::size_t i, std::size_t j) {
    return labels[i] * labels[j] * gram(i, j);
  };

  const std::size_t max_iterations = 100000 + 200 * n;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    // Maximal violating pair.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -labels[t] * grad[t];
      const bool in_up = (labels[t] > 0 && alpha[t] < c) || (labels[t] < 0 && alpha[t] > 0);
      const bool in_low = (labels[t] > 0 && alpha[t] > 0) || (labels[t] < 0 && alpha[t] < c);
      if (in_up && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < kKktTolerance) break;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (labels[i] != labels[j]) {
      double quad = gram(i, i) + gram(j, j) + 2.0 * labels[i] * labels[j] * gram(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = -diff;
        }
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = c + diff;
        }
      }
    } else {
      double quad = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = sum;
        }
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = sum;
        }
      }
    }

    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += q(t, i) * di + q(t, j) * dj;
    }
  }

  // rho from free support vectors, midpoint of the bound gap otherwise.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = labels[t] * grad[t];
    if (alpha[t] >= c) {
      if (labels[t] < 0) {
        upper = std::min(upper, yg);
      } else {
        lower = std::max(lower, yg);
      }
    } else if (alpha[t] <= 0.0) {
      if (labels[t] > 0) {
        upper = std::min(upper, yg);
      } else {
        lower = std::max(lower, yg);
      }
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : (upper + lower) / 2.0;

  SvmModel model;
  model.regularization = c;
  model.bias = -rho;
  model.dual_coefficients.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    model.dual_coefficients[t] = alpha[t] * labels[t];
    if (alpha[t] > 0.0) model.training_refs.push_back(t);
  }
  return model;
}

double decision_function(const SvmModel& model, std::span<const double> kernel_row) {
  if (kernel_row.size() != model.dual_coefficients.size()) {
    throw Error(ErrorCode::Dimension, "kernel row length != training set size");
  }
  double s = model.bias;
  for (std::size_t i = 0; i < kernel_row.size(); ++i) {
    s += model.dual_coefficients[i] * kernel_row[i];
  }
  return s;
}

double dual_objective(const SvmModel& model, const Matrix& gram, std::span<const int> labels) {
  const std::size_t n = labels.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += model.dual_coefficients[i] * labels[i];  // alpha_i
    for (std::size_t j = 0; j < n; ++j) {
      quad += model.dual_coefficients[i] * model.dual_coefficients[j] * gram(i, j);
    }
  }
  return linear - 0.5 * quad;
}

double accuracy(const SvmModel& model, const Matrix& cross, std::span<const int> labels) {
  if (cross.rows() != labels.size()) {
    throw Error(ErrorCode::Dimension, "label count != evaluation point count");
  }
  if (labels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "accuracy of an empty evaluation set");
  }
  const auto df = decision_values(model, cross);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < df.size(); ++i) {
    if (predicted_class(df[i]) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

MarginStats margins(const SvmModel& model, const Matrix& gram, std::span<const int> labels) {
  const auto df = decision_values(model, gram);
  MarginStats stats;
  stats.per_point.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    stats.per_point[i] = labels[i] * df[i];
  }
  const double n = static_cast<double>(df.size());
  stats.mean = std::accumulate(stats.per_point.begin(), stats.per_point.end(), 0.0) / n;
  double var = 0.0;
  for (const double m : stats.per_point) var += (m - stats.mean) * (m - stats.mean);
  stats.std_dev = std::sqrt(var / n);
  return stats;
}

double rmse(const SvmModel& model, const Matrix& gram, std::span<const int> labels,
            double confidence, RmseVariant variant) {
  const auto df = decision_values(model, gram);
  const double m = confidence;
  double sum = 0.0;
  for (std::size_t i = 0; i < df.size(); ++i) {
    const double a = df[i];
    double err = 0.0;
    if (labels[i] == 1 && a < m) {
      err = m - a;
    } else if (labels[i] == -1 && a > -m) {
      err = variant == RmseVariant::Symmetric ? a + m : a - m;
    }
    sum += err * err;
  }
  return std::sqrt(sum / static_cast<double>(df.size()));
}

std::vector<RocPoint> roc_points(const SvmModel& model, const Matrix& cross,
                                 std::span<const int> labels) {
  const auto df = decision_values(model, cross);
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (const int y : labels) {
    (y == 1 ? positives : negatives)++;
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::DegenerateProblem, "roc needs both classes");
  }

  std::vector<std::size_t> order(df.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return df[a] > df[b]; });

  std::vector<RocPoint> curve;
  curve.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Points sharing a decision value move in one step.
    const double score = df[order[i]];
    while (i < order.size() && df[order[i]] == score) {
      (labels[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    curve.push_back({static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
  }
  return curve;
}

double roc_auc(const std::vector<RocPoint>& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

ConfusionCounts confusion_matrix(const SvmModel& model, const Matrix& cross,
                                 std::span<const int> labels) {
  const auto df = decision_values(model, cross);
  ConfusionCounts counts;
  for (std::size_t i = 0; i < df.size(); ++i) {
    const int predicted = predicted_class(df[i]);
    if (labels[i] == 1) {
      (predicted == 1 ? counts.tp : counts.fn)++;
    } else {
      (predicted == 1 ? counts.fp : counts.tn)++;
    }
  }
  return counts;
}

}  // namespace qfm
