#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfm/matrix.hpp"

namespace qfm {

struct Dataset {
  Matrix features;          // n x d
  std::vector<int> labels;  // -1 / +1
  std::string name;

  std::size_t size() const { return labels.size(); }
  std::size_t feature_count() const { return features.cols(); }
};

struct SplitSpec {
  std::size_t train_count = 210;
  std::size_t test_count = 90;
  std::size_t validation_count = 500;
};

struct PcaModel {
  std::vector<double> mean;
  Matrix components;  // d x k, orthonormal columns
};

struct ScalerModel {
  std::vector<double> min;
  std::vector<double> max;
};

struct Splits {
  Dataset train;
  Dataset test;
  Dataset validation;
};

struct PipelineOptions {
  bool scale_features = true;
  unsigned pca_components = 10;
  /// Appendix rule for the random dataset: validation is the concatenation
  /// of the train and test points.
  bool validation_is_train_plus_test = false;
};

/// Two interleaving half-moons; the upper-left arc is class -1, the
/// lower-right arc class +1. Gaussian noise on both coordinates.
Dataset make_moons(std::size_t n, double noise, std::uint64_t seed);

/// Concentric circles, outer class -1 (radius 1), inner class +1 (radius 0.5).
Dataset make_circles(std::size_t n, double noise, std::uint64_t seed);

/// Uniform points in [-1,1]^2 with balanced, randomly assigned labels.
Dataset make_random(std::size_t n, std::uint64_t seed);

/// Reads a headered CSV. All non-label numeric columns become features;
/// the label column maps positive_label to +1. When negative_label is empty
/// any other value maps to -1, otherwise a value matching neither is an
/// error.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label, const std::string& negative_label = "");
Dataset load_csv_stream(std::istream& in, const std::string& name,
                        const std::string& label_column, const std::string& positive_label,
                        const std::string& negative_label = "");

/// Mean-centered projection onto the top-k covariance eigenvectors. The
/// largest-magnitude entry of each component is made positive so the basis
/// is reproducible.
PcaModel fit_pca(const Matrix& train_features, unsigned k);
Matrix apply_pca(const PcaModel& model, const Matrix& features);

/// Min/max over the training features; apply maps into [-1, 1] on the
/// training range (unseen data may fall outside, it is not clipped).
ScalerModel fit_scaler(const Matrix& train_features);
Matrix apply_scaler(const ScalerModel& model, const Matrix& features);

/// Class-balanced disjoint splits from a seeded per-class shuffle. Leftover
/// samples are dropped.
Splits split(const Dataset& dataset, const SplitSpec& spec, std::uint64_t seed);

/// split() followed by the preprocessing pipeline: PCA when the feature
/// count exceeds pca_components, then scaling, both fit on the training
/// split only.
Splits prepare_splits(const Dataset& dataset, const SplitSpec& spec, std::uint64_t seed,
                      const PipelineOptions& options);

void write_csv(std::ostream& out, const Dataset& dataset);

}  // namespace qfm
