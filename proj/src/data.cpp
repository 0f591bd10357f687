#include "qfm/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qfm/error.hpp"
#include "qfm/linalg.hpp"
#include "qfm/rng.hpp"

namespace qfm {

namespace {

void require_even(std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "generator sample count must be even and positive");
  }
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

Dataset take_rows(const Dataset& dataset, const std::vector<std::size_t>& indices,
                  const std::string& suffix) {
  Dataset out;
  out.name = dataset.name + suffix;
  out.features = Matrix(indices.size(), dataset.feature_count());
  out.labels.resize(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = dataset.features.row(indices[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels[r] = dataset.labels[indices[r]];
  }
  return out;
}

Dataset concat(const Dataset& a, const Dataset& b, const std::string& name) {
  Dataset out;
  out.name = name;
  out.features = Matrix(a.size() + b.size(), a.feature_count());
  out.labels.reserve(a.size() + b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    const auto src = a.features.row(r);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(a.labels[r]);
  }
  for (std::size_t r = 0; r < b.size(); ++r) {
    const auto src = b.features.row(r);
    std::copy(src.begin(), src.end(), out.features.row(a.size() + r).begin());
    out.labels.push_back(b.labels[r]);
  }
  return out;
}

}  // namespace

Dataset make_moons(std::size_t n, double noise, std::uint64_t seed) {
  require_even(n);
  Rng rng(seed);
  const std::size_t half = n / 2;
  Dataset ds;
  ds.name = "moons";
  ds.features = Matrix(n, 2);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < half; ++i) {
    const double t = half == 1 ? 0.0 : M_PI * static_cast<double>(i) / (half - 1);
    ds.features(i, 0) = std::cos(t) + noise * rng.normal();
    ds.features(i, 1) = std::sin(t) + noise * rng.normal();
    ds.labels[i] = -1;  // upper-left arc
    ds.features(half + i, 0) = 1.0 - std::cos(t) + noise * rng.normal();
    ds.features(half + i, 1) = 0.5 - std::sin(t) + noise * rng.normal();
    ds.labels[half + i] = 1;  // lower-right arc
  }
  return ds;
}

Dataset make_circles(std::size_t n, double noise, std::uint64_t seed) {
  require_even(n);
  Rng rng(seed);
  const std::size_t half = n / 2;
  const double inner_factor = 0.5;
  Dataset ds;
  ds.name = "circles";
  ds.features = Matrix(n, 2);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < half; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / half;
    ds.features(i, 0) = std::cos(t) + noise * rng.normal();
    ds.features(i, 1) = std::sin(t) + noise * rng.normal();
    ds.labels[i] = -1;  // outer
    ds.features(half + i, 0) = inner_factor * std::cos(t) + noise * rng.normal();
    ds.features(half + i, 1) = inner_factor * std::sin(t) + noise * rng.normal();
    ds.labels[half + i] = 1;  // inner
  }
  return ds;
}

Dataset make_random(std::size_t n, std::uint64_t seed) {
  require_even(n);
  Rng rng(seed);
  Dataset ds;
  ds.name = "random";
  ds.features = Matrix(n, 2);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.features(i, 0) = rng.uniform(-1.0, 1.0);
    ds.features(i, 1) = rng.uniform(-1.0, 1.0);
    ds.labels[i] = i < n / 2 ? -1 : 1;
  }
  rng.shuffle(ds.labels);
  return ds;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label, const std::string& negative_label) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open CSV file: " + path);
  }
  const auto stem_begin = path.find_last_of("/\\");
  std::string name = stem_begin == std::string::npos ? path : path.substr(stem_begin + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return load_csv_stream(in, name, label_column, positive_label, negative_label);
}

Dataset load_csv_stream(std::istream& in, const std::string& name,
                        const std::string& label_column, const std::string& positive_label,
                        const std::string& negative_label) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Parse, "CSV is empty, expected a header row");
  }
  const auto header = split_line(line);
  std::size_t label_index = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == label_column) label_index = i;
  }
  if (label_index == header.size()) {
    throw Error(ErrorCode::Parse, "label column '" + label_column + "' not found in header");
  }

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::Parse, "row " + std::to_string(line_number) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(header.size()));
    }
    std::vector<double> features;
    features.reserve(header.size() - 1);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string cell = trim(cells[i]);
      if (i == label_index) {
        if (cell == positive_label) {
          labels.push_back(1);
        } else if (negative_label.empty() || cell == negative_label) {
          labels.push_back(-1);
        } else {
          throw Error(ErrorCode::Parse, "row " + std::to_string(line_number) +
                                            ": unknown label value '" + cell + "'");
        }
        continue;
      }
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        features.push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "row " + std::to_string(line_number) +
                                          ": non-numeric feature value '" + cell + "'");
      }
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::Parse, "CSV contains no data rows");
  }

  Dataset ds;
  ds.name = name;
  ds.features = Matrix(rows.size(), rows.front().size());
  ds.labels = std::move(labels);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), ds.features.row(r).begin());
  }
  return ds;
}

PcaModel fit_pca(const Matrix& train_features, unsigned k) {
  const std::size_t n = train_features.rows();
  const std::size_t d = train_features.cols();
  if (d < k) {
    throw Error(ErrorCode::Dimension, "PCA asked for " + std::to_string(k) +
                                          " components from " + std::to_string(d) +
                                          " features");
  }
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "PCA needs at least two samples");
  }

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) model.mean[c] += train_features(r, c);
  }
  for (auto& m : model.mean) m /= static_cast<double>(n);

  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = train_features(r, i) - model.mean[i];
      for (std::size_t j = i; j < d; ++j) {
        cov(i, j) += xi * (train_features(r, j) - model.mean[j]);
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }

  const SymmetricEigen eig = eigen_symmetric(cov);
  model.components = Matrix(d, k);
  for (unsigned c = 0; c < k; ++c) {
    std::size_t peak = 0;
    for (std::size_t r = 1; r < d; ++r) {
      if (std::abs(eig.vectors(r, c)) > std::abs(eig.vectors(peak, c))) peak = r;
    }
    const double sign = eig.vectors(peak, c) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r) model.components(r, c) = sign * eig.vectors(r, c);
  }
  return model;
}

Matrix apply_pca(const PcaModel& model, const Matrix& features) {
  const std::size_t d = model.mean.size();
  const std::size_t k = model.components.cols();
  if (features.cols() != d) {
    throw Error(ErrorCode::Dimension, "PCA input feature count mismatch");
  }
  Matrix out(features.rows(), k);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        s += (features(r, i) - model.mean[i]) * model.components(i, c);
      }
      out(r, c) = s;
    }
  }
  return out;
}

ScalerModel fit_scaler(const Matrix& train_features) {
  if (train_features.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "scaler needs at least one sample");
  }
  ScalerModel model;
  const std::size_t d = train_features.cols();
  model.min.assign(d, 0.0);
  model.max.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double lo = train_features(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < train_features.rows(); ++r) {
      lo = std::min(lo, train_features(r, c));
      hi = std::max(hi, train_features(r, c));
    }
    model.min[c] = lo;
    model.max[c] = hi;
  }
  return model;
}

Matrix apply_scaler(const ScalerModel& model, const Matrix& features) {
  if (features.cols() != model.min.size()) {
    throw Error(ErrorCode::Dimension, "scaler input feature count mismatch");
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t c = 0; c < features.cols(); ++c) {
    const double range = model.max[c] - model.min[c];
    for (std::size_t r = 0; r < features.rows(); ++r) {
      out(r, c) = range > 0.0 ? 2.0 * (features(r, c) - model.min[c]) / range - 1.0 : 0.0;
    }
  }
  return out;
}

Splits split(const Dataset& dataset, const SplitSpec& spec, std::uint64_t seed) {
  const std::array<std::size_t, 3> counts = {spec.train_count, spec.test_count,
                                             spec.validation_count};
  std::size_t needed_per_class = 0;
  for (const std::size_t c : counts) {
    if (c % 2 != 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "split counts must be even to stay class-balanced");
    }
    needed_per_class += c / 2;
  }

  std::vector<std::size_t> negatives;
  std::vector<std::size_t> positives;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.labels[i] == 1 ? positives : negatives).push_back(i);
  }
  if (negatives.size() < needed_per_class || positives.size() < needed_per_class) {
    throw Error(ErrorCode::InvalidArgument,
                "split spec needs " + std::to_string(needed_per_class) +
                    " samples per class, dataset has " + std::to_string(negatives.size()) +
                    " / " + std::to_string(positives.size()));
  }

  Rng rng(seed);
  rng.shuffle(negatives);
  rng.shuffle(positives);

  std::size_t neg_pos = 0;
  std::size_t pos_pos = 0;
  const auto take = [&](std::size_t count, const std::string& suffix) {
    std::vector<std::size_t> indices;
    indices.reserve(count);
    for (std::size_t i = 0; i < count / 2; ++i) indices.push_back(negatives[neg_pos++]);
    for (std::size_t i = 0; i < count / 2; ++i) indices.push_back(positives[pos_pos++]);
    return take_rows(dataset, indices, suffix);
  };

  Splits out;
  out.train = take(spec.train_count, "/train");
  out.test = take(spec.test_count, "/test");
  out.validation = take(spec.validation_count, "/validation");
  return out;
}

Splits prepare_splits(const Dataset& dataset, const SplitSpec& spec, std::uint64_t seed,
                      const PipelineOptions& options) {
  Splits splits = split(dataset, spec, seed);
  if (options.validation_is_train_plus_test) {
    splits.validation = concat(splits.train, splits.test, dataset.name + "/validation");
  }

  if (options.pca_components > 0 && dataset.feature_count() > options.pca_components) {
    const PcaModel pca = fit_pca(splits.train.features, options.pca_components);
    splits.train.features = apply_pca(pca, splits.train.features);
    splits.test.features = apply_pca(pca, splits.test.features);
    splits.validation.features = apply_pca(pca, splits.validation.features);
  }
  if (options.scale_features) {
    const ScalerModel scaler = fit_scaler(splits.train.features);
    splits.train.features = apply_scaler(scaler, splits.train.features);
    splits.test.features = apply_scaler(scaler, splits.test.features);
    splits.validation.features = apply_scaler(scaler, splits.validation.features);
  }
  return splits;
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  for (std::size_t c = 0; c < dataset.feature_count(); ++c) out << 'f' << c << ',';
  out << "label\n";
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t c = 0; c < dataset.feature_count(); ++c) {
      out << dataset.features(r, c) << ',';
    }
    out << dataset.labels[r] << '\n';
  }
}

}  // namespace qfm
