#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfm/data.hpp"
#include "qfm/nsga2.hpp"
#include "qfm/refine.hpp"
#include "qfm/svm.hpp"

namespace qfm {

/// Everything one experiment run needs, mirroring the flat key=value config
/// file one to one.
struct ExperimentConfig {
  // dataset selection
  std::string dataset = "moons";  // moons | circles | random | csv
  std::string csv_path;
  std::string label_column;
  std::string positive_label;
  std::string negative_label;
  std::size_t dataset_size = 800;
  double noise = 0.2;

  SplitSpec splits;

  // encoding budgets
  unsigned qubit_budget = 6;
  unsigned layer_budget = 6;

  // genetic engine
  std::size_t population_size = 100;
  std::size_t offspring_per_generation = 15;
  double crossover_fraction = 0.3;
  double mutation_probability = 0.7;
  double mutation_bit_fraction = 0.2;
  std::size_t generations = 1200;

  // classifiers and metrics
  double svm_c = 1.0;
  double rbf_gamma = 0.0;  // 0 = 1/d
  unsigned kta_subsets = 5;
  RmseVariant rmse_variant = RmseVariant::Symmetric;
  double rmse_confidence = 1.0;
  bool scale_features = true;
  unsigned pca_components = 10;

  // refinement
  std::size_t refine_budget = 100;
  double refine_initial_step = 0.5;
  double refine_final_step = 1e-3;
  std::size_t refine_top_k = 0;  // 0 = refine the whole final population

  std::vector<std::string> approaches = {"1"};
  /// Run the per-base GA searches on separate threads; results are
  /// identical either way since every base has its own derived seed.
  bool parallel_approaches = false;
  std::uint64_t seed = 1;
  std::string out_dir = "qfm-out";
};

/// Parses one `key = value` line pair onto the config. Unknown keys and
/// unparsable values throw Error(Config).
void set_config_value(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

/// Reads a flat key=value file ('#' starts a comment). Throws Error(Config)
/// naming the offending line on failure.
ExperimentConfig parse_config_file(const std::string& path);

/// All violations at once; an empty return means the config is runnable.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Key=value echo of every field, in file syntax.
std::string config_to_string(const ExperimentConfig& config);

}  // namespace qfm
