#include "qfm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qfm/error.hpp"

namespace qfm {

namespace {

const std::set<std::string> kKnownApproaches = {"1",   "1.1", "1.2", "2",  "2.1",
                                                "2.2", "3",   "3.1", "3.2"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, key + ": expected a non-negative integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, key + ": expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw Error(ErrorCode::Config, key + ": expected on/off, got '" + value + "'");
}

std::vector<std::string> parse_approaches(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string id = trim(item);
    if (!id.empty()) out.push_back(id);
  }
  return out;
}

}  // namespace

void set_config_value(ExperimentConfig& config, const std::string& key,
                      const std::string& value) {
  if (key == "dataset") {
    config.dataset = value;
  } else if (key == "csv_path") {
    config.csv_path = value;
  } else if (key == "label_column") {
    config.label_column = value;
  } else if (key == "positive_label") {
    config.positive_label = value;
  } else if (key == "negative_label") {
    config.negative_label = value;
  } else if (key == "dataset_size") {
    config.dataset_size = parse_u64(key, value);
  } else if (key == "noise") {
    config.noise = parse_double(key, value);
  } else if (key == "train_count") {
    config.splits.train_count = parse_u64(key, value);
  } else if (key == "test_count") {
    config.splits.test_count = parse_u64(key, value);
  } else if (key == "validation_count") {
    config.splits.validation_count = parse_u64(key, value);
  } else if (key == "qubit_budget") {
    config.qubit_budget = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "layer_budget") {
    config.layer_budget = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "population_size") {
    config.population_size = parse_u64(key, value);
  } else if (key == "offspring_per_generation") {
    config.offspring_per_generation = parse_u64(key, value);
  } else if (key == "crossover_fraction") {
    config.crossover_fraction = parse_double(key, value);
  } else if (key == "mutation_probability") {
    config.mutation_probability = parse_double(key, value);
  } else if (key == "mutation_bit_fraction") {
    config.mutation_bit_fraction = parse_double(key, value);
  } else if (key == "generations") {
    config.generations = parse_u64(key, value);
  } else if (key == "svm_c") {
    config.svm_c = parse_double(key, value);
  } else if (key == "rbf_gamma") {
    config.rbf_gamma = parse_double(key, value);
  } else if (key == "kta_subsets") {
    config.kta_subsets = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "rmse_error") {
    if (value == "symmetric") {
      config.rmse_variant = RmseVariant::Symmetric;
    } else if (value == "literal") {
      config.rmse_variant = RmseVariant::Literal;
    } else {
      throw Error(ErrorCode::Config, "rmse_error: expected symmetric or literal");
    }
  } else if (key == "rmse_confidence") {
    config.rmse_confidence = parse_double(key, value);
  } else if (key == "scale_features") {
    config.scale_features = parse_bool(key, value);
  } else if (key == "pca_components") {
    config.pca_components = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "refine_budget") {
    config.refine_budget = parse_u64(key, value);
  } else if (key == "refine_initial_step") {
    config.refine_initial_step = parse_double(key, value);
  } else if (key == "refine_final_step") {
    config.refine_final_step = parse_double(key, value);
  } else if (key == "refine_top_k") {
    config.refine_top_k = parse_u64(key, value);
  } else if (key == "approaches") {
    config.approaches = parse_approaches(value);
  } else if (key == "parallel_approaches") {
    config.parallel_approaches = parse_bool(key, value);
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    config.out_dir = value;
  } else {
    throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Config, "cannot open config file: " + path);
  }
  ExperimentConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config,
                  path + ":" + std::to_string(line_number) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config,
                  path + ":" + std::to_string(line_number) + ": " + e.what());
    }
  }
  return config;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> problems;
  const auto complain = [&](const std::string& msg) { problems.push_back(msg); };

  if (c.dataset != "moons" && c.dataset != "circles" && c.dataset != "random" &&
      c.dataset != "csv") {
    complain("dataset must be moons, circles, random or csv");
  }
  if (c.dataset == "csv") {
    if (c.csv_path.empty()) complain("csv dataset needs csv_path");
    if (c.label_column.empty()) complain("csv dataset needs label_column");
    if (c.positive_label.empty()) complain("csv dataset needs positive_label");
  } else {
    if (c.dataset_size == 0 || c.dataset_size % 2 != 0) {
      complain("dataset_size must be a positive even number");
    }
  }
  if (c.noise < 0.0) complain("noise must be non-negative");
  if (c.splits.train_count == 0) complain("train_count must be positive");
  if (c.splits.train_count % 2 != 0 || c.splits.test_count % 2 != 0 ||
      c.splits.validation_count % 2 != 0) {
    complain("split counts must be even to stay class-balanced");
  }
  if (c.qubit_budget == 0) complain("qubit_budget must be positive");
  if (c.layer_budget == 0) complain("layer_budget must be positive");
  if (c.population_size == 0) complain("population_size must be positive");
  if (c.offspring_per_generation == 0) complain("offspring_per_generation must be positive");
  const auto fraction = [&](double v, const char* name) {
    if (v < 0.0 || v > 1.0) complain(std::string(name) + " must be in [0, 1]");
  };
  fraction(c.crossover_fraction, "crossover_fraction");
  fraction(c.mutation_probability, "mutation_probability");
  fraction(c.mutation_bit_fraction, "mutation_bit_fraction");
  if (!(c.svm_c > 0.0)) complain("svm_c must be positive");
  if (c.rbf_gamma < 0.0) complain("rbf_gamma must be non-negative");
  if (c.kta_subsets == 0) complain("kta_subsets must be positive");
  if (c.kta_subsets > c.splits.train_count) {
    complain("kta_subsets may not exceed train_count");
  }
  if (!(c.rmse_confidence > 0.0)) complain("rmse_confidence must be positive");
  if (c.refine_budget == 0) complain("refine_budget must be positive");
  if (!(c.refine_final_step > 0.0) || !(c.refine_final_step < c.refine_initial_step)) {
    complain("need 0 < refine_final_step < refine_initial_step");
  }
  if (c.approaches.empty()) complain("at least one approach is required");
  for (const auto& id : c.approaches) {
    if (kKnownApproaches.count(id) == 0) {
      complain("unknown approach '" + id + "' (expected 1, 1.1, 1.2, 2, 2.1, 2.2, 3, 3.1 or 3.2)");
    }
  }
  if (c.out_dir.empty()) complain("out_dir must not be empty");
  return problems;
}

std::string config_to_string(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "dataset = " << c.dataset << '\n';
  if (!c.csv_path.empty()) out << "csv_path = " << c.csv_path << '\n';
  if (!c.label_column.empty()) out << "label_column = " << c.label_column << '\n';
  if (!c.positive_label.empty()) out << "positive_label = " << c.positive_label << '\n';
  if (!c.negative_label.empty()) out << "negative_label = " << c.negative_label << '\n';
  out << "dataset_size = " << c.dataset_size << '\n';
  out << "noise = " << c.noise << '\n';
  out << "train_count = " << c.splits.train_count << '\n';
  out << "test_count = " << c.splits.test_count << '\n';
  out << "validation_count = " << c.splits.validation_count << '\n';
  out << "qubit_budget = " << c.qubit_budget << '\n';
  out << "layer_budget = " << c.layer_budget << '\n';
  out << "population_size = " << c.population_size << '\n';
  out << "offspring_per_generation = " << c.offspring_per_generation << '\n';
  out << "crossover_fraction = " << c.crossover_fraction << '\n';
  out << "mutation_probability = " << c.mutation_probability << '\n';
  out << "mutation_bit_fraction = " << c.mutation_bit_fraction << '\n';
  out << "generations = " << c.generations << '\n';
  out << "svm_c = " << c.svm_c << '\n';
  out << "rbf_gamma = " << c.rbf_gamma << '\n';
  out << "kta_subsets = " << c.kta_subsets << '\n';
  out << "rmse_error = "
      << (c.rmse_variant == RmseVariant::Symmetric ? "symmetric" : "literal") << '\n';
  out << "rmse_confidence = " << c.rmse_confidence << '\n';
  out << "scale_features = " << (c.scale_features ? "on" : "off") << '\n';
  out << "pca_components = " << c.pca_components << '\n';
  out << "refine_budget = " << c.refine_budget << '\n';
  out << "refine_initial_step = " << c.refine_initial_step << '\n';
  out << "refine_final_step = " << c.refine_final_step << '\n';
  out << "refine_top_k = " << c.refine_top_k << '\n';
  out << "parallel_approaches = " << (c.parallel_approaches ? "on" : "off") << '\n';
  out << "approaches = ";
  for (std::size_t i = 0; i < c.approaches.size(); ++i) {
    if (i) out << ',';
    out << c.approaches[i];
  }
  out << '\n';
  out << "seed = " << c.seed << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  return out.str();
}

}  // namespace qfm
