// Experiment runner on top of the qfm C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qfm.h"

namespace {

struct ExperimentHandle {
  qfm_experiment* ptr = nullptr;
  ~ExperimentHandle() { qfm_experiment_destroy(ptr); }
};

int fail(qfm_status status) {
  std::fprintf(stderr, "error: %s\n", qfm_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genetic design of quantum feature maps for kernel SVM classification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string approach;
  std::string out_dir;
  long long seed = -1;
  long long refine_top_k = -1;

  CLI::App* run = app.add_subcommand("run", "Run the configured experiment approaches");
  run->add_option("--config", config_path, "Config file (flat key = value lines)")
      ->required();
  run->add_option("--approach", approach,
                  "Approach id or comma list (1, 1.1, 1.2, 2, ..., 3.2); overrides the config");
  run->add_option("--seed", seed, "Override the experiment seed");
  run->add_option("--out", out_dir, "Output directory for the report files");
  run->add_option("--refine-top-k", refine_top_k,
                  "Refine only the k best individuals (0 = whole population)");

  CLI11_PARSE(app, argc, argv);

  ExperimentHandle experiment;
  qfm_status status = qfm_experiment_create(&experiment.ptr);
  if (status != QFM_OK) return fail(status);

  status = qfm_experiment_load_config(experiment.ptr, config_path.c_str());
  if (status != QFM_OK) return fail(status);

  if (!approach.empty()) {
    status = qfm_experiment_set(experiment.ptr, "approaches", approach.c_str());
    if (status != QFM_OK) return fail(status);
  }
  if (seed >= 0) {
    status = qfm_experiment_set(experiment.ptr, "seed", std::to_string(seed).c_str());
    if (status != QFM_OK) return fail(status);
  }
  if (refine_top_k >= 0) {
    status = qfm_experiment_set(experiment.ptr, "refine_top_k",
                                std::to_string(refine_top_k).c_str());
    if (status != QFM_OK) return fail(status);
  }

  status = qfm_experiment_run(experiment.ptr, out_dir.empty() ? nullptr : out_dir.c_str());
  if (status != QFM_OK) return fail(status);
  std::printf("report written to %s\n", out_dir.empty() ? "the configured out_dir" : out_dir.c_str());
  return 0;
}
