#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "qfm/error.hpp"
#include "qfm/harness.hpp"

namespace qfm {

namespace {

using nlohmann::json;

json stats_to_json(const GenerationStats& s) {
  return json{{"generation", s.generation},
              {"best_objective1", s.best_objective1},
              {"best_objective2", s.best_objective2},
              {"front_size", s.front_size},
              {"evaluation_slots", s.evaluation_slots},
              {"evaluator_calls", s.evaluator_calls},
              {"cache_hits", s.cache_hits},
              {"kernel_evaluations", s.kernel_evaluations}};
}

json split_evals_to_json(const SplitEvals& e) {
  return json{{"all", e.all}, {"train", e.train}, {"test", e.test}, {"validation", e.validation}};
}

json approach_to_json(const ApproachResult& a) {
  json j;
  j["id"] = a.id;
  j["chromosome"] = a.best_chromosome.bits;
  j["qubit_budget"] = a.best_chromosome.qubit_budget;
  j["layer_budget"] = a.best_chromosome.layer_budget;
  j["overrides"] = a.best_overrides;
  j["best_index"] = a.best_index;
  j["n_local"] = a.size.n_local;
  j["n_cnot"] = a.size.n_cnot;
  j["sm"] = a.size.sm;
  j["ws"] = a.weighted_size_value;
  j["train_accuracy"] = a.train_accuracy;
  j["test_accuracy"] = a.test_accuracy;
  j["validation_accuracy"] = a.validation_accuracy;
  j["train_kta"] = a.train_kta;
  j["margin"] = {{"mean", a.margin.mean},
                 {"std_dev", a.margin.std_dev},
                 {"per_point", a.margin.per_point}};
  json roc = json::array();
  for (const auto& p : a.roc) roc.push_back({p.fpr, p.tpr});
  j["roc"] = std::move(roc);
  j["auc"] = a.auc;
  j["confusion"] = {{"tp", a.confusion.tp},
                    {"fp", a.confusion.fp},
                    {"fn", a.confusion.fn},
                    {"tn", a.confusion.tn}};
  j["circuit"] = a.circuit_text;
  j["kernel_evaluations"] = {{"ga", split_evals_to_json(a.counters.ga)},
                             {"refinement", split_evals_to_json(a.counters.refinement)},
                             {"selection", split_evals_to_json(a.counters.selection)},
                             {"reporting", split_evals_to_json(a.counters.reporting)}};
  j["ga_evaluation_slots"] = a.ga_evaluation_slots;
  j["ga_evaluator_calls"] = a.ga_evaluator_calls;
  j["ga_cache_hits"] = a.ga_cache_hits;
  if (!a.ga_history.empty()) j["ga_final_generation"] = stats_to_json(a.ga_history.back());

  json refinements = json::array();
  for (const auto& r : a.refinements) {
    refinements.push_back({{"individual", r.individual},
                           {"initial_objective", r.initial_objective},
                           {"final_objective", r.final_objective},
                           {"evaluations", r.evaluations}});
  }
  j["refinements"] = std::move(refinements);
  if (a.best_trace.has_value()) {
    json trace = json::array();
    for (const auto& [params, value] : a.best_trace->evaluations) {
      trace.push_back({{"parameters", params}, {"objective", value}});
    }
    j["best_refinement_trace"] = {{"evaluations", std::move(trace)},
                                  {"best_index", a.best_trace->best_index}};
  }
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    out << content;
    if (!out) {
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["timestamp"] = report.timestamp;
  j["dataset"] = {{"name", report.dataset_name}, {"feature_count", report.feature_count}};
  j["seed"] = report.config.seed;
  j["config"] = config_to_string(report.config);
  j["baseline"] = {{"kernel", "rbf"},
                   {"gamma", report.baseline.gamma},
                   {"train_accuracy", report.baseline.train_accuracy},
                   {"test_accuracy", report.baseline.test_accuracy},
                   {"validation_accuracy", report.baseline.validation_accuracy}};
  json approaches = json::object();
  for (const auto& a : report.approaches) approaches[a.id] = approach_to_json(a);
  j["approaches"] = std::move(approaches);
  j["total_kernel_evaluations"] = report.total_kernel_evaluations;
  return j.dump(2) + "\n";
}

void emit_report(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::Io, "cannot create output directory " + out_dir);
  }
  const fs::path dir(out_dir);

  write_file_atomic(dir / "report.json", report_to_json(report));

  for (const auto& a : report.approaches) {
    {
      std::string roc_csv = "fpr,tpr\n";
      for (const auto& p : a.roc) {
        roc_csv += std::to_string(p.fpr) + "," + std::to_string(p.tpr) + "\n";
      }
      write_file_atomic(dir / ("roc_" + a.id + ".csv"), roc_csv);
    }
    {
      std::string circuit = a.circuit_text;
      circuit += "\n";
      circuit += a.gate_list_text;
      write_file_atomic(dir / ("circuit_" + a.id + ".txt"), circuit);
    }
    {
      std::string log = "generation,best_objective1,best_objective2,front_size,"
                        "evaluation_slots,cache_hits,kernel_evaluations\n";
      for (const auto& s : a.ga_history) {
        log += std::to_string(s.generation) + "," + std::to_string(s.best_objective1) + "," +
               std::to_string(s.best_objective2) + "," + std::to_string(s.front_size) + "," +
               std::to_string(s.evaluation_slots) + "," + std::to_string(s.cache_hits) + "," +
               std::to_string(s.kernel_evaluations) + "\n";
      }
      write_file_atomic(dir / ("gatrace_" + a.id + ".log"), log);
    }
    if (!a.decision_grid.empty()) {
      std::string grid_csv = "x,y,df\n";
      char buf[96];
      for (const auto& row : a.decision_grid) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", row[0], row[1], row[2]);
        grid_csv += buf;
      }
      write_file_atomic(dir / ("decision_grid_" + a.id + ".csv"), grid_csv);
    }
  }
}

}  // namespace qfm
