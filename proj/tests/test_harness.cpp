#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qfm/rng.hpp"

#include "qfm/error.hpp"
#include "qfm/harness.hpp"

using namespace qfm;

namespace {

ExperimentConfig desk_config() {
  ExperimentConfig config;
  config.dataset = "moons";
  config.dataset_size = 120;
  config.noise = 0.15;
  config.splits = {40, 20, 60};
  config.qubit_budget = 3;
  config.layer_budget = 3;
  config.population_size = 8;
  config.offspring_per_generation = 4;
  config.generations = 4;
  config.kta_subsets = 4;
  config.refine_budget = 10;
  config.refine_top_k = 2;
  config.seed = 5;
  return config;
}

Splits desk_splits(const ExperimentConfig& config) {
  PipelineOptions options;
  options.scale_features = config.scale_features;
  options.pca_components = config.pca_components;
  const Dataset ds = make_moons(config.dataset_size, config.noise, 7);
  return prepare_splits(ds, config.splits, 7, options);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("approach ids parse to their objective pairing") {
  const ApproachSpec a1 = ApproachSpec::parse("1");
  CHECK(a1.objective1() == ApproachSpec::Objective1::TestAccuracy);
  CHECK(a1.objective2() == ApproachSpec::Objective2::WeightedSize);
  CHECK(a1.refinement == ApproachSpec::Refinement::None);
  CHECK(a1.id() == "1");

  const ApproachSpec a21 = ApproachSpec::parse("2.1");
  CHECK(a21.objective1() == ApproachSpec::Objective1::TrainKta);
  CHECK(a21.objective2() == ApproachSpec::Objective2::UnweightedSize);
  CHECK(a21.refinement == ApproachSpec::Refinement::MinRmse);

  const ApproachSpec a32 = ApproachSpec::parse("3.2");
  CHECK(a32.objective1() == ApproachSpec::Objective1::TrainKtaApprox);
  CHECK(a32.refinement == ApproachSpec::Refinement::MaxKta);
  CHECK(a32.id() == "3.2");

  CHECK_THROWS_AS(ApproachSpec::parse("4"), Error);
  CHECK_THROWS_AS(ApproachSpec::parse("2.3"), Error);
}

TEST_CASE("config parsing and validation") {
  SUBCASE("file fixture") {
    const std::string path = std::string(QFM_FIXTURE_DIR) + "/smoke.cfg";
    const ExperimentConfig config = parse_config_file(path);
    CHECK(config.dataset == "moons");
    CHECK(config.population_size == 8);
    CHECK(config.generations == 3);
  }
  SUBCASE("unknown keys fail") {
    ExperimentConfig config;
    CHECK_THROWS_AS(set_config_value(config, "nope", "1"), Error);
  }
  SUBCASE("validation lists every violation") {
    ExperimentConfig config;
    config.population_size = 0;
    config.svm_c = -1.0;
    config.approaches = {"7"};
    const auto problems = validate_config(config);
    CHECK(problems.size() == 3);
  }
  SUBCASE("echo covers the round trip") {
    ExperimentConfig config = desk_config();
    const std::string text = config_to_string(config);
    ExperimentConfig parsed;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      REQUIRE(eq != std::string::npos);
      const std::string key = line.substr(0, eq - 1);
      const std::string value = line.substr(eq + 2);
      set_config_value(parsed, key, value);
    }
    CHECK(config_to_string(parsed) == text);
  }
}

TEST_CASE("candidate evaluation per approach") {
  const ExperimentConfig config = desk_config();
  const Splits splits = desk_splits(config);

  SUBCASE("empty circuit under approach 2 scores zero alignment and size") {
    CandidateEvaluator evaluator(ApproachSpec::parse("2"), config, splits.train, nullptr,
                                 std::nullopt);
    Chromosome empty{std::string(45, '0'), 3, 3};
    for (std::size_t slot = 0; slot < 9; ++slot) {
      empty.bits[5 * slot] = '0';
      empty.bits[5 * slot + 1] = '1';  // "010.." identity everywhere
    }
    const FitnessVector fitness = evaluator.evaluate(empty);
    CHECK(fitness.objectives[0] == doctest::Approx(0.0));  // balanced labels
    CHECK(fitness.objectives[1] == doctest::Approx(0.0));  // SM = 0
  }

  SUBCASE("weighted size pairs the test accuracy with the sm") {
    CHECK(weighted_size(3.0, 1.0) == doctest::Approx(6.0));
    CHECK(weighted_size(3.0, 0.0) == doctest::Approx(3.0));
  }

  SUBCASE("fixed chromosomes evaluate identically across calls") {
    Rng rng(3);
    const Chromosome c = random_chromosome(rng, 3, 3);
    Rng partition_rng(9);
    auto partition = make_partition(splits.train.size(), config.kta_subsets, partition_rng);
    CandidateEvaluator evaluator(ApproachSpec::parse("3"), config, splits.train, nullptr,
                                 partition);
    const FitnessVector first = evaluator.evaluate(c);
    const FitnessVector second = evaluator.evaluate(c);
    CHECK(first.objectives[0] == second.objectives[0]);
    CHECK(first.objectives[1] == second.objectives[1]);
  }

  SUBCASE("failures collapse to the sentinel fitness") {
    const CircuitKernel broken = [](const FeatureMapCircuit&, std::span<const double>,
                                    std::span<const double>) -> double {
      throw Error(ErrorCode::Simulation, "stub failure");
    };
    CandidateEvaluator evaluator(ApproachSpec::parse("2"), config, splits.train, nullptr,
                                 std::nullopt, &broken);
    Rng rng(4);
    const FitnessVector fitness = evaluator.evaluate(random_chromosome(rng, 3, 3));
    CHECK(fitness.objectives[0] == 2.0);
    CHECK(fitness.objectives[1] == 1e18);
    CHECK(evaluator.failures() == 1);
  }
}

TEST_CASE("select_best prefers validation accuracy, then size, then order") {
  const ExperimentConfig config = desk_config();
  const Splits splits = desk_splits(config);

  // One expressive circuit and two trivial ones (identical Grams).
  const FeatureMapCircuit good =
      decode_chromosome(Chromosome{"11100" "11100" "01000", 1, 3}, 2);
  const FeatureMapCircuit tiny =
      decode_chromosome(Chromosome{"11110" "01000" "01000", 1, 3}, 2);
  const FeatureMapCircuit tiny_copy = tiny;

  SUBCASE("singleton population selects itself") {
    const std::vector<FeatureMapCircuit> circuits = {good};
    CHECK(select_best(circuits, splits.train, splits.validation, 1.0).index == 0);
  }
  SUBCASE("ties fall to the smaller circuit, then the lower index") {
    const std::vector<FeatureMapCircuit> two = {tiny, tiny_copy};
    CHECK(select_best(two, splits.train, splits.validation, 1.0).index == 0);

    const std::vector<FeatureMapCircuit> bigger_first = {good, tiny};
    const BestSelection selection =
        select_best(bigger_first, splits.train, splits.validation, 1.0);
    // Whatever wins must do so by accuracy or, on a tie, by SM.
    if (selection.index == 1) {
      const BestSelection solo_good =
          select_best(std::vector<FeatureMapCircuit>{good}, splits.train, splits.validation,
                      1.0);
      const BestSelection solo_tiny =
          select_best(std::vector<FeatureMapCircuit>{tiny}, splits.train, splits.validation,
                      1.0);
      CHECK(solo_tiny.validation_accuracy >= solo_good.validation_accuracy);
    }
  }
  SUBCASE("selected accuracy is the population maximum") {
    const std::vector<FeatureMapCircuit> circuits = {good, tiny};
    const BestSelection selection =
        select_best(circuits, splits.train, splits.validation, 1.0);
    for (const auto& fm : circuits) {
      const BestSelection solo = select_best(std::vector<FeatureMapCircuit>{fm}, splits.train,
                                             splits.validation, 1.0);
      CHECK(selection.validation_accuracy >= solo.validation_accuracy);
    }
  }
}

TEST_CASE("experiment run and report emission") {
  ExperimentConfig config = desk_config();
  config.approaches = {"2", "3.2"};
  const ExperimentReport report = run_experiment(config);

  SUBCASE("kta approaches never touch test or validation during the ga") {
    for (const auto& a : report.approaches) {
      CHECK(a.counters.ga.test == 0);
      CHECK(a.counters.ga.validation == 0);
      CHECK(a.counters.ga.train > 0);
    }
  }
  SUBCASE("refinement never changes circuit size") {
    const auto& refined = report.approaches[1];
    CHECK(refined.id == "3.2");
    for (const auto& record : refined.refinements) {
      CHECK(record.evaluations <= config.refine_budget);
      CHECK(record.final_objective <= record.initial_objective);
    }
  }
  SUBCASE("report carries the reproduction inputs") {
    for (const auto& a : report.approaches) {
      CHECK(a.best_chromosome.bits.size() == 45);
      CHECK(!a.circuit_text.empty());
      CHECK(a.ga_history.size() == config.generations);
    }
    CHECK(report.total_kernel_evaluations > 0);
  }
  SUBCASE("emission writes the documented files") {
    const std::string dir = "harness_emit_test_out";
    std::filesystem::remove_all(dir);
    emit_report(report, dir);
    CHECK(std::filesystem::exists(dir + "/report.json"));
    CHECK(std::filesystem::exists(dir + "/roc_2.csv"));
    CHECK(std::filesystem::exists(dir + "/roc_3.2.csv"));
    CHECK(std::filesystem::exists(dir + "/circuit_2.txt"));
    CHECK(std::filesystem::exists(dir + "/gatrace_3.2.log"));
    CHECK(std::filesystem::exists(dir + "/decision_grid_2.csv"));

    std::ifstream grid(dir + "/decision_grid_2.csv");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(grid, line)) ++lines;
    CHECK(lines == 10001);  // header + 100x100

    std::ifstream json_in(dir + "/report.json");
    nlohmann::json parsed = nlohmann::json::parse(json_in);
    CHECK(parsed["approaches"].contains("2"));
    CHECK(parsed["approaches"]["3.2"]["refinements"].size() > 0);
    CHECK(parsed["approaches"]["2"]["validation_accuracy"].get<double>() ==
          doctest::Approx(report.approaches[0].validation_accuracy));
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("approach 1 objectives pair accuracy with the weighted size") {
  // Separable 1-D data and a single RY(pi*x) gate: test accuracy 1.0,
  // SM = 1, so the objective vector is (-1, 2).
  ExperimentConfig config = desk_config();
  Dataset train;
  train.name = "toy/train";
  train.features = Matrix(4, 1);
  train.features(0, 0) = -0.8;
  train.features(1, 0) = -0.6;
  train.features(2, 0) = 0.6;
  train.features(3, 0) = 0.8;
  train.labels = {-1, -1, 1, 1};
  Dataset test;
  test.name = "toy/test";
  test.features = Matrix(2, 1);
  test.features(0, 0) = -0.7;
  test.features(1, 0) = 0.7;
  test.labels = {-1, 1};

  CandidateEvaluator evaluator(ApproachSpec::parse("1"), config, train, &test, std::nullopt);
  const FitnessVector fitness = evaluator.evaluate(Chromosome{"11100", 1, 1});
  CHECK(fitness.objectives[0] == doctest::Approx(-1.0));
  CHECK(fitness.objectives[1] == doctest::Approx(2.0));
}

TEST_CASE("generations zero reports the best of the random population") {
  ExperimentConfig config = desk_config();
  config.generations = 0;
  config.approaches = {"2"};
  const ExperimentReport report = run_experiment(config);
  const auto& a = report.approaches.front();
  CHECK(a.ga_history.size() == 1);
  CHECK(a.ga_evaluation_slots == config.population_size);
  CHECK(a.validation_accuracy >= 0.0);
}

TEST_CASE("datasets beyond two features emit no decision grid") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qfm_harness_csv";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "data.csv");
    csv << "f0,f1,f2,label\n";
    Rng rng(21);
    for (int i = 0; i < 60; ++i) {
      const double x = rng.uniform(-1.0, 1.0);
      csv << x << ',' << rng.uniform(-1.0, 1.0) << ',' << rng.uniform(-1.0, 1.0) << ','
          << (x > 0 ? "pos" : "neg") << '\n';
    }
  }
  ExperimentConfig config = desk_config();
  config.dataset = "csv";
  config.csv_path = (dir / "data.csv").string();
  config.label_column = "label";
  config.positive_label = "pos";
  config.splits = {20, 10, 20};
  config.approaches = {"2"};
  const ExperimentReport report = run_experiment(config);
  CHECK(report.feature_count == 3);
  CHECK(report.approaches.front().decision_grid.empty());

  emit_report(report, (dir / "out").string());
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(!fs::exists(dir / "out" / "decision_grid_2.csv"));
  fs::remove_all(dir);
}

TEST_CASE("approach 1 reads test data but never validation during the ga") {
  ExperimentConfig config = desk_config();
  config.approaches = {"1"};
  const ExperimentReport report = run_experiment(config);
  const auto& a = report.approaches.front();
  CHECK(a.counters.ga.test > 0);
  CHECK(a.counters.ga.validation == 0);
}

TEST_CASE("invalid configs abort with every problem listed") {
  ExperimentConfig config = desk_config();
  config.population_size = 0;
  config.approaches = {"9"};
  try {
    run_experiment(config);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    const std::string message = e.what();
    CHECK(message.find("population_size") != std::string::npos);
    CHECK(message.find("approach") != std::string::npos);
  }
}

TEST_CASE("reports are byte-identical apart from the timestamp") {
  ExperimentConfig config = desk_config();
  config.approaches = {"2"};
  ExperimentReport a = run_experiment(config);
  ExperimentReport b = run_experiment(config);
  a.timestamp = "";
  b.timestamp = "";
  CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("parallel approach execution matches the sequential result") {
  ExperimentConfig config = desk_config();
  config.approaches = {"1", "2", "3"};
  ExperimentReport sequential = run_experiment(config);
  config.parallel_approaches = true;
  ExperimentReport parallel = run_experiment(config);
  sequential.timestamp = "";
  parallel.timestamp = "";
  // The echoed config differs in the flag itself; everything computed must not.
  sequential.config.parallel_approaches = false;
  parallel.config.parallel_approaches = false;
  CHECK(report_to_json(sequential) == report_to_json(parallel));
}

}  // TEST_SUITE
