#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qfm/alignment.hpp"
#include "qfm/error.hpp"
#include "qfm/kernel.hpp"
#include "qfm/refine.hpp"
#include "qfm/rng.hpp"

using namespace qfm;

namespace {

// RY(pi/4 * x0) then RZ(pi * x0) on one qubit, bound to 1-feature data.
FeatureMapCircuit two_rotation_circuit() {
  return decode_chromosome(Chromosome{"1111010000", 1, 2}, 1);
}

struct ToyData {
  Matrix x;
  std::vector<int> y;
  ToyData(std::size_t n, std::uint64_t seed) : x(n, 1), y(n) {
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, 0) = rng.uniform(-1.0, 1.0);
      y[i] = x(i, 0) > 0 ? 1 : -1;
    }
  }
};

}  // namespace

TEST_SUITE("refine") {

TEST_CASE("parameter extraction reads rotations in slot order") {
  const auto fm = two_rotation_circuit();
  const auto params = extract_parameters(fm);
  REQUIRE(params.size() == 2);
  CHECK(params[0] == doctest::Approx(M_PI / 4));
  CHECK(params[1] == doctest::Approx(M_PI));
}

TEST_CASE("circuits without rotations have no parameters") {
  const auto fm = decode_chromosome(Chromosome{"00000", 1, 1});
  CHECK(extract_parameters(fm).empty());
}

TEST_CASE("applying extracted parameters changes nothing") {
  const auto fm = two_rotation_circuit();
  const auto round_trip = with_parameters(fm, extract_parameters(fm));
  const std::vector<double> x = {0.7};
  const auto a = prepare_feature_state(fm, x);
  const auto b = prepare_feature_state(round_trip, x);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-15);
}

TEST_CASE("with_parameters validates the count") {
  const auto fm = two_rotation_circuit();
  CHECK_THROWS_AS(with_parameters(fm, {1.0}), Error);
}

TEST_CASE("cobyla minimizes a parabola") {
  RefineConfig config;
  config.budget = 100;
  const auto f = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0); };
  const CobylaResult result = cobyla_minimize(f, {0.0}, config);
  CHECK(std::abs(result.point[0] - 2.0) <= 1e-2);
  CHECK(result.trace.evaluations.size() <= 100);
}

TEST_CASE("cobyla respects a unit budget") {
  RefineConfig config;
  config.budget = 1;
  const auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  const CobylaResult result = cobyla_minimize(f, {3.0}, config);
  CHECK(result.point[0] == 3.0);
  CHECK(result.trace.evaluations.size() == 1);
}

TEST_CASE("cobyla on a constant function stays at the start") {
  RefineConfig config;
  config.budget = 100;
  const auto f = [](std::span<const double>) { return 5.0; };
  const CobylaResult result = cobyla_minimize(f, {1.0, -2.0}, config);
  CHECK(result.point == std::vector<double>{1.0, -2.0});
  CHECK(result.trace.evaluations.size() <= 100);
}

TEST_CASE("cobyla uses the full budget when the step never collapses") {
  RefineConfig config;
  config.budget = 60;
  config.final_step = 1e-300;
  const auto f = [](std::span<const double> x) { return std::cos(x[0]) + 0.1 * x[0]; };
  const CobylaResult result = cobyla_minimize(f, {0.3}, config);
  CHECK(result.trace.evaluations.size() == 60);
}

TEST_CASE("cobyla best-so-far contract") {
  RefineConfig config;
  config.budget = 40;
  Rng rng(13);
  const auto f = [&](std::span<const double> x) {
    return std::sin(3.0 * x[0]) + x[1] * x[1];
  };
  const CobylaResult result = cobyla_minimize(f, {0.5, 1.0}, config);
  double best = result.trace.evaluations.front().second;
  for (const auto& [params, value] : result.trace.evaluations) {
    best = std::min(best, value);
  }
  CHECK(result.trace.evaluations[result.trace.best_index].second == best);
  CHECK(best <= result.trace.evaluations.front().second);
}

TEST_CASE("refinement without rotations returns the circuit unchanged") {
  const auto fm = decode_chromosome(Chromosome{"00000", 1, 1});
  const ToyData data(8, 3);
  RefineConfig config;
  const RefineResult result = refine_circuit(fm, data.x, data.y, config);
  CHECK(result.trace.empty());
  CHECK(result.kernel_evaluations == 0);
  CHECK(result.circuit.gates.size() == fm.gates.size());
}

TEST_CASE("kta refinement never loses alignment") {
  const auto fm = two_rotation_circuit();
  const ToyData data(20, 7);
  RefineConfig config;
  config.objective = RefineObjective::MaxKta;
  config.budget = 40;
  const RefineResult result = refine_circuit(fm, data.x, data.y, config);

  const double before = kta(gram_matrix(fm, data.x).entries, data.y);
  const double after = kta(gram_matrix(result.circuit, data.x).entries, data.y);
  CHECK(after >= before);
  CHECK(result.final_objective <= result.initial_objective);
  CHECK(-result.initial_objective == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("rmse refinement never increases the error") {
  const auto fm = two_rotation_circuit();
  const ToyData data(16, 21);
  RefineConfig config;
  config.objective = RefineObjective::MinRmse;
  config.budget = 40;
  const RefineResult result = refine_circuit(fm, data.x, data.y, config);
  CHECK(result.final_objective <= result.initial_objective);
}

TEST_CASE("kernel evaluation accounting under a stub kernel") {
  const auto fm = two_rotation_circuit();
  const std::size_t n = 30;
  ToyData data(n, 9);
  RefineConfig config;
  config.objective = RefineObjective::MaxKta;
  config.budget = 25;
  config.final_step = 1e-15;

  const CircuitKernel stub = [](const FeatureMapCircuit& circuit, std::span<const double> a,
                                std::span<const double> b) {
    double scale = 1.0;
    for (const double p : circuit.overrides) scale += std::abs(p);
    const double d = a[0] - b[0];
    return std::exp(-scale * d * d);
  };
  const RefineResult result =
      refine_circuit(fm, data.x, data.y, config, 1.0, 1.0, RmseVariant::Symmetric, &stub);
  CHECK(result.trace.evaluations.size() == 25);
  CHECK(result.kernel_evaluations == 25 * (n * n - n) / 2);
}

TEST_CASE("refinement preserves gate structure and size") {
  const auto fm = two_rotation_circuit();
  const ToyData data(12, 31);
  RefineConfig config;
  config.budget = 20;
  const RefineResult result = refine_circuit(fm, data.x, data.y, config);
  CHECK(result.circuit.gates == fm.gates);
  CHECK(size_metric(result.circuit).sm == size_metric(fm).sm);
  // Discrete genes are untouched; the tuned values live in the overrides.
  CHECK(result.circuit.gates[0].gene.proportionality == doctest::Approx(M_PI / 4));
  CHECK(result.circuit.has_overrides());
}

TEST_CASE("trace csv serialization") {
  RefineTrace trace;
  trace.evaluations = {{{0.5, 1.0}, 2.0}, {{0.6, 0.9}, 1.5}};
  trace.best_index = 1;
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() == "0,0.5,1,2\n1,0.6,0.9,1.5\n");
}

}  // TEST_SUITE
