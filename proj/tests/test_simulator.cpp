#include <doctest.h>

#include <cmath>
#include <complex>

#include "qfm/error.hpp"
#include "qfm/rng.hpp"
#include "qfm/simulator.hpp"
#include "support/oracles.hpp"

using namespace qfm;

namespace {

double state_distance(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("hadamard on |0>") {
  StateVector s(1);
  apply_hadamard(s, 0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s[0] - std::complex<double>(inv_sqrt2, 0)) < 1e-12);
  CHECK(std::abs(s[1] - std::complex<double>(inv_sqrt2, 0)) < 1e-12);
}

TEST_CASE("rx(pi) maps |0> to -i|1>") {
  StateVector s(1);
  apply_rotation(s, GateKind::RX, 0, M_PI);
  CHECK(std::abs(s[0]) < 1e-12);
  CHECK(std::abs(s[1] - std::complex<double>(0, -1)) < 1e-12);
}

TEST_CASE("cnot truth table") {
  // |q1 q0> = |01>: control q0 set, target q1 flips -> |11>.
  StateVector s(2);
  s[0] = 0.0;
  s[1] = 1.0;
  apply_cnot(s, 0, 1);
  CHECK(std::abs(s[3] - std::complex<double>(1, 0)) < 1e-12);

  // Control clear leaves the state alone.
  StateVector t(2);
  apply_cnot(t, 0, 1);
  CHECK(std::abs(t[0] - std::complex<double>(1, 0)) < 1e-12);
}

TEST_CASE("empty circuit prepares |0...0>") {
  FeatureMapCircuit fm;
  fm.qubit_budget = 3;
  const StateVector s = prepare_feature_state(fm, std::vector<double>{});
  CHECK(std::abs(s[0] - std::complex<double>(1, 0)) < 1e-15);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) == 0.0);
}

TEST_CASE("single ry rotation by pi/2") {
  Chromosome c{"11100", 1, 1};
  const auto fm = decode_chromosome(c);
  const std::vector<double> x = {0.5};
  const StateVector s = prepare_feature_state(fm, x);
  CHECK(std::abs(s[0] - std::complex<double>(std::cos(M_PI / 4), 0)) < 1e-12);
  CHECK(std::abs(s[1] - std::complex<double>(std::sin(M_PI / 4), 0)) < 1e-12);
}

TEST_CASE("feature vector too short") {
  const auto fm = decode_chromosome(Chromosome{"11100", 1, 1});
  CHECK_THROWS_AS(prepare_feature_state(fm, std::vector<double>{}), Error);
}

TEST_CASE("gate indices are validated") {
  StateVector s(2);
  CHECK_THROWS_AS(apply_hadamard(s, 2), Error);
  CHECK_THROWS_AS(apply_cnot(s, 0, 2), Error);
  CHECK_THROWS_AS(apply_cnot(s, 1, 1), Error);
}

TEST_CASE("overrides replace the discrete proportionality") {
  auto fm = decode_chromosome(Chromosome{"11100", 1, 1});  // RY(pi * x0)
  fm.overrides = {M_PI / 2.0};
  const std::vector<double> x = {1.0};
  const StateVector s = prepare_feature_state(fm, x);
  CHECK(std::abs(s[0] - std::complex<double>(std::cos(M_PI / 4), 0)) < 1e-12);
}

TEST_CASE("norm is preserved by random circuits") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Chromosome c = random_chromosome(rng, 3, 4);
    const auto fm = decode_chromosome(c);
    std::vector<double> x(fm.feature_count);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const StateVector s = prepare_feature_state(fm, x);
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("gates are self-inverse or inverted by negated angles") {
  Rng rng(5);
  SUBCASE("H twice") {
    StateVector s(2);
    apply_rotation(s, GateKind::RY, 0, 0.7);
    StateVector reference = s;
    apply_hadamard(s, 1);
    apply_hadamard(s, 1);
    CHECK(state_distance(s, reference) < 1e-10);
  }
  SUBCASE("CNOT twice") {
    StateVector s(2);
    apply_rotation(s, GateKind::RX, 0, 1.1);
    apply_rotation(s, GateKind::RY, 1, -0.4);
    StateVector reference = s;
    apply_cnot(s, 1, 0);
    apply_cnot(s, 1, 0);
    CHECK(state_distance(s, reference) < 1e-10);
  }
  SUBCASE("rotation and its negation") {
    for (const GateKind axis : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
      StateVector s(1);
      apply_rotation(s, GateKind::RY, 0, 0.3);
      StateVector reference = s;
      const double theta = rng.uniform(-3.0, 3.0);
      apply_rotation(s, axis, 0, theta);
      apply_rotation(s, axis, 0, -theta);
      CHECK(state_distance(s, reference) < 1e-10);
    }
  }
}

TEST_CASE("matches the explicit matrix oracle for small qubit counts") {
  Rng rng(23);
  for (unsigned m = 1; m <= 3; ++m) {
    for (int trial = 0; trial < 60; ++trial) {
      const Chromosome c = random_chromosome(rng, m, 4);
      const auto fm = decode_chromosome(c);
      std::vector<double> x(std::max<unsigned>(fm.feature_count, 1));
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);

      const StateVector s = prepare_feature_state(fm, x);
      const auto expected = oracle::simulate_by_matrices(fm, x);
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(s[i] - expected[i]) < 1e-10);
      }
    }
  }
}

}  // TEST_SUITE
