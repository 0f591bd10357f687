#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "qfm/encoding.hpp"
#include "qfm/error.hpp"
#include "qfm/rng.hpp"

using namespace qfm;

namespace {

Chromosome make(const std::string& bits, unsigned m, unsigned n) {
  return Chromosome{bits, m, n};
}

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("gene table decodes all 32 patterns") {
  const std::map<std::string, GateKind> kinds = {
      {"000", GateKind::H},  {"001", GateKind::CNOT},     {"010", GateKind::Identity},
      {"011", GateKind::RX}, {"100", GateKind::RZ},       {"101", GateKind::Identity},
      {"110", GateKind::Identity}, {"111", GateKind::RY},
  };
  const std::map<std::string, double> factors = {
      {"00", M_PI}, {"01", M_PI / 2}, {"10", M_PI / 4}, {"11", M_PI / 8}};
  for (const auto& [kind_bits, kind] : kinds) {
    for (const auto& [code_bits, factor] : factors) {
      const GateGene gene = decode_gene(kind_bits + code_bits);
      CHECK(gene.kind == kind);
      CHECK(gene.proportionality == factor);
    }
  }
}

TEST_CASE("gene examples") {
  CHECK(decode_gene("00001").kind == GateKind::H);
  const GateGene ry = decode_gene("11110");
  CHECK(ry.kind == GateKind::RY);
  CHECK(ry.proportionality == M_PI / 4);
  CHECK(decode_gene("01000").kind == GateKind::Identity);
}

TEST_CASE("gene length and character validation") {
  CHECK_THROWS_AS(decode_gene("0000"), Error);
  CHECK_THROWS_AS(decode_gene("000000"), Error);
  CHECK_THROWS_AS(decode_gene("00a01"), Error);
}

TEST_CASE("chromosome decode follows the round-robin rule") {
  // Slots: H, RY(pi/4), Identity, CNOT. Slot 3: control 3 mod 2 = 1,
  // target (3+1) mod 2 = 0.
  const auto fm = decode_chromosome(make("00001" "11110" "01000" "00100", 2, 2));
  REQUIRE(fm.gates.size() == 3);
  CHECK(fm.gates[0].gene.kind == GateKind::H);
  CHECK(fm.gates[0].qubit == 0);
  CHECK(fm.gates[1].gene.kind == GateKind::RY);
  CHECK(fm.gates[1].qubit == 1);
  CHECK(fm.gates[1].feature == 1);
  CHECK(fm.gates[1].gene.proportionality == M_PI / 4);
  CHECK(fm.gates[2].gene.kind == GateKind::CNOT);
  CHECK(fm.gates[2].qubit == 1);
  CHECK(fm.gates[2].cnot_target == 0);
}

TEST_CASE("all-identity chromosome decodes to an empty circuit") {
  const auto fm = decode_chromosome(make("010000100001000", 3, 1));
  CHECK(fm.gates.empty());
  CHECK(size_metric(fm).sm == 0.0);
}

TEST_CASE("single-slot rz chromosome") {
  const auto fm = decode_chromosome(make("10000", 1, 1));
  REQUIRE(fm.gates.size() == 1);
  CHECK(fm.gates[0].gene.kind == GateKind::RZ);
  CHECK(fm.gates[0].gene.proportionality == M_PI);
  CHECK(fm.gates[0].qubit == 0);
  CHECK(fm.gates[0].feature == 0);
}

TEST_CASE("decode rejects wrong lengths") {
  CHECK_THROWS_AS(decode_chromosome(make("01000", 2, 1)), Error);
  CHECK_THROWS_AS(decode_chromosome(make("", 1, 1)), Error);
}

TEST_CASE("explicit feature count binds rotations modulo the data dimension") {
  // Budgets 6x6 with 2-feature data: slot 4 must bind feature 0, slot 5
  // feature 1.
  std::string bits;
  for (int slot = 0; slot < 36; ++slot) bits += slot == 4 || slot == 5 ? "11100" : "01000";
  const auto fm = decode_chromosome(make(bits, 6, 6), 2);
  REQUIRE(fm.gates.size() == 2);
  CHECK(fm.gates[0].feature == 0);
  CHECK(fm.gates[1].feature == 1);
  CHECK(fm.feature_count == 2);
}

TEST_CASE("cnot on a single-qubit budget is skipped") {
  const auto fm = decode_chromosome(make("00100", 1, 1));
  CHECK(fm.gates.empty());
}

TEST_CASE("encode canonicalizes and round-trips") {
  SUBCASE("empty circuit") {
    FeatureMapCircuit fm;
    fm.qubit_budget = 1;
    CHECK(encode_circuit(fm, 1, 1).bits == "01000");
  }
  SUBCASE("degenerate identity patterns re-encode as 010") {
    const auto fm = decode_chromosome(make("10100", 1, 1));
    CHECK(fm.gates.empty());
    CHECK(encode_circuit(fm, 1, 1).bits == "01000");
  }
  SUBCASE("decode-encode-decode is a fixpoint on random chromosomes") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const Chromosome c = random_chromosome(rng, 3, 4);
      const auto fm = decode_chromosome(c);
      const Chromosome back = encode_circuit(fm, 3, 4);
      const auto fm2 = decode_chromosome(back);
      CHECK(fm.gates == fm2.gates);
    }
  }
  SUBCASE("fixpoint also holds under an explicit feature modulus") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const Chromosome c = random_chromosome(rng, 3, 4);
      const auto fm = decode_chromosome(c, 2);
      const Chromosome back = encode_circuit(fm, 3, 4);
      const auto fm2 = decode_chromosome(back, 2);
      CHECK(fm.gates == fm2.gates);
    }
  }
}

TEST_CASE("encode rejects circuits that do not fit") {
  auto fm = decode_chromosome(make("00001" "11110" "01000" "00100", 2, 2));
  CHECK_THROWS_AS(encode_circuit(fm, 2, 1), Error);
  fm.overrides = {0.3};
  CHECK_THROWS_AS(encode_circuit(fm, 2, 2), Error);
}

TEST_CASE("size metric arithmetic") {
  // 4 single-qubit gates and 1 CNOT on M=2: SM = (4 + 2) / 2 = 3.
  const auto fm = decode_chromosome(make("00000" "11100" "01100" "10000" "00100" "01000", 2, 3));
  const SizeMetrics s = size_metric(fm);
  CHECK(s.n_local == 4);
  CHECK(s.n_cnot == 1);
  CHECK(s.sm == doctest::Approx(3.0));
  CHECK(*size_metric(fm, 1.0).ws == doctest::Approx(6.0));
  CHECK(*size_metric(fm, 0.0).ws == doctest::Approx(3.0));
}

TEST_CASE("size metric ignores identity insertions") {
  const auto small = decode_chromosome(make("00000" "11100", 2, 1));
  const auto padded = decode_chromosome(make("00000" "11100" "01000" "01000", 2, 2));
  CHECK(size_metric(small).sm == size_metric(padded).sm);
}

TEST_CASE("weighted size is monotone in accuracy") {
  double previous = -1.0;
  for (double a = 0.0; a <= 1.0; a += 0.05) {
    const double ws = weighted_size(3.0, a);
    CHECK(ws >= previous);
    CHECK(ws >= 3.0);
    CHECK(ws <= 6.0);
    previous = ws;
  }
}

TEST_CASE("random chromosomes") {
  SUBCASE("deterministic per seed") {
    Rng a(42);
    Rng b(42);
    CHECK(random_chromosome(a, 6, 6).bits == random_chromosome(b, 6, 6).bits);
  }
  SUBCASE("length is 5*M*N") {
    Rng rng(1);
    CHECK(random_chromosome(rng, 6, 6).bits.size() == 180);
  }
  SUBCASE("bits are uniform") {
    Rng rng(3);
    std::size_t ones = 0;
    std::size_t total = 0;
    while (total < 100000) {
      const Chromosome c = random_chromosome(rng, 6, 6);
      for (const char bit : c.bits) ones += bit == '1';
      total += c.bits.size();
    }
    const double frequency = static_cast<double>(ones) / total;
    CHECK(frequency == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("renderings") {
  const auto fm = decode_chromosome(make("00001" "11110" "01000" "00100", 2, 2));
  const std::string diagram = render_circuit(fm);
  CHECK(diagram.find("q0: |0>") != std::string::npos);
  CHECK(diagram.find("Ry(0.7854*x1)") != std::string::npos);
  CHECK(diagram.find("(+)") != std::string::npos);

  const std::string list = gate_list(fm);
  CHECK(list.find("0,H,0,-,-") != std::string::npos);
  CHECK(list.find("3,CNOT,1,-,-") != std::string::npos);
  CHECK(list.find("1,RY,1,1,0.785398163") != std::string::npos);
}

}  // TEST_SUITE
