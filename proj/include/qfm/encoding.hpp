#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfm/rng.hpp"

namespace qfm {

enum class GateKind : std::uint8_t { H, CNOT, Identity, RX, RY, RZ };

std::string_view gate_kind_name(GateKind kind);

/// One decoded 5-bit gene: a gate type plus a rotation proportionality
/// factor. Three of the eight type patterns decode to Identity; the factor
/// is carried for every kind but only meaningful for rotations.
struct GateGene {
  GateKind kind = GateKind::Identity;
  int proportionality_code = 0;    // the 2 parameter bits, 0..3
  double proportionality = 0.0;    // pi, pi/2, pi/4 or pi/8

  bool is_rotation() const {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
  }
};

/// Fixed-length bit string encoding of a feature map circuit:
/// 5 bits per gate slot, qubit_budget * layer_budget slots.
struct Chromosome {
  std::string bits;
  unsigned qubit_budget = 1;   // M
  unsigned layer_budget = 1;   // N

  std::size_t slot_count() const {
    return static_cast<std::size_t>(qubit_budget) * layer_budget;
  }
};

struct PlacedGate {
  std::size_t slot = 0;
  GateGene gene;
  unsigned qubit = 0;        // target qubit; control qubit for CNOT
  unsigned feature = 0;      // bound feature index (rotations only)
  unsigned cnot_target = 0;  // (qubit + 1) mod M, CNOT only

  bool is_rotation() const { return gene.is_rotation(); }

  bool operator==(const PlacedGate& o) const {
    return slot == o.slot && gene.kind == o.gene.kind &&
           gene.proportionality_code == o.gene.proportionality_code &&
           qubit == o.qubit && feature == o.feature && cnot_target == o.cnot_target;
  }
};

/// A decoded circuit. Gates appear in slot order; Identity genes are not
/// placed. `overrides`, when non-empty, holds one continuous proportionality
/// per rotation gate (in gate order) and takes precedence over the discrete
/// gene values.
struct FeatureMapCircuit {
  std::vector<PlacedGate> gates;
  unsigned qubit_budget = 1;
  unsigned feature_count = 0;      // minimum input dimension required
  std::vector<double> overrides;   // empty means none

  std::size_t rotation_count() const;
  bool has_overrides() const { return !overrides.empty(); }
};

struct SizeMetrics {
  std::size_t n_local = 0;  // single-qubit non-identity gates
  std::size_t n_cnot = 0;
  double sm = 0.0;
  std::optional<double> ws;
};

/// Decodes one 5-bit gene. The first 3 bits select the gate type, the last 2
/// the proportionality factor. Throws Error(MalformedGene) unless `bits5` is
/// exactly five '0'/'1' characters.
GateGene decode_gene(std::string_view bits5);

/// Decodes a chromosome into placed gates, round-robin: slot i targets qubit
/// i mod M; rotations bind feature i mod `feature_count`; a CNOT at slot i
/// uses control i mod M and target (i+1) mod M. `feature_count` = 0 binds
/// features modulo the layer budget. CNOT genes are skipped when M = 1
/// (control and target would coincide).
FeatureMapCircuit decode_chromosome(const Chromosome& c, unsigned feature_count = 0);

/// Canonical inverse of decode_chromosome: unoccupied slots encode as
/// Identity "010" + "00". Requires a circuit whose gates fit the given
/// budgets and that carries no overrides.
Chromosome encode_circuit(const FeatureMapCircuit& fm, unsigned qubit_budget,
                          unsigned layer_budget);

SizeMetrics size_metric(const FeatureMapCircuit& fm);
SizeMetrics size_metric(const FeatureMapCircuit& fm, double accuracy);
double weighted_size(double sm, double accuracy);

Chromosome random_chromosome(Rng& rng, unsigned qubit_budget, unsigned layer_budget);

/// Fixed-width text diagram, one row per qubit, one column per layer.
std::string render_circuit(const FeatureMapCircuit& fm);

/// Line-oriented listing: slot,kind,qubit,feature,proportionality.
/// Feature and proportionality are '-' for non-rotation gates.
std::string gate_list(const FeatureMapCircuit& fm);

}  // namespace qfm
