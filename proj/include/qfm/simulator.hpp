#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qfm/encoding.hpp"

namespace qfm {

/// Dense statevector over `qubit_count` qubits. Qubit 0 is the least
/// significant bit of the basis-state index.
class StateVector {
 public:
  explicit StateVector(unsigned qubit_count);

  unsigned qubit_count() const { return qubit_count_; }
  std::size_t size() const { return amplitudes_.size(); }

  std::complex<double>& operator[](std::size_t i) { return amplitudes_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amplitudes_[i]; }

  std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }

  double norm() const;

 private:
  unsigned qubit_count_;
  std::vector<std::complex<double>> amplitudes_;
};

void apply_hadamard(StateVector& state, unsigned qubit);
void apply_cnot(StateVector& state, unsigned control, unsigned target);

/// R_a(theta) = cos(theta/2) I - i sin(theta/2) A for A in {X, Y, Z}.
void apply_rotation(StateVector& state, GateKind axis, unsigned qubit, double angle);

/// Applies one placed gate. Rotations read x[gate.feature] and use
/// `override_proportionality` in place of the gene's factor when given.
void apply_gate(StateVector& state, const PlacedGate& gate, std::span<const double> x,
                std::optional<double> override_proportionality = std::nullopt);

/// Runs the circuit on |0...0> for the feature vector x.
StateVector prepare_feature_state(const FeatureMapCircuit& fm, std::span<const double> x);

/// <a|b>
std::complex<double> overlap(const StateVector& a, const StateVector& b);

}  // namespace qfm
