#include "qfm/simulator.hpp"

#include <cmath>

#include "qfm/error.hpp"

namespace qfm {

namespace {

using Complex = std::complex<double>;

void apply_single_qubit(StateVector& state, unsigned qubit, Complex m00, Complex m01,
                        Complex m10, Complex m11) {
  const std::size_t dim = state.size();
  const std::size_t step = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < dim; base += 2 * step) {
    for (std::size_t k = 0; k < step; ++k) {
      const std::size_t i0 = base + k;
      const std::size_t i1 = i0 + step;
      const Complex a0 = state[i0];
      const Complex a1 = state[i1];
      state[i0] = m00 * a0 + m01 * a1;
      state[i1] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace

StateVector::StateVector(unsigned qubit_count)
    : qubit_count_(qubit_count), amplitudes_(std::size_t{1} << qubit_count) {
  if (qubit_count == 0 || qubit_count > 24) {
    throw Error(ErrorCode::Simulation, "unsupported qubit count");
  }
  amplitudes_[0] = 1.0;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

void apply_hadamard(StateVector& state, unsigned qubit) {
  if (qubit >= state.qubit_count()) {
    throw Error(ErrorCode::Simulation, "hadamard qubit index out of range");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  apply_single_qubit(state, qubit, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
}

void apply_cnot(StateVector& state, unsigned control, unsigned target) {
  if (control >= state.qubit_count() || target >= state.qubit_count()) {
    throw Error(ErrorCode::Simulation, "cnot qubit index out of range");
  }
  if (control == target) {
    throw Error(ErrorCode::Simulation, "cnot control equals target");
  }
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t dim = state.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cbit) != 0 && (i & tbit) == 0) {
      std::swap(state[i], state[i | tbit]);
    }
  }
}

void apply_rotation(StateVector& state, GateKind axis, unsigned qubit, double angle) {
  if (qubit >= state.qubit_count()) {
    throw Error(ErrorCode::Simulation, "rotation qubit index out of range");
  }
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex mi(0.0, -1.0);
  switch (axis) {
    case GateKind::RX:
      apply_single_qubit(state, qubit, c, mi * s, mi * s, c);
      break;
    case GateKind::RY:
      apply_single_qubit(state, qubit, c, -s, s, c);
      break;
    case GateKind::RZ:
      apply_single_qubit(state, qubit, Complex(c, -s), 0.0, 0.0, Complex(c, s));
      break;
    default:
      throw Error(ErrorCode::Simulation, "not a rotation axis");
  }
}

void apply_gate(StateVector& state, const PlacedGate& gate, std::span<const double> x,
                std::optional<double> override_proportionality) {
  switch (gate.gene.kind) {
    case GateKind::H:
      apply_hadamard(state, gate.qubit);
      break;
    case GateKind::CNOT:
      apply_cnot(state, gate.qubit, gate.cnot_target);
      break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: {
      if (gate.feature >= x.size()) {
        throw Error(ErrorCode::Dimension, "feature vector too short for rotation gate");
      }
      const double p = override_proportionality.value_or(gate.gene.proportionality);
      apply_rotation(state, gate.gene.kind, gate.qubit, p * x[gate.feature]);
      break;
    }
    case GateKind::Identity:
      break;
  }
}

StateVector prepare_feature_state(const FeatureMapCircuit& fm, std::span<const double> x) {
  if (x.size() < fm.feature_count) {
    throw Error(ErrorCode::Dimension,
                "feature vector has " + std::to_string(x.size()) + " entries, circuit needs " +
                    std::to_string(fm.feature_count));
  }
  StateVector state(fm.qubit_budget);
  std::size_t rotation_index = 0;
  for (const auto& gate : fm.gates) {
    std::optional<double> override_p;
    if (gate.is_rotation()) {
      if (fm.has_overrides()) override_p = fm.overrides[rotation_index];
      ++rotation_index;
    }
    apply_gate(state, gate, x, override_p);
  }
  return state;
}

std::complex<double> overlap(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::Dimension, "overlap of states with different qubit counts");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace qfm
