#include "qfm/encoding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qfm/error.hpp"

namespace qfm {

namespace {

// 3-bit type patterns 000..111.
constexpr std::array<GateKind, 8> kKindTable = {
    GateKind::H,        // 000
    GateKind::CNOT,     // 001
    GateKind::Identity, // 010
    GateKind::RX,       // 011
    GateKind::RZ,       // 100
    GateKind::Identity, // 101
    GateKind::Identity, // 110
    GateKind::RY,       // 111
};

// 2-bit parameter patterns 00..11.
constexpr std::array<double, 4> kProportionality = {M_PI, M_PI / 2.0, M_PI / 4.0,
                                                    M_PI / 8.0};

int parse_bits(std::string_view bits, ErrorCode code) {
  int value = 0;
  for (const char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(code, "invalid character in bit string");
    }
    value = value * 2 + (c - '0');
  }
  return value;
}

std::string_view kind_bits(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "000";
    case GateKind::CNOT: return "001";
    case GateKind::Identity: return "010";
    case GateKind::RX: return "011";
    case GateKind::RZ: return "100";
    case GateKind::RY: return "111";
  }
  throw Error(ErrorCode::Encoding, "unknown gate kind");
}

std::string_view code_bits(int code) {
  switch (code) {
    case 0: return "00";
    case 1: return "01";
    case 2: return "10";
    case 3: return "11";
  }
  throw Error(ErrorCode::Encoding, "proportionality code out of range");
}

std::string format_angle(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Identity: return "I";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
  }
  return "?";
}

std::size_t FeatureMapCircuit::rotation_count() const {
  std::size_t n = 0;
  for (const auto& g : gates) {
    if (g.is_rotation()) ++n;
  }
  return n;
}

GateGene decode_gene(std::string_view bits5) {
  if (bits5.size() != 5) {
    throw Error(ErrorCode::MalformedGene, "gene must be exactly 5 bits, got " +
                                              std::to_string(bits5.size()));
  }
  GateGene gene;
  gene.kind = kKindTable[static_cast<std::size_t>(
      parse_bits(bits5.substr(0, 3), ErrorCode::MalformedGene))];
  gene.proportionality_code = parse_bits(bits5.substr(3, 2), ErrorCode::MalformedGene);
  gene.proportionality = kProportionality[static_cast<std::size_t>(gene.proportionality_code)];
  return gene;
}

FeatureMapCircuit decode_chromosome(const Chromosome& c, unsigned feature_count) {
  if (c.qubit_budget == 0 || c.layer_budget == 0) {
    throw Error(ErrorCode::MalformedChromosome, "qubit and layer budgets must be positive");
  }
  const std::size_t expected = 5 * c.slot_count();
  if (c.bits.size() != expected) {
    throw Error(ErrorCode::MalformedChromosome,
                "chromosome length " + std::to_string(c.bits.size()) + " != 5*M*N = " +
                    std::to_string(expected));
  }
  const unsigned m = c.qubit_budget;
  const unsigned feature_mod = feature_count == 0 ? c.layer_budget : feature_count;

  FeatureMapCircuit fm;
  fm.qubit_budget = m;
  unsigned max_feature = 0;
  bool any_rotation = false;
  for (std::size_t slot = 0; slot < c.slot_count(); ++slot) {
    const GateGene gene = decode_gene(std::string_view(c.bits).substr(5 * slot, 5));
    if (gene.kind == GateKind::Identity) continue;
    if (gene.kind == GateKind::CNOT && m == 1) continue;  // degenerate, no-op

    PlacedGate gate;
    gate.slot = slot;
    gate.gene = gene;
    gate.qubit = static_cast<unsigned>(slot % m);
    if (gene.kind == GateKind::CNOT) {
      gate.cnot_target = static_cast<unsigned>((slot + 1) % m);
    } else if (gene.is_rotation()) {
      gate.feature = static_cast<unsigned>(slot % feature_mod);
      max_feature = std::max(max_feature, gate.feature);
      any_rotation = true;
    }
    fm.gates.push_back(gate);
  }
  fm.feature_count = any_rotation ? max_feature + 1 : 0;
  return fm;
}

Chromosome encode_circuit(const FeatureMapCircuit& fm, unsigned qubit_budget,
                          unsigned layer_budget) {
  if (fm.has_overrides()) {
    throw Error(ErrorCode::Encoding, "circuit with continuous overrides is not encodable");
  }
  if (qubit_budget == 0 || layer_budget == 0) {
    throw Error(ErrorCode::Encoding, "budgets must be positive");
  }
  const std::size_t slots = static_cast<std::size_t>(qubit_budget) * layer_budget;
  std::vector<std::string_view> cells(slots, "01000");
  std::vector<std::string> storage(fm.gates.size());

  for (std::size_t i = 0; i < fm.gates.size(); ++i) {
    const PlacedGate& g = fm.gates[i];
    if (g.slot >= slots) {
      throw Error(ErrorCode::Encoding, "gate slot exceeds budget");
    }
    if (g.qubit != g.slot % qubit_budget) {
      throw Error(ErrorCode::Encoding, "gate qubit breaks the round-robin rule");
    }
    storage[i] = std::string(kind_bits(g.gene.kind)) +
                 std::string(code_bits(g.gene.proportionality_code));
    cells[g.slot] = storage[i];
  }

  Chromosome c;
  c.qubit_budget = qubit_budget;
  c.layer_budget = layer_budget;
  c.bits.reserve(5 * slots);
  for (const auto cell : cells) c.bits += cell;
  return c;
}

SizeMetrics size_metric(const FeatureMapCircuit& fm) {
  SizeMetrics s;
  for (const auto& g : fm.gates) {
    if (g.gene.kind == GateKind::CNOT) {
      ++s.n_cnot;
    } else if (g.gene.kind != GateKind::Identity) {
      ++s.n_local;
    }
  }
  s.sm = static_cast<double>(s.n_local + 2 * s.n_cnot) / fm.qubit_budget;
  return s;
}

SizeMetrics size_metric(const FeatureMapCircuit& fm, double accuracy) {
  SizeMetrics s = size_metric(fm);
  s.ws = weighted_size(s.sm, accuracy);
  return s;
}

double weighted_size(double sm, double accuracy) {
  return sm + sm * accuracy * accuracy;
}

Chromosome random_chromosome(Rng& rng, unsigned qubit_budget, unsigned layer_budget) {
  if (qubit_budget == 0 || layer_budget == 0) {
    throw Error(ErrorCode::InvalidArgument, "budgets must be positive");
  }
  Chromosome c;
  c.qubit_budget = qubit_budget;
  c.layer_budget = layer_budget;
  c.bits.resize(5 * c.slot_count());
  for (auto& b : c.bits) b = rng.bit() ? '1' : '0';
  return c;
}

std::string render_circuit(const FeatureMapCircuit& fm) {
  const unsigned m = fm.qubit_budget;
  std::size_t layers = 0;
  for (const auto& g : fm.gates) layers = std::max(layers, g.slot / m + 1);

  // One text column per layer, split into sub-columns when gates in the same
  // layer touch the same qubit row (a wrapping CNOT shares rows with its
  // neighbor slots).
  std::vector<std::vector<std::vector<std::string>>> columns(layers);
  std::size_t rotation_index = 0;
  for (const auto& g : fm.gates) {
    const std::size_t layer = g.slot / m;
    std::vector<std::pair<unsigned, std::string>> marks;
    if (g.gene.kind == GateKind::CNOT) {
      marks = {{g.qubit, "*"}, {g.cnot_target, "(+)"}};
    } else if (g.is_rotation()) {
      const double p = fm.has_overrides() ? fm.overrides[rotation_index]
                                          : g.gene.proportionality;
      ++rotation_index;
      std::string label = std::string(gate_kind_name(g.gene.kind));
      label[1] = static_cast<char>(std::tolower(label[1]));
      marks = {{g.qubit, label + "(" + format_angle(p) + "*x" +
                             std::to_string(g.feature) + ")"}};
    } else {
      marks = {{g.qubit, "H"}};
    }

    auto& layer_columns = columns[layer];
    std::vector<std::string>* target = nullptr;
    for (auto& column : layer_columns) {
      bool free = true;
      for (const auto& [row, text] : marks) free = free && column[row].empty();
      if (free) {
        target = &column;
        break;
      }
    }
    if (target == nullptr) {
      layer_columns.emplace_back(m);
      target = &layer_columns.back();
    }
    for (const auto& [row, text] : marks) (*target)[row] = text;
  }

  std::ostringstream out;
  for (unsigned q = 0; q < m; ++q) {
    out << "q" << q << ": |0>-";
    for (const auto& layer_columns : columns) {
      for (const auto& column : layer_columns) {
        std::size_t width = 1;
        for (const auto& cell : column) width = std::max(width, cell.size());
        out << '-' << column[q] << std::string(width - column[q].size() + 1, '-');
      }
    }
    out << "-\n";
  }
  return out.str();
}

std::string gate_list(const FeatureMapCircuit& fm) {
  std::ostringstream out;
  std::size_t rotation_index = 0;
  for (const auto& g : fm.gates) {
    out << g.slot << ',' << gate_kind_name(g.gene.kind) << ',' << g.qubit << ',';
    if (g.is_rotation()) {
      const double p = fm.has_overrides() ? fm.overrides[rotation_index]
                                          : g.gene.proportionality;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.9g", p);
      out << g.feature << ',' << buf;
      ++rotation_index;
    } else {
      out << "-,-";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qfm
