// Copyright 2026 The mtcsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtcsim/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>

namespace mtcsim {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

}  // namespace

Gate::Gate(GateKind kind, std::string label, Qubit a, Qubit b)
    : kind_(kind), label_(std::move(label)), operands_{a, b} {}

Gate Gate::one_qubit(std::string label, Qubit target) {
  if (label.empty()) {
    throw std::invalid_argument("one-qubit gate label must be nonempty");
  }
  const std::string lower = lowercase(label);
  if (lower == "cnot" || lower == "swap") {
    // Reserved by the serialization format for the two-qubit kinds.
    throw std::invalid_argument("one-qubit gate label '" + label +
                                "' is reserved");
  }
  return Gate(GateKind::OneQubit, std::move(label), target, target);
}

Gate Gate::cnot(Qubit control, Qubit target) {
  if (control == target) {
    throw std::invalid_argument("CNOT operands must be distinct");
  }
  return Gate(GateKind::Cnot, {}, control, target);
}

Gate Gate::swap(Qubit a, Qubit b) {
  if (a == b) {
    throw std::invalid_argument("SWAP operands must be distinct");
  }
  return Gate(GateKind::Swap, {}, a, b);
}

Qubit Gate::operand(std::size_t i) const {
  if (i >= num_operands()) {
    throw std::out_of_range("gate operand index out of range");
  }
  return operands_[i];
}

Circuit::Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0) {
    throw std::invalid_argument("circuit must have at least 1 qubit");
  }
}

void Circuit::add(Gate gate) {
  for (std::size_t i = 0; i < gate.num_operands(); ++i) {
    if (gate.operand(i) >= num_qubits_) {
      throw std::out_of_range("gate operand " + std::to_string(gate.operand(i)) +
                              " outside register of size " +
                              std::to_string(num_qubits_));
    }
  }
  gates_.push_back(std::move(gate));
}

GateStats gate_stats(const Circuit& c) {
  GateStats stats;
  stats.total = c.num_gates();

  std::vector<std::size_t> qubit_depth(c.num_qubits(), 0);
  for (const Gate& g : c) {
    switch (g.kind()) {
    case GateKind::Cnot:
      ++stats.cnot;
      break;
    case GateKind::Swap:
      ++stats.swap;
      break;
    case GateKind::OneQubit:
      break;
    }
    // ASAP layering: the gate joins the earliest layer where all its
    // operands are free.
    std::size_t layer = 0;
    for (std::size_t i = 0; i < g.num_operands(); ++i) {
      layer = std::max(layer, qubit_depth[g.operand(i)]);
    }
    for (std::size_t i = 0; i < g.num_operands(); ++i) {
      qubit_depth[g.operand(i)] = layer + 1;
    }
    stats.depth = std::max(stats.depth, layer + 1);
  }
  stats.two_qubit = stats.cnot + stats.swap;
  return stats;
}

double priority_metric(const Circuit& c) {
  if (c.empty()) {
    throw std::invalid_argument("empty program");
  }
  const GateStats stats = gate_stats(c);
  return static_cast<double>(stats.two_qubit) / static_cast<double>(stats.total);
}

Circuit random_circuit(std::size_t num_qubits, std::size_t num_gates,
                       double two_qubit_fraction, std::uint64_t seed) {
  if (num_qubits < 1) {
    throw std::invalid_argument("random_circuit requires at least 1 qubit");
  }
  if (two_qubit_fraction < 0.0 || two_qubit_fraction > 1.0) {
    throw std::invalid_argument("two_qubit_fraction must lie in [0, 1]");
  }
  if (two_qubit_fraction > 0.0 && num_qubits < 2) {
    throw std::invalid_argument(
        "a positive two_qubit_fraction requires at least 2 qubits");
  }

  static const std::array<const char*, 6> kOneQubitMenu = {"h", "x", "y",
                                                           "z", "s", "t"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_qubit(0, num_qubits - 1);
  std::uniform_int_distribution<std::size_t> pick_label(
      0, kOneQubitMenu.size() - 1);

  Circuit c(num_qubits);
  for (std::size_t i = 0; i < num_gates; ++i) {
    if (coin(rng) < two_qubit_fraction) {
      const auto control = static_cast<Qubit>(pick_qubit(rng));
      std::uniform_int_distribution<std::size_t> pick_other(0, num_qubits - 2);
      auto target = static_cast<Qubit>(pick_other(rng));
      if (target >= control) {
        ++target;
      }
      c.add(Gate::cnot(control, target));
    } else {
      c.add(Gate::one_qubit(kOneQubitMenu[pick_label(rng)],
                            static_cast<Qubit>(pick_qubit(rng))));
    }
  }
  return c;
}

Circuit decompose_swaps(const Circuit& c) {
  Circuit out(c.num_qubits());
  for (const Gate& g : c) {
    if (g.kind() == GateKind::Swap) {
      const Qubit a = g.operand(0);
      const Qubit b = g.operand(1);
      out.add(Gate::cnot(a, b));
      out.add(Gate::cnot(b, a));
      out.add(Gate::cnot(a, b));
    } else {
      out.add(g);
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c) {
    nlohmann::json entry;
    switch (g.kind()) {
    case GateKind::Cnot:
      entry["kind"] = "cnot";
      entry["operands"] = {g.operand(0), g.operand(1)};
      break;
    case GateKind::Swap:
      entry["kind"] = "swap";
      entry["operands"] = {g.operand(0), g.operand(1)};
      break;
    case GateKind::OneQubit:
      entry["kind"] = g.label();
      entry["operands"] = {g.operand(0)};
      break;
    }
    gates.push_back(std::move(entry));
  }
  j = nlohmann::json{{"num_qubits", c.num_qubits()}, {"gates", std::move(gates)}};
}

void from_json(const nlohmann::json& j, Circuit& c) {
  Circuit parsed(j.at("num_qubits").get<std::size_t>());
  for (const auto& entry : j.at("gates")) {
    const auto kind = entry.at("kind").get<std::string>();
    const auto& operands = entry.at("operands");
    const std::string lower = lowercase(kind);
    if (lower == "cnot" || lower == "swap") {
      if (operands.size() != 2) {
        throw std::invalid_argument("two-qubit gate needs 2 operands");
      }
      const auto a = operands[0].get<Qubit>();
      const auto b = operands[1].get<Qubit>();
      parsed.add(lower == "cnot" ? Gate::cnot(a, b) : Gate::swap(a, b));
    } else {
      if (operands.size() != 1) {
        throw std::invalid_argument("one-qubit gate needs 1 operand");
      }
      parsed.add(Gate::one_qubit(kind, operands[0].get<Qubit>()));
    }
  }
  c = std::move(parsed);
}

}  // namespace mtcsim
