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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace mtcsim {

using Qubit = std::uint32_t;

enum class GateKind { OneQubit, Cnot, Swap };

/**
 * A single gate over logical (or, after routing, physical) qubit indices.
 *
 * One-qubit gates carry an opaque label ("h", "x", ...); only the gate
 * counts matter to the scheduler and the router, never the 1q semantics.
 * CNOT and SWAP act on two distinct qubits.
 */
class Gate {
public:
  static Gate one_qubit(std::string label, Qubit target);
  static Gate cnot(Qubit control, Qubit target);
  static Gate swap(Qubit a, Qubit b);

  [[nodiscard]] GateKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_two_qubit() const noexcept {
    return kind_ != GateKind::OneQubit;
  }
  [[nodiscard]] std::size_t num_operands() const noexcept {
    return is_two_qubit() ? 2 : 1;
  }
  /// Label of a one-qubit gate; empty for CNOT/SWAP.
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  /// Operand by position; throws std::out_of_range past num_operands().
  [[nodiscard]] Qubit operand(std::size_t i) const;

  bool operator==(const Gate& other) const = default;

private:
  Gate(GateKind kind, std::string label, Qubit a, Qubit b);

  GateKind kind_;
  std::string label_;
  std::array<Qubit, 2> operands_;
};

/**
 * An ordered gate sequence over a fixed-size qubit register.
 *
 * Every operand index is validated against the register size on insertion.
 * Circuits are plain values: copyable, comparable, safe to share across
 * concurrent experiment trials.
 */
class Circuit {
public:
  /// Empty circuit over a zero-qubit register; useful as a JSON target.
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits);

  void add(Gate gate);

  [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] std::size_t num_gates() const noexcept { return gates_.size(); }
  [[nodiscard]] bool empty() const noexcept { return gates_.empty(); }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept {
    return gates_;
  }

  [[nodiscard]] auto begin() const noexcept { return gates_.begin(); }
  [[nodiscard]] auto end() const noexcept { return gates_.end(); }

  bool operator==(const Circuit& other) const = default;

private:
  std::size_t num_qubits_ = 0;
  std::vector<Gate> gates_;
};

struct GateStats {
  std::size_t total = 0;
  std::size_t two_qubit = 0;
  std::size_t cnot = 0;
  std::size_t swap = 0;
  std::size_t depth = 0;

  bool operator==(const GateStats&) const = default;
};

/**
 * Gate counts plus circuit depth.
 *
 * Depth uses greedy ASAP layering: each gate lands in the earliest layer
 * in which none of its operands are busy. Empty circuits have depth 0.
 */
[[nodiscard]] GateStats gate_stats(const Circuit& c);

/**
 * Priority metric: two-qubit gates divided by total gates, in [0, 1].
 * Throws std::invalid_argument("empty program") for empty circuits; the
 * scheduler rejects such jobs.
 */
[[nodiscard]] double priority_metric(const Circuit& c);

/**
 * Seeded random benchmark circuit.
 *
 * Gate-by-gate generation: with probability `two_qubit_fraction` emits a
 * CNOT on a uniformly chosen distinct pair, otherwise a one-qubit gate on
 * a uniform qubit. Deterministic for fixed arguments (bitwise-identical
 * gate list per call).
 *
 * Preconditions: num_qubits >= 1, two_qubit_fraction in [0, 1], and a
 * positive fraction requires at least two qubits.
 */
[[nodiscard]] Circuit random_circuit(std::size_t num_qubits,
                                     std::size_t num_gates,
                                     double two_qubit_fraction,
                                     std::uint64_t seed);

/**
 * Rewrites every SWAP(a, b) as CNOT(a,b) CNOT(b,a) CNOT(a,b), preserving
 * all other gates in order. The result contains no SWAP gates.
 */
[[nodiscard]] Circuit decompose_swaps(const Circuit& c);

// JSON schema: {"num_qubits": n, "gates": [{"kind": k, "operands": [...]}]}.
// "cnot" and "swap" (case-insensitive) are the two-qubit kinds; any other
// kind string is the label of a one-qubit gate.
void to_json(nlohmann::json& j, const Circuit& c);
void from_json(const nlohmann::json& j, Circuit& c);

}  // namespace mtcsim
