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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "mtcsim/circuit.hpp"
#include "mtcsim/hardware.hpp"

namespace mtcsim {

/**
 * Injective assignment of logical qubits to physical qubits, restricted to
 * an allocated subset of the device.
 */
class Layout {
public:
  Layout() = default;
  /// logical_to_physical[l] is the physical home of logical qubit l.
  explicit Layout(std::vector<Qubit> logical_to_physical);

  [[nodiscard]] Qubit physical(Qubit logical) const;
  [[nodiscard]] std::size_t num_logical() const noexcept {
    return logical_to_physical_.size();
  }
  [[nodiscard]] const std::vector<Qubit>& mapping() const noexcept {
    return logical_to_physical_;
  }

  /// Checks injectivity, image within `allocation`, and domain size.
  void validate(const Circuit& c, const std::vector<Qubit>& allocation) const;

  bool operator==(const Layout&) const = default;

private:
  std::vector<Qubit> logical_to_physical_;
};

struct RoutingResult {
  /// Routed circuit over physical indices, with inserted SWAPs explicit.
  Circuit routed{1};
  Layout final_layout;
  std::size_t swaps_inserted = 0;
  /// CNOT count after rewriting every SWAP in `routed` into 3 CNOTs.
  std::size_t cnot_after_decomposition = 0;
  /// Depth of the decomposed (CNOT-basis) routed circuit.
  std::size_t depth_after = 0;

  bool operator==(const RoutingResult&) const = default;
};

/**
 * Deterministic starting layout: logical qubits ordered by descending
 * two-qubit interaction count are placed onto allocation qubits ordered by
 * descending induced degree; both orders break ties toward the smaller
 * index. Throws std::invalid_argument when the allocation is too small.
 */
[[nodiscard]] Layout initial_layout(const Circuit& c, const CouplingGraph& g,
                                    const std::vector<Qubit>& allocation);

/**
 * Inserts SWAPs so that every two-qubit gate acts on coupled physical
 * qubits inside `allocation`, never touching qubits outside it.
 *
 * Gates commit in program order. When the head gate is blocked, candidate
 * SWAPs on allocation-internal edges touching the current front layer are
 * scored by the summed shortest-path-distance reduction over the front
 * layer plus a 0.5-weighted reduction over a lookahead window of the next
 * 20 pending two-qubit gates; score ties resolve by a seeded uniform
 * choice. The pair swapped last is never chosen twice in a row.
 *
 * Deterministic for fixed inputs. Throws std::invalid_argument for a
 * disconnected allocation.
 */
[[nodiscard]] RoutingResult route(const Circuit& c, const CouplingGraph& g,
                                  const std::vector<Qubit>& allocation,
                                  const Layout& layout, std::uint64_t seed);

/**
 * Minimum number of SWAPs over all routing schedules, found by
 * breadth-first search over (qubit permutation, next-unsatisfied-gate)
 * states. Test oracle for the heuristic; guarded to circuits of at most 5
 * logical qubits on allocations of at most 6 physical qubits.
 */
[[nodiscard]] std::size_t optimal_route(const Circuit& c,
                                        const CouplingGraph& g,
                                        const std::vector<Qubit>& allocation,
                                        const Layout& layout);

/**
 * Percent increase in CNOT count over the baseline:
 * 100 * (test - baseline) / baseline. Throws std::invalid_argument when
 * the baseline count is zero.
 */
[[nodiscard]] double swap_overhead(std::size_t test_cnots,
                                   std::size_t baseline_cnots);

void to_json(nlohmann::json& j, const RoutingResult& r);

}  // namespace mtcsim
