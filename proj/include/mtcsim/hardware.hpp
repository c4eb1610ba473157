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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mtcsim/circuit.hpp"

namespace mtcsim {

/// Unordered physical-qubit pair, stored with the smaller index first.
using Edge = std::pair<Qubit, Qubit>;

[[nodiscard]] constexpr Edge make_edge(Qubit a, Qubit b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/**
 * Physical qubit adjacency. Edges are undirected, self-loop free, and
 * deduplicated; the graph is immutable after construction and safe for
 * shared concurrent reads.
 */
class CouplingGraph {
public:
  CouplingGraph(std::size_t num_qubits, const std::vector<Edge>& edges);

  [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept {
    return edges_;
  }
  [[nodiscard]] const std::vector<Qubit>& neighbors(Qubit q) const;
  [[nodiscard]] bool has_edge(Qubit a, Qubit b) const;

  /// Number of incident edges. Throws std::out_of_range for a bad index.
  [[nodiscard]] std::size_t degree(Qubit q) const;

  /// 5-qubit T-shaped preset: 0-1, 1-2, 1-3, 3-4.
  [[nodiscard]] static CouplingGraph line5();
  /// 4x5 grid approximating a 20-qubit device.
  [[nodiscard]] static CouplingGraph grid20();
  /// Resolves "line5" or "grid20"; throws std::invalid_argument otherwise.
  [[nodiscard]] static CouplingGraph preset(const std::string& name);

private:
  std::size_t num_qubits_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Qubit>> adjacency_;
};

/**
 * Per-edge connection error (CE) and per-qubit readout error (RE),
 * probabilities in [0, 1]. Every edge and qubit of the graph being
 * described must have an entry; validate() enforces that.
 */
struct Calibration {
  std::map<Edge, double> connection_error;
  std::vector<double> readout_error;

  void validate(const CouplingGraph& g) const;

  [[nodiscard]] double edge_error(Qubit a, Qubit b) const;
  /// Mean CE over the qubit's incident edges; 0 for an isolated qubit.
  [[nodiscard]] double mean_connection_error(const CouplingGraph& g,
                                             Qubit q) const;

  /// Seeded synthetic data: CE ~ U[0.005, 0.05], RE ~ U[0.01, 0.05].
  [[nodiscard]] static Calibration synthetic(const CouplingGraph& g,
                                             std::uint64_t seed);
};

/// Weights of the qubit-quality factors; all must be non-negative.
struct QualityWeights {
  double w1 = 1.0;
  double w2 = 1.0;
  double w3 = 1.0;
};

/**
 * Qubit quality Q = (1/DC)*w1 + CE_q*w2 + RE_q*w3, where DC is the degree,
 * CE_q the mean connection error over incident edges and RE_q the readout
 * error. Throws std::domain_error("undefined 1/DC") for an isolated qubit
 * when w1 > 0.
 */
[[nodiscard]] double qubit_quality(const CouplingGraph& g,
                                   const Calibration& cal, Qubit q,
                                   const QualityWeights& w);

enum class RankDirection { Ascending, Descending };

/// All qubits sorted stably by Q; ties break toward the smaller index.
[[nodiscard]] std::vector<Qubit> rank_qubits_by_quality(
    const CouplingGraph& g, const Calibration& cal, const QualityWeights& w,
    RankDirection direction);

/**
 * True iff the subgraph induced by `subset` is connected. The subset must
 * be nonempty and within range.
 */
[[nodiscard]] bool is_connected_subset(const CouplingGraph& g,
                                       const std::vector<Qubit>& subset);

/**
 * All size-k subsets of `available` whose induced subgraph is connected,
 * in lexicographic order. Empty result when none exist. Graphs are limited
 * to 64 qubits here (bitmask search).
 */
[[nodiscard]] std::vector<std::vector<Qubit>> enumerate_connected_allocations(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available);

/**
 * Like enumerate_connected_allocations but abandons the search and returns
 * nullopt once more than `cap` connected subsets have been found. The
 * scheduler uses this to bound allocation search.
 */
[[nodiscard]] std::optional<std::vector<std::vector<Qubit>>>
enumerate_connected_allocations_capped(const CouplingGraph& g, std::size_t k,
                                       const std::vector<Qubit>& available,
                                       std::size_t cap);

/// Number of edges in the induced subgraph.
[[nodiscard]] std::size_t allocation_density(const CouplingGraph& g,
                                             const std::vector<Qubit>& subset);

/**
 * Sum of shortest-path distances over all unordered qubit pairs, measured
 * inside the induced subgraph. Lower means more compact. Throws when the
 * subset is not connected (some pair would have no path).
 */
[[nodiscard]] std::size_t allocation_spread(const CouplingGraph& g,
                                            const std::vector<Qubit>& subset);

/**
 * Most densely connected size-k allocation within `available`. Ties break
 * by lower mean CE over induced edges (when calibration is given), then by
 * lexicographically first subset. Returns nullopt when no connected subset
 * of that size exists.
 */
[[nodiscard]] std::optional<std::vector<Qubit>> densest_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    const Calibration* cal = nullptr);

/**
 * Least densely connected size-k allocation. Ties break by the most
 * compact subset (lowest allocation_spread), so the pick isolates missing
 * couplings from the confound of a stretched-out diameter; remaining ties
 * break by higher mean CE (when calibration is given), then by
 * lexicographically first subset.
 */
[[nodiscard]] std::optional<std::vector<Qubit>> sparsest_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    const Calibration* cal = nullptr);

/// Every qubit of the graph, ascending.
[[nodiscard]] std::vector<Qubit> all_qubits(const CouplingGraph& g);

// Coupling-map file schema:
//   {"num_qubits": n, "edges": [[a,b],...],
//    "connection_error": {"a-b": x, ...}, "readout_error": [...]}
// The two error fields are optional; absent ones are synthesized with the
// given seed.
[[nodiscard]] std::pair<CouplingGraph, Calibration> load_coupling_json(
    const nlohmann::json& j, std::uint64_t synthetic_seed = 0);

/// Resolves a preset name or a JSON file path to a graph plus calibration.
[[nodiscard]] std::pair<CouplingGraph, Calibration> resolve_coupling(
    const std::string& preset_or_path, std::uint64_t synthetic_seed = 0);

}  // namespace mtcsim
