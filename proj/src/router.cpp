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

#include "mtcsim/router.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace mtcsim {

Layout::Layout(std::vector<Qubit> logical_to_physical)
    : logical_to_physical_(std::move(logical_to_physical)) {}

Qubit Layout::physical(Qubit logical) const {
  if (logical >= logical_to_physical_.size()) {
    throw std::out_of_range("logical qubit outside layout domain");
  }
  return logical_to_physical_[logical];
}

void Layout::validate(const Circuit& c,
                      const std::vector<Qubit>& allocation) const {
  if (logical_to_physical_.size() != c.num_qubits()) {
    throw std::invalid_argument("layout domain must match circuit size");
  }
  std::vector<Qubit> image = logical_to_physical_;
  std::sort(image.begin(), image.end());
  if (std::adjacent_find(image.begin(), image.end()) != image.end()) {
    throw std::invalid_argument("layout must be injective");
  }
  for (const Qubit p : image) {
    if (std::find(allocation.begin(), allocation.end(), p) ==
        allocation.end()) {
      throw std::invalid_argument("layout image must lie inside allocation");
    }
  }
}

namespace {

constexpr Qubit kUnoccupied = std::numeric_limits<Qubit>::max();

std::vector<Qubit> sorted_unique(std::vector<Qubit> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Allocation qubits reindexed 0..k-1 with their induced couplings and
// all-pairs shortest-path distances.
struct LocalGraph {
  std::vector<Qubit> to_global;
  std::vector<std::vector<Qubit>> adjacency;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> dist;

  [[nodiscard]] std::size_t size() const { return to_global.size(); }
  [[nodiscard]] bool adjacent(Qubit a, Qubit b) const {
    return dist[a][b] == 1;
  }
};

LocalGraph build_local_graph(const CouplingGraph& g,
                             const std::vector<Qubit>& allocation) {
  LocalGraph local;
  local.to_global = sorted_unique(allocation);
  const std::size_t k = local.to_global.size();
  if (k == 0) {
    throw std::invalid_argument("allocation must be nonempty");
  }
  std::vector<Qubit> to_local(g.num_qubits(), kUnoccupied);
  for (std::size_t i = 0; i < k; ++i) {
    const Qubit global = local.to_global[i];
    if (global >= g.num_qubits()) {
      throw std::out_of_range("allocation qubit out of range");
    }
    to_local[global] = static_cast<Qubit>(i);
  }
  local.adjacency.resize(k);
  for (const auto& [a, b] : g.edges()) {
    if (to_local[a] != kUnoccupied && to_local[b] != kUnoccupied) {
      local.adjacency[to_local[a]].push_back(to_local[b]);
      local.adjacency[to_local[b]].push_back(to_local[a]);
      local.edges.push_back(make_edge(to_local[a], to_local[b]));
    }
  }
  for (auto& nbrs : local.adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
  }
  std::sort(local.edges.begin(), local.edges.end());

  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  local.dist.assign(k, std::vector<std::size_t>(k, kInf));
  for (Qubit start = 0; start < k; ++start) {
    local.dist[start][start] = 0;
    std::deque<Qubit> frontier = {start};
    while (!frontier.empty()) {
      const Qubit q = frontier.front();
      frontier.pop_front();
      for (const Qubit n : local.adjacency[q]) {
        if (local.dist[start][n] == kInf) {
          local.dist[start][n] = local.dist[start][q] + 1;
          frontier.push_back(n);
        }
      }
    }
    for (Qubit other = 0; other < k; ++other) {
      if (local.dist[start][other] == kInf) {
        throw std::invalid_argument("allocation must be connected");
      }
    }
  }
  return local;
}

}  // namespace

Layout initial_layout(const Circuit& c, const CouplingGraph& g,
                      const std::vector<Qubit>& allocation) {
  const std::vector<Qubit> pool = sorted_unique(allocation);
  if (pool.size() < c.num_qubits()) {
    throw std::invalid_argument("allocation too small for circuit");
  }
  if (!is_connected_subset(g, pool)) {
    throw std::invalid_argument("allocation must be connected");
  }

  std::vector<std::size_t> interactions(c.num_qubits(), 0);
  for (const Gate& gate : c) {
    if (gate.is_two_qubit()) {
      ++interactions[gate.operand(0)];
      ++interactions[gate.operand(1)];
    }
  }
  std::vector<Qubit> logical_order(c.num_qubits());
  std::iota(logical_order.begin(), logical_order.end(), 0);
  std::stable_sort(logical_order.begin(), logical_order.end(),
                   [&interactions](Qubit lhs, Qubit rhs) {
                     if (interactions[lhs] != interactions[rhs]) {
                       return interactions[lhs] > interactions[rhs];
                     }
                     return lhs < rhs;
                   });

  std::vector<Qubit> physical_order = pool;
  std::vector<std::size_t> induced_degree(g.num_qubits(), 0);
  for (const auto& [a, b] : g.edges()) {
    const bool a_in = std::binary_search(pool.begin(), pool.end(), a);
    const bool b_in = std::binary_search(pool.begin(), pool.end(), b);
    if (a_in && b_in) {
      ++induced_degree[a];
      ++induced_degree[b];
    }
  }
  std::stable_sort(physical_order.begin(), physical_order.end(),
                   [&induced_degree](Qubit lhs, Qubit rhs) {
                     if (induced_degree[lhs] != induced_degree[rhs]) {
                       return induced_degree[lhs] > induced_degree[rhs];
                     }
                     return lhs < rhs;
                   });

  std::vector<Qubit> mapping(c.num_qubits());
  for (std::size_t i = 0; i < logical_order.size(); ++i) {
    mapping[logical_order[i]] = physical_order[i];
  }
  return Layout(std::move(mapping));
}

RoutingResult route(const Circuit& c, const CouplingGraph& g,
                    const std::vector<Qubit>& allocation, const Layout& layout,
                    std::uint64_t seed) {
  const LocalGraph local = build_local_graph(g, allocation);
  layout.validate(c, local.to_global);

  const std::size_t k = local.size();
  std::vector<Qubit> log_to_local(c.num_qubits());
  std::vector<Qubit> local_to_log(k, kUnoccupied);
  for (Qubit l = 0; l < c.num_qubits(); ++l) {
    const Qubit global = layout.physical(l);
    const auto it =
        std::lower_bound(local.to_global.begin(), local.to_global.end(), global);
    const auto idx = static_cast<Qubit>(it - local.to_global.begin());
    log_to_local[l] = idx;
    local_to_log[idx] = l;
  }

  std::mt19937_64 rng(seed);
  Circuit routed(g.num_qubits());
  std::size_t swaps_inserted = 0;
  Edge last_swap = {kUnoccupied, kUnoccupied};
  const auto& gates = c.gates();
  std::size_t head = 0;
  std::size_t swaps_since_commit = 0;
  const std::size_t thrash_limit = 2 * k * k + 8;

  const auto emit_swap = [&](Qubit u, Qubit v) {
    routed.add(Gate::swap(local.to_global[u], local.to_global[v]));
    const Qubit lu = local_to_log[u];
    const Qubit lv = local_to_log[v];
    local_to_log[u] = lv;
    local_to_log[v] = lu;
    if (lu != kUnoccupied) {
      log_to_local[lu] = v;
    }
    if (lv != kUnoccupied) {
      log_to_local[lv] = u;
    }
    ++swaps_inserted;
    last_swap = make_edge(u, v);
  };

  while (head < gates.size()) {
    const Gate& gate = gates[head];
    if (!gate.is_two_qubit()) {
      routed.add(Gate::one_qubit(gate.label(),
                                 local.to_global[log_to_local[gate.operand(0)]]));
      ++head;
      swaps_since_commit = 0;
      continue;
    }
    const Qubit pa = log_to_local[gate.operand(0)];
    const Qubit pb = log_to_local[gate.operand(1)];
    if (local.adjacent(pa, pb)) {
      const Qubit ga = local.to_global[pa];
      const Qubit gb = local.to_global[pb];
      routed.add(gate.kind() == GateKind::Cnot ? Gate::cnot(ga, gb)
                                               : Gate::swap(ga, gb));
      ++head;
      swaps_since_commit = 0;
      continue;
    }

    if (swaps_since_commit > thrash_limit) {
      // Escape hatch: walk the head gate together along a shortest path.
      Qubit from = pa;
      while (local.dist[from][pb] > 1) {
        for (const Qubit n : local.adjacency[from]) {
          if (local.dist[n][pb] == local.dist[from][pb] - 1) {
            emit_swap(from, n);
            from = n;
            break;
          }
        }
      }
      swaps_since_commit = 0;
      continue;
    }

    // Front layer: pending two-qubit gates whose operands are untouched by
    // earlier pending gates. 1q/2q gates alike mark their operands busy.
    std::vector<std::pair<Qubit, Qubit>> front;
    std::vector<std::pair<Qubit, Qubit>> lookahead;
    std::vector<bool> busy(c.num_qubits(), false);
    std::vector<bool> front_position(k, false);
    for (std::size_t i = head; i < gates.size(); ++i) {
      const Gate& pending = gates[i];
      if (pending.is_two_qubit()) {
        const Qubit a = pending.operand(0);
        const Qubit b = pending.operand(1);
        if (!busy[a] && !busy[b]) {
          front.emplace_back(log_to_local[a], log_to_local[b]);
          front_position[log_to_local[a]] = true;
          front_position[log_to_local[b]] = true;
        } else if (lookahead.size() < 20) {
          lookahead.emplace_back(log_to_local[a], log_to_local[b]);
        }
        busy[a] = true;
        busy[b] = true;
      } else {
        busy[pending.operand(0)] = true;
      }
    }

    std::vector<Edge> candidates;
    for (const Edge& e : local.edges) {
      if ((front_position[e.first] || front_position[e.second]) &&
          e != last_swap) {
        candidates.push_back(e);
      }
    }
    if (candidates.empty()) {
      // A blocked gate always exposes two disjoint incident edge sets, so
      // this is pure safety.
      candidates.push_back(last_swap);
    }

    const auto moved = [](Qubit p, const Edge& swap) {
      if (p == swap.first) {
        return swap.second;
      }
      if (p == swap.second) {
        return swap.first;
      }
      return p;
    };
    // Deltas are in [-2, 2] per gate pair, so the normalized front and
    // lookahead terms are each bounded by 2 and the head weight of 8
    // guarantees a swap that brings the blocking gate together always
    // outranks one that merely tidies the future. Gates commit in program
    // order, so head progress is the only progress there is; everything
    // else is a tie-break.
    constexpr double kHeadWeight = 8.0;
    constexpr double kLookaheadWeight = 0.5;
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<Edge> best;
    for (const Edge& cand : candidates) {
      const double head_delta =
          static_cast<double>(local.dist[pa][pb]) -
          static_cast<double>(local.dist[moved(pa, cand)][moved(pb, cand)]);
      double front_delta = 0.0;
      for (const auto& [fa, fb] : front) {
        front_delta +=
            static_cast<double>(local.dist[fa][fb]) -
            static_cast<double>(local.dist[moved(fa, cand)][moved(fb, cand)]);
      }
      double lookahead_delta = 0.0;
      for (const auto& [la, lb] : lookahead) {
        lookahead_delta +=
            static_cast<double>(local.dist[la][lb]) -
            static_cast<double>(local.dist[moved(la, cand)][moved(lb, cand)]);
      }
      double score = kHeadWeight * head_delta +
                     front_delta / static_cast<double>(front.size());
      if (!lookahead.empty()) {
        score += kLookaheadWeight * lookahead_delta /
                 static_cast<double>(lookahead.size());
      }
      if (score > best_score) {
        best_score = score;
        best = {cand};
      } else if (score == best_score) {
        best.push_back(cand);
      }
    }
    Edge chosen = best.front();
    if (best.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
      chosen = best[pick(rng)];
    }
    emit_swap(chosen.first, chosen.second);
    ++swaps_since_commit;
  }

  RoutingResult result;
  result.routed = std::move(routed);
  std::vector<Qubit> final_mapping(c.num_qubits());
  for (Qubit l = 0; l < c.num_qubits(); ++l) {
    final_mapping[l] = local.to_global[log_to_local[l]];
  }
  result.final_layout = Layout(std::move(final_mapping));
  result.swaps_inserted = swaps_inserted;
  const GateStats decomposed = gate_stats(decompose_swaps(result.routed));
  result.cnot_after_decomposition = decomposed.cnot;
  result.depth_after = decomposed.depth;
  return result;
}

std::size_t optimal_route(const Circuit& c, const CouplingGraph& g,
                          const std::vector<Qubit>& allocation,
                          const Layout& layout) {
  if (c.num_qubits() > 5 || sorted_unique(allocation).size() > 6) {
    throw std::invalid_argument("instance exceeds optimal-oracle size guard");
  }
  const LocalGraph local = build_local_graph(g, allocation);
  layout.validate(c, local.to_global);
  const std::size_t k = local.size();
  const auto& gates = c.gates();

  // Token vector: local position -> logical qubit (or empty).
  using Tokens = std::vector<std::int8_t>;
  constexpr std::int8_t kEmpty = -1;
  Tokens start(k, kEmpty);
  for (Qubit l = 0; l < c.num_qubits(); ++l) {
    const Qubit global = layout.physical(l);
    const auto it =
        std::lower_bound(local.to_global.begin(), local.to_global.end(), global);
    start[static_cast<std::size_t>(it - local.to_global.begin())] =
        static_cast<std::int8_t>(l);
  }

  const auto advance = [&](const Tokens& tokens, std::size_t ptr) {
    std::array<Qubit, 5> position{};
    for (std::size_t p = 0; p < k; ++p) {
      if (tokens[p] >= 0) {
        position[static_cast<std::size_t>(tokens[p])] = static_cast<Qubit>(p);
      }
    }
    while (ptr < gates.size()) {
      const Gate& gate = gates[ptr];
      if (gate.is_two_qubit() &&
          !local.adjacent(position[gate.operand(0)], position[gate.operand(1)])) {
        break;
      }
      ++ptr;
    }
    return ptr;
  };

  const auto encode = [&](const Tokens& tokens, std::size_t ptr) {
    std::uint64_t key = 0;
    for (std::size_t p = 0; p < k; ++p) {
      key = key * 7 + static_cast<std::uint64_t>(tokens[p] + 1);
    }
    return key | (static_cast<std::uint64_t>(ptr) << 20);
  };

  std::size_t ptr0 = advance(start, 0);
  if (ptr0 == gates.size()) {
    return 0;
  }
  std::unordered_set<std::uint64_t> seen = {encode(start, ptr0)};
  std::queue<std::pair<Tokens, std::size_t>> frontier;
  frontier.emplace(std::move(start), ptr0);
  std::size_t depth = 0;
  while (!frontier.empty()) {
    ++depth;
    for (std::size_t layer = frontier.size(); layer > 0; --layer) {
      auto [tokens, ptr] = std::move(frontier.front());
      frontier.pop();
      for (const auto& [u, v] : local.edges) {
        Tokens next = tokens;
        std::swap(next[u], next[v]);
        const std::size_t next_ptr = advance(next, ptr);
        if (next_ptr == gates.size()) {
          return depth;
        }
        const std::uint64_t key = encode(next, next_ptr);
        if (seen.insert(key).second) {
          frontier.emplace(std::move(next), next_ptr);
        }
      }
    }
  }
  throw std::logic_error("optimal_route search exhausted without a schedule");
}

double swap_overhead(std::size_t test_cnots, std::size_t baseline_cnots) {
  if (baseline_cnots == 0) {
    throw std::invalid_argument("undefined overhead over a zero baseline");
  }
  return 100.0 *
         (static_cast<double>(test_cnots) - static_cast<double>(baseline_cnots)) /
         static_cast<double>(baseline_cnots);
}

void to_json(nlohmann::json& j, const RoutingResult& r) {
  j = nlohmann::json{{"swaps_inserted", r.swaps_inserted},
                     {"cnot_after_decomposition", r.cnot_after_decomposition},
                     {"depth_after", r.depth_after},
                     {"final_layout", r.final_layout.mapping()},
                     {"routed", r.routed}};
}

}  // namespace mtcsim
