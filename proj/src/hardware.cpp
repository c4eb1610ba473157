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

#include "mtcsim/hardware.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mtcsim {

CouplingGraph::CouplingGraph(std::size_t num_qubits,
                             const std::vector<Edge>& edges)
    : num_qubits_(num_qubits), adjacency_(num_qubits) {
  for (const auto& [a, b] : edges) {
    if (a == b) {
      throw std::invalid_argument("coupling edge must not be a self-loop");
    }
    if (a >= num_qubits || b >= num_qubits) {
      throw std::out_of_range("coupling edge endpoint out of range");
    }
    edges_.push_back(make_edge(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
  }
}

const std::vector<Qubit>& CouplingGraph::neighbors(Qubit q) const {
  if (q >= num_qubits_) {
    throw std::out_of_range("qubit index out of range");
  }
  return adjacency_[q];
}

bool CouplingGraph::has_edge(Qubit a, Qubit b) const {
  if (a >= num_qubits_ || b >= num_qubits_) {
    return false;
  }
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::size_t CouplingGraph::degree(Qubit q) const { return neighbors(q).size(); }

CouplingGraph CouplingGraph::line5() {
  return CouplingGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
}

CouplingGraph CouplingGraph::grid20() {
  // 4 rows x 5 columns, nearest-neighbor couplings.
  std::vector<Edge> edges;
  const std::size_t rows = 4;
  const std::size_t cols = 5;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto q = static_cast<Qubit>(r * cols + c);
      if (c + 1 < cols) {
        edges.push_back(make_edge(q, q + 1));
      }
      if (r + 1 < rows) {
        edges.push_back(make_edge(q, q + static_cast<Qubit>(cols)));
      }
    }
  }
  return CouplingGraph(rows * cols, edges);
}

CouplingGraph CouplingGraph::preset(const std::string& name) {
  if (name == "line5") {
    return line5();
  }
  if (name == "grid20") {
    return grid20();
  }
  throw std::invalid_argument("unknown coupling preset '" + name + "'");
}

void Calibration::validate(const CouplingGraph& g) const {
  if (readout_error.size() != g.num_qubits()) {
    throw std::invalid_argument("calibration misses readout-error entries");
  }
  for (const double re : readout_error) {
    if (re < 0.0 || re > 1.0) {
      throw std::invalid_argument("readout error outside [0, 1]");
    }
  }
  for (const Edge& e : g.edges()) {
    const auto it = connection_error.find(e);
    if (it == connection_error.end()) {
      throw std::invalid_argument("calibration misses a connection-error entry");
    }
    if (it->second < 0.0 || it->second > 1.0) {
      throw std::invalid_argument("connection error outside [0, 1]");
    }
  }
}

double Calibration::edge_error(Qubit a, Qubit b) const {
  const auto it = connection_error.find(make_edge(a, b));
  if (it == connection_error.end()) {
    throw std::out_of_range("no connection-error entry for edge");
  }
  return it->second;
}

double Calibration::mean_connection_error(const CouplingGraph& g,
                                          Qubit q) const {
  const auto& nbrs = g.neighbors(q);
  if (nbrs.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (const Qubit n : nbrs) {
    sum += edge_error(q, n);
  }
  return sum / static_cast<double>(nbrs.size());
}

Calibration Calibration::synthetic(const CouplingGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ce(0.005, 0.05);
  std::uniform_real_distribution<double> re(0.01, 0.05);
  Calibration cal;
  for (const Edge& e : g.edges()) {
    cal.connection_error[e] = ce(rng);
  }
  cal.readout_error.resize(g.num_qubits());
  for (auto& value : cal.readout_error) {
    value = re(rng);
  }
  return cal;
}

double qubit_quality(const CouplingGraph& g, const Calibration& cal, Qubit q,
                     const QualityWeights& w) {
  if (w.w1 < 0.0 || w.w2 < 0.0 || w.w3 < 0.0) {
    throw std::invalid_argument("quality weights must be non-negative");
  }
  const std::size_t dc = g.degree(q);
  double quality = 0.0;
  if (w.w1 > 0.0) {
    if (dc == 0) {
      throw std::domain_error("undefined 1/DC");
    }
    quality += w.w1 / static_cast<double>(dc);
  }
  if (w.w2 > 0.0) {
    quality += w.w2 * cal.mean_connection_error(g, q);
  }
  if (w.w3 > 0.0) {
    if (q >= cal.readout_error.size()) {
      throw std::out_of_range("no readout-error entry for qubit");
    }
    quality += w.w3 * cal.readout_error[q];
  }
  return quality;
}

std::vector<Qubit> rank_qubits_by_quality(const CouplingGraph& g,
                                          const Calibration& cal,
                                          const QualityWeights& w,
                                          RankDirection direction) {
  std::vector<std::pair<double, Qubit>> scored;
  scored.reserve(g.num_qubits());
  for (Qubit q = 0; q < g.num_qubits(); ++q) {
    scored.emplace_back(qubit_quality(g, cal, q, w), q);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [direction](const auto& lhs, const auto& rhs) {
                     if (lhs.first != rhs.first) {
                       return direction == RankDirection::Ascending
                                  ? lhs.first < rhs.first
                                  : lhs.first > rhs.first;
                     }
                     return lhs.second < rhs.second;
                   });
  std::vector<Qubit> order;
  order.reserve(scored.size());
  for (const auto& [quality, q] : scored) {
    order.push_back(q);
  }
  return order;
}

namespace {

constexpr std::size_t kMaskLimit = 64;

void require_mask_support(const CouplingGraph& g) {
  if (g.num_qubits() > kMaskLimit) {
    throw std::invalid_argument(
        "allocation search supports at most 64 qubits");
  }
}

std::vector<std::uint64_t> adjacency_masks(const CouplingGraph& g) {
  std::vector<std::uint64_t> masks(g.num_qubits(), 0);
  for (const auto& [a, b] : g.edges()) {
    masks[a] |= std::uint64_t{1} << b;
    masks[b] |= std::uint64_t{1} << a;
  }
  return masks;
}

bool mask_connected(std::uint64_t subset,
                    const std::vector<std::uint64_t>& adj) {
  if (subset == 0) {
    return false;
  }
  const auto first = static_cast<std::size_t>(std::countr_zero(subset));
  std::uint64_t reached = std::uint64_t{1} << first;
  std::uint64_t frontier = reached;
  while (frontier != 0) {
    std::uint64_t next = 0;
    std::uint64_t scan = frontier;
    while (scan != 0) {
      const auto q = static_cast<std::size_t>(std::countr_zero(scan));
      scan &= scan - 1;
      next |= adj[q] & subset;
    }
    frontier = next & ~reached;
    reached |= next;
  }
  return reached == subset;
}

// Walks size-k combinations of `available` in lexicographic order, calling
// the visitor for each connected one. Returns false if the visitor stopped
// the walk.
bool for_each_connected(const CouplingGraph& g, std::size_t k,
                        const std::vector<Qubit>& available,
                        const std::function<bool(const std::vector<Qubit>&,
                                                 std::uint64_t)>& visit) {
  require_mask_support(g);
  if (k == 0) {
    throw std::invalid_argument("allocation size must be at least 1");
  }
  std::vector<Qubit> pool = available;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (const Qubit q : pool) {
    if (q >= g.num_qubits()) {
      throw std::out_of_range("available qubit out of range");
    }
  }
  if (k > pool.size()) {
    return true;
  }

  const auto adj = adjacency_masks(g);
  std::vector<std::size_t> choice(k);
  std::iota(choice.begin(), choice.end(), 0);
  std::vector<Qubit> subset(k);
  while (true) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < k; ++i) {
      subset[i] = pool[choice[i]];
      mask |= std::uint64_t{1} << subset[i];
    }
    if (mask_connected(mask, adj) && !visit(subset, mask)) {
      return false;
    }
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (choice[i] != i + pool.size() - k) {
        ++choice[i];
        for (std::size_t j = i + 1; j < k; ++j) {
          choice[j] = choice[j - 1] + 1;
        }
        break;
      }
      if (i == 0) {
        return true;
      }
    }
  }
}

}  // namespace

bool is_connected_subset(const CouplingGraph& g,
                         const std::vector<Qubit>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("subset must be nonempty");
  }
  for (const Qubit q : subset) {
    if (q >= g.num_qubits()) {
      throw std::out_of_range("subset member out of range");
    }
  }
  // BFS restricted to the subset.
  std::vector<Qubit> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<bool> in_subset(g.num_qubits(), false);
  for (const Qubit q : sorted) {
    in_subset[q] = true;
  }
  std::vector<Qubit> stack = {sorted.front()};
  std::vector<bool> seen(g.num_qubits(), false);
  seen[sorted.front()] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Qubit q = stack.back();
    stack.pop_back();
    for (const Qubit n : g.neighbors(q)) {
      if (in_subset[n] && !seen[n]) {
        seen[n] = true;
        ++reached;
        stack.push_back(n);
      }
    }
  }
  return reached == sorted.size();
}

std::vector<std::vector<Qubit>> enumerate_connected_allocations(
    const CouplingGraph& g, std::size_t k,
    const std::vector<Qubit>& available) {
  std::vector<std::vector<Qubit>> result;
  for_each_connected(g, k, available,
                     [&result](const std::vector<Qubit>& subset,
                               std::uint64_t /*mask*/) {
                       result.push_back(subset);
                       return true;
                     });
  return result;
}

std::optional<std::vector<std::vector<Qubit>>>
enumerate_connected_allocations_capped(const CouplingGraph& g, std::size_t k,
                                       const std::vector<Qubit>& available,
                                       std::size_t cap) {
  std::vector<std::vector<Qubit>> result;
  const bool completed = for_each_connected(
      g, k, available,
      [&result, cap](const std::vector<Qubit>& subset, std::uint64_t /*mask*/) {
        if (result.size() >= cap) {
          return false;
        }
        result.push_back(subset);
        return true;
      });
  if (!completed) {
    return std::nullopt;
  }
  return result;
}

std::size_t allocation_density(const CouplingGraph& g,
                               const std::vector<Qubit>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("subset must be nonempty");
  }
  std::vector<bool> in_subset(g.num_qubits(), false);
  for (const Qubit q : subset) {
    if (q >= g.num_qubits()) {
      throw std::out_of_range("subset member out of range");
    }
    in_subset[q] = true;
  }
  std::size_t count = 0;
  for (const auto& [a, b] : g.edges()) {
    if (in_subset[a] && in_subset[b]) {
      ++count;
    }
  }
  return count;
}

std::size_t allocation_spread(const CouplingGraph& g,
                              const std::vector<Qubit>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("subset must be nonempty");
  }
  std::vector<bool> in_subset(g.num_qubits(), false);
  for (const Qubit q : subset) {
    if (q >= g.num_qubits()) {
      throw std::out_of_range("subset member out of range");
    }
    in_subset[q] = true;
  }
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  for (const Qubit start : subset) {
    std::vector<std::size_t> dist(g.num_qubits(), kUnreached);
    dist[start] = 0;
    std::vector<Qubit> frontier = {start};
    while (!frontier.empty()) {
      std::vector<Qubit> next;
      for (const Qubit q : frontier) {
        for (const Qubit n : g.neighbors(q)) {
          if (in_subset[n] && dist[n] == kUnreached) {
            dist[n] = dist[q] + 1;
            next.push_back(n);
          }
        }
      }
      frontier = std::move(next);
    }
    for (const Qubit q : subset) {
      if (dist[q] == kUnreached) {
        throw std::invalid_argument("subset must be connected");
      }
      total += dist[q];
    }
  }
  return total / 2;  // every unordered pair was counted from both ends
}

namespace {

double mean_induced_edge_error(const CouplingGraph& g, const Calibration& cal,
                               const std::vector<Qubit>& subset) {
  std::vector<bool> in_subset(g.num_qubits(), false);
  for (const Qubit q : subset) {
    in_subset[q] = true;
  }
  double sum = 0.0;
  std::size_t edges = 0;
  for (const auto& [a, b] : g.edges()) {
    if (in_subset[a] && in_subset[b]) {
      sum += cal.edge_error(a, b);
      ++edges;
    }
  }
  return edges == 0 ? 0.0 : sum / static_cast<double>(edges);
}

std::optional<std::vector<Qubit>> extreme_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    const Calibration* cal, bool densest) {
  std::optional<std::vector<Qubit>> best;
  std::size_t best_density = 0;
  std::size_t best_spread = 0;
  double best_ce = 0.0;
  for_each_connected(
      g, k, available,
      [&](const std::vector<Qubit>& subset, std::uint64_t /*mask*/) {
        const std::size_t density = allocation_density(g, subset);
        if (densest) {
          const double ce =
              cal != nullptr ? mean_induced_edge_error(g, *cal, subset) : 0.0;
          bool better = false;
          if (!best) {
            better = true;
          } else if (density != best_density) {
            better = density > best_density;
          } else if (cal != nullptr && ce != best_ce) {
            better = ce < best_ce;
          }
          // The walk is lexicographic, so keeping the incumbent on a full
          // tie selects the lexicographically first subset.
          if (better) {
            best = subset;
            best_density = density;
            best_ce = ce;
          }
          return true;
        }
        if (best && density > best_density) {
          return true;
        }
        const std::size_t spread = allocation_spread(g, subset);
        const double ce =
            cal != nullptr ? mean_induced_edge_error(g, *cal, subset) : 0.0;
        bool better = false;
        if (!best || density < best_density) {
          better = true;
        } else if (spread != best_spread) {
          better = spread < best_spread;
        } else if (cal != nullptr && ce != best_ce) {
          better = ce > best_ce;
        }
        if (better) {
          best = subset;
          best_density = density;
          best_spread = spread;
          best_ce = ce;
        }
        return true;
      });
  return best;
}

}  // namespace

std::optional<std::vector<Qubit>> densest_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    const Calibration* cal) {
  return extreme_allocation(g, k, available, cal, /*densest=*/true);
}

std::optional<std::vector<Qubit>> sparsest_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    const Calibration* cal) {
  return extreme_allocation(g, k, available, cal, /*densest=*/false);
}

std::vector<Qubit> all_qubits(const CouplingGraph& g) {
  std::vector<Qubit> qubits(g.num_qubits());
  std::iota(qubits.begin(), qubits.end(), 0);
  return qubits;
}

std::pair<CouplingGraph, Calibration> load_coupling_json(
    const nlohmann::json& j, std::uint64_t synthetic_seed) {
  const auto num_qubits = j.at("num_qubits").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back(make_edge(e.at(0).get<Qubit>(), e.at(1).get<Qubit>()));
  }
  CouplingGraph graph(num_qubits, edges);

  Calibration cal = Calibration::synthetic(graph, synthetic_seed);
  if (j.contains("connection_error")) {
    cal.connection_error.clear();
    for (const auto& [key, value] : j.at("connection_error").items()) {
      const auto dash = key.find('-');
      if (dash == std::string::npos) {
        throw std::invalid_argument("connection_error key must be 'a-b'");
      }
      const auto a = static_cast<Qubit>(std::stoul(key.substr(0, dash)));
      const auto b = static_cast<Qubit>(std::stoul(key.substr(dash + 1)));
      cal.connection_error[make_edge(a, b)] = value.get<double>();
    }
  }
  if (j.contains("readout_error")) {
    cal.readout_error = j.at("readout_error").get<std::vector<double>>();
  }
  cal.validate(graph);
  return {std::move(graph), std::move(cal)};
}

std::pair<CouplingGraph, Calibration> resolve_coupling(
    const std::string& preset_or_path, std::uint64_t synthetic_seed) {
  if (preset_or_path == "line5" || preset_or_path == "grid20") {
    CouplingGraph graph = CouplingGraph::preset(preset_or_path);
    Calibration cal = Calibration::synthetic(graph, synthetic_seed);
    return {std::move(graph), std::move(cal)};
  }
  std::ifstream in(preset_or_path);
  if (!in) {
    throw std::invalid_argument("cannot open coupling file '" + preset_or_path +
                                "'");
  }
  nlohmann::json j;
  in >> j;
  return load_coupling_json(j, synthetic_seed);
}

}  // namespace mtcsim
