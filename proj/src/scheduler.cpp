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

#include "mtcsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace mtcsim {

const char* priority_name(PriorityLevel level) {
  switch (level) {
  case PriorityLevel::High:
    return "high";
  case PriorityLevel::Medium:
    return "medium";
  case PriorityLevel::Low:
    return "low";
  }
  return "unknown";
}

bool Batch::contains(const std::string& job_id) const {
  return allocation_of(job_id) != nullptr;
}

const std::vector<Qubit>* Batch::allocation_of(const std::string& job_id) const {
  for (const BatchEntry& entry : entries) {
    if (entry.job_id == job_id) {
      return &entry.allocation;
    }
  }
  return nullptr;
}

std::vector<Job> fair_share_order(std::vector<Job> jobs) {
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& lhs, const Job& rhs) {
    if (lhs.usage_score != rhs.usage_score) {
      return lhs.usage_score < rhs.usage_score;
    }
    return lhs.arrival_index < rhs.arrival_index;
  });
  return jobs;
}

GroupSizes partition_priority_groups(std::vector<Job>& ordered) {
  const std::size_t n = ordered.size();
  GroupSizes sizes;
  sizes.high = (n + 2) / 3;
  sizes.medium = (n - sizes.high + 1) / 2;
  sizes.low = n - sizes.high - sizes.medium;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < sizes.high) {
      ordered[i].priority = PriorityLevel::High;
    } else if (i < sizes.high + sizes.medium) {
      ordered[i].priority = PriorityLevel::Medium;
    } else {
      ordered[i].priority = PriorityLevel::Low;
    }
  }
  return sizes;
}

bool depth_comparable(const Circuit& a, const Circuit& b, double tol) {
  if (tol < 0.0) {
    throw std::invalid_argument("depth tolerance must be non-negative");
  }
  const auto da = static_cast<double>(gate_stats(a).depth);
  const auto db = static_cast<double>(gate_stats(b).depth);
  return std::abs(da - db) <= tol * std::max(da, db);
}

namespace {

// Greedy fallback when enumeration blows the cap: grow a connected set
// from the best free seed, preferring dense growth for high/medium rank
// and sparse growth for low rank.
std::optional<std::vector<Qubit>> greedy_allocation(
    const CouplingGraph& g, std::size_t k, const std::vector<Qubit>& available,
    PriorityLevel rank) {
  std::vector<Qubit> pool = available;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  std::vector<std::size_t> induced_degree(g.num_qubits(), 0);
  std::vector<bool> in_pool(g.num_qubits(), false);
  for (const Qubit q : pool) {
    in_pool[q] = true;
  }
  for (const auto& [a, b] : g.edges()) {
    if (in_pool[a] && in_pool[b]) {
      ++induced_degree[a];
      ++induced_degree[b];
    }
  }

  std::vector<Qubit> seeds = pool;
  std::stable_sort(seeds.begin(), seeds.end(),
                   [&induced_degree](Qubit lhs, Qubit rhs) {
                     if (induced_degree[lhs] != induced_degree[rhs]) {
                       return induced_degree[lhs] > induced_degree[rhs];
                     }
                     return lhs < rhs;
                   });

  for (const Qubit seed : seeds) {
    std::vector<bool> chosen(g.num_qubits(), false);
    std::vector<Qubit> grown = {seed};
    chosen[seed] = true;
    while (grown.size() < k) {
      Qubit best = 0;
      bool found = false;
      std::size_t best_links = 0;
      for (const Qubit q : pool) {
        if (chosen[q]) {
          continue;
        }
        std::size_t links = 0;
        for (const Qubit n : g.neighbors(q)) {
          if (chosen[n]) {
            ++links;
          }
        }
        if (links == 0) {
          continue;
        }
        bool better = false;
        if (!found) {
          better = true;
        } else if (links != best_links) {
          better = rank == PriorityLevel::Low ? links < best_links
                                              : links > best_links;
        } else if (induced_degree[q] != induced_degree[best]) {
          better = induced_degree[q] > induced_degree[best];
        }
        if (better) {
          best = q;
          best_links = links;
          found = true;
        }
      }
      if (!found) {
        break;
      }
      grown.push_back(best);
      chosen[best] = true;
    }
    if (grown.size() == k) {
      std::sort(grown.begin(), grown.end());
      return grown;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Qubit>> allocate_qubits(
    const Circuit& c, const CouplingGraph& g,
    const std::vector<Qubit>& available, PriorityLevel rank,
    std::size_t enumeration_cap) {
  const std::size_t k = c.num_qubits();
  if (k > available.size()) {
    return std::nullopt;
  }
  const auto enumerated =
      enumerate_connected_allocations_capped(g, k, available, enumeration_cap);
  if (!enumerated) {
    return greedy_allocation(g, k, available, rank);
  }
  if (enumerated->empty()) {
    return std::nullopt;
  }
  const bool densest = rank != PriorityLevel::Low;
  const std::vector<Qubit>* best = nullptr;
  std::size_t best_density = 0;
  for (const auto& subset : *enumerated) {
    const std::size_t density = allocation_density(g, subset);
    bool better = false;
    if (best == nullptr) {
      better = true;
    } else if (density != best_density) {
      better = densest ? density > best_density : density < best_density;
    } else if (!densest) {
      // Lexicographically last subset wins the sparse tie.
      better = true;
    }
    if (better) {
      best = &subset;
      best_density = density;
    }
  }
  return *best;
}

namespace {

std::vector<Qubit> remove_qubits(const std::vector<Qubit>& from,
                                 const std::vector<Qubit>& taken) {
  std::vector<Qubit> out;
  for (const Qubit q : from) {
    if (std::find(taken.begin(), taken.end(), q) == taken.end()) {
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace

SelectResult select_batch(std::vector<Job>& queue, const CouplingGraph& g,
                          const SchedulerConfig& cfg) {
  SelectResult result;
  if (queue.empty()) {
    return result;
  }

  std::vector<Qubit> free = all_qubits(g);

  // Seed with the highest-priority job that can run at all; jobs that do
  // not fit even an idle device can never run and are rejected.
  std::optional<std::vector<Qubit>> seed_alloc;
  while (!queue.empty()) {
    seed_alloc = allocate_qubits(queue.front().circuit, g, free,
                                 queue.front().priority, cfg.enumeration_cap);
    if (seed_alloc) {
      break;
    }
    result.rejected.push_back(std::move(queue.front()));
    queue.erase(queue.begin());
  }
  if (!seed_alloc) {
    return result;
  }

  const Job seed = std::move(queue.front());
  queue.erase(queue.begin());
  result.batch.entries.push_back({seed.id, *seed_alloc});
  free = remove_qubits(free, *seed_alloc);
  if (seed.solo) {
    return result;
  }

  for (const PriorityLevel level :
       {PriorityLevel::High, PriorityLevel::Medium, PriorityLevel::Low}) {
    // Candidates at this level that could share the run with the seed.
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const Job& job = queue[i];
      if (job.priority == level && !job.solo && !job.circuit.empty() &&
          depth_comparable(job.circuit, seed.circuit, cfg.depth_tolerance)) {
        pending.push_back(i);
      }
    }
    while (!pending.empty()) {
      // Desired allocation of every pending candidate on the current free
      // set; same-allocation contenders resolve by priority metric.
      std::vector<std::optional<std::vector<Qubit>>> desired(pending.size());
      std::size_t first = pending.size();
      for (std::size_t i = 0; i < pending.size(); ++i) {
        desired[i] = allocate_qubits(queue[pending[i]].circuit, g, free, level,
                                     cfg.enumeration_cap);
        if (desired[i] && first == pending.size()) {
          first = i;
        }
      }
      if (first == pending.size()) {
        break;
      }
      std::size_t winner = first;
      double winner_pm = priority_metric(queue[pending[first]].circuit);
      for (std::size_t i = first + 1; i < pending.size(); ++i) {
        if (desired[i] && *desired[i] == *desired[first]) {
          const double pm = priority_metric(queue[pending[i]].circuit);
          if (pm > winner_pm) {
            winner = i;
            winner_pm = pm;
          }
        }
      }
      const std::size_t queue_index = pending[winner];
      result.batch.entries.push_back({queue[queue_index].id, *desired[winner]});
      free = remove_qubits(free, *desired[winner]);
      queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(queue_index));
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(winner));
      for (auto& index : pending) {
        if (index > queue_index) {
          --index;
        }
      }
    }
  }
  return result;
}

void update_usage(std::vector<Job>& queue,
                  const std::vector<std::pair<std::string, double>>&
                      executed_user_costs) {
  if (executed_user_costs.empty()) {
    return;
  }
  double total = 0.0;
  for (const auto& [user, cost] : executed_user_costs) {
    total += cost;
  }
  if (total <= 0.0) {
    return;
  }
  std::map<std::string, double> increment;
  for (const auto& [user, cost] : executed_user_costs) {
    increment[user] += cost / total;
  }

  // Current score per user with pending jobs, after the increment.
  std::map<std::string, double> score;
  for (const Job& job : queue) {
    score.emplace(job.user, job.usage_score);
  }
  for (auto& [user, value] : score) {
    const auto it = increment.find(user);
    if (it != increment.end()) {
      value += it->second;
    }
  }
  double sum = 0.0;
  for (const auto& [user, value] : score) {
    sum += value;
  }
  for (Job& job : queue) {
    double value = score.at(job.user);
    if (sum > 0.0) {
      value /= sum;
    }
    job.usage_score = value;
  }
}

void to_json(nlohmann::json& j, const Batch& b) {
  nlohmann::json entries = nlohmann::json::array();
  for (const BatchEntry& entry : b.entries) {
    entries.push_back(
        {{"job_id", entry.job_id}, {"allocation", entry.allocation}});
  }
  j = nlohmann::json{{"entries", std::move(entries)}};
}

void to_json(nlohmann::json& j, const Job& job) {
  j = nlohmann::json{{"id", job.id},
                     {"user", job.user},
                     {"usage", job.usage_score},
                     {"arrival_index", job.arrival_index},
                     {"priority", priority_name(job.priority)},
                     {"solo", job.solo},
                     {"circuit", job.circuit}};
}

void from_json(const nlohmann::json& j, Job& job) {
  job.id = j.at("id").get<std::string>();
  job.user = j.at("user").get<std::string>();
  job.usage_score = j.value("usage", 0.0);
  job.arrival_index = j.value("arrival_index", std::uint64_t{0});
  job.solo = j.value("solo", false);
  job.circuit = j.at("circuit").get<Circuit>();
}

}  // namespace mtcsim
