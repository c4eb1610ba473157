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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mtcsim/circuit.hpp"
#include "mtcsim/hardware.hpp"

namespace mtcsim {

enum class PriorityLevel { High, Medium, Low };

[[nodiscard]] const char* priority_name(PriorityLevel level);

/**
 * A queued program: a circuit plus the submitting user, the user's
 * normalized usage score and a monotone arrival index. The priority level
 * is assigned by partition_priority_groups, never by the user. `solo`
 * marks jobs an isolate response forces to run alone.
 */
struct Job {
  std::string id;
  std::string user;
  Circuit circuit{1};
  double usage_score = 0.0;
  std::uint64_t arrival_index = 0;
  PriorityLevel priority = PriorityLevel::Low;
  bool solo = false;
};

struct BatchEntry {
  std::string job_id;
  std::vector<Qubit> allocation;
};

/// One hardware run: jobs with pairwise-disjoint connected allocations.
struct Batch {
  std::vector<BatchEntry> entries;

  [[nodiscard]] bool contains(const std::string& job_id) const;
  [[nodiscard]] const std::vector<Qubit>* allocation_of(
      const std::string& job_id) const;
};

struct SchedulerConfig {
  /// Relative tolerance for depth comparability.
  double depth_tolerance = 0.2;
  /// Connected-subset budget before allocation search falls back to
  /// greedy growth.
  std::size_t enumeration_cap = 20000;
};

/**
 * Fair-share queue order: stable ascending sort by usage score, FIFO by
 * arrival index within equal scores.
 */
[[nodiscard]] std::vector<Job> fair_share_order(std::vector<Job> jobs);

struct GroupSizes {
  std::size_t high = 0;
  std::size_t medium = 0;
  std::size_t low = 0;

  bool operator==(const GroupSizes&) const = default;
};

/**
 * Splits a fair-share-ordered queue into three contiguous priority groups
 * of sizes ceil(n/3), ceil((n - high)/2) and the remainder, front of the
 * queue first, and stamps each job's priority level.
 */
GroupSizes partition_priority_groups(std::vector<Job>& ordered);

/// |depth(a) - depth(b)| <= tol * max(depth(a), depth(b)), boundary inclusive.
[[nodiscard]] bool depth_comparable(const Circuit& a, const Circuit& b,
                                    double tol = 0.2);

/**
 * Chooses a connected size-|circuit| allocation among `available`.
 *
 * High and medium priority take the densest subset (most induced edges,
 * ties toward the lexicographically first subset); low priority takes the
 * least dense one (ties toward the lexicographically last subset). When
 * the connected-subset enumeration exceeds `enumeration_cap` candidates,
 * the search falls back to greedy growth: starting from the free qubit of
 * highest induced degree, repeatedly add the neighboring free qubit with
 * the most (fewest, for low priority) edges into the grown set, breaking
 * ties by higher induced degree and then by smaller index. Returns nullopt
 * when no connected subset of the required size exists.
 */
[[nodiscard]] std::optional<std::vector<Qubit>> allocate_qubits(
    const Circuit& c, const CouplingGraph& g,
    const std::vector<Qubit>& available, PriorityLevel rank,
    std::size_t enumeration_cap = 20000);

struct SelectResult {
  Batch batch;
  /// Jobs that cannot run even on idle hardware; removed from the queue.
  std::vector<Job> rejected;
};

/**
 * Forms the next parallel batch from a fair-share-ordered, grouped queue.
 *
 * The batch is seeded with the highest-priority allocatable job; the rest
 * of the queue is walked group by group, admitting jobs whose depth is
 * comparable to the seed's and for which a connected allocation exists
 * among the qubits still free. When several same-priority candidates
 * contend for the same allocation, the highest priority metric wins.
 * Admitted jobs are removed from the queue. A solo-flagged seed forms a
 * single-job batch, and solo jobs are never co-admitted.
 */
[[nodiscard]] SelectResult select_batch(std::vector<Job>& queue,
                                        const CouplingGraph& g,
                                        const SchedulerConfig& cfg = {});

/**
 * Closes the fair-share loop after a batch executes: each executing user's
 * usage score grows by their share of the batch cost, and the scores of
 * users with pending jobs are renormalized to sum to 1.
 */
void update_usage(std::vector<Job>& queue,
                  const std::vector<std::pair<std::string, double>>&
                      executed_user_costs);

void to_json(nlohmann::json& j, const Batch& b);
void to_json(nlohmann::json& j, const Job& job);
void from_json(const nlohmann::json& j, Job& job);

}  // namespace mtcsim
