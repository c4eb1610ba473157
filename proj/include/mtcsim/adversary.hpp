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
#include <string>
#include <vector>

#include "json.hpp"

#include "mtcsim/circuit.hpp"
#include "mtcsim/hardware.hpp"
#include "mtcsim/router.hpp"
#include "mtcsim/scheduler.hpp"

namespace mtcsim {

/**
 * A SWAP-injection attack: the target qubits the adversary wants denied to
 * its victim, and the flood of queue jobs that realizes the denial through
 * the scheduler's own allocation preferences.
 */
struct AttackPlan {
  /// Physical qubits the attack aims to occupy, ascending.
  std::vector<Qubit> target_qubits;
  std::vector<Job> flood_jobs;
  QualityWeights weights;
  RankDirection direction = RankDirection::Ascending;
};

/**
 * The first k qubits of the quality ranking, returned ascending. With the
 * ascending direction these are the best-connected, lowest-error qubits —
 * the ones whose loss hurts a co-tenant the most.
 *
 * Requires 1 <= k < num_qubits; k = 0 or k >= num_qubits throws
 * std::invalid_argument (a flood that owns the whole device denies service
 * instead of degrading it).
 */
[[nodiscard]] std::vector<Qubit> select_target_qubits(const CouplingGraph& g,
                                                      const Calibration& cal,
                                                      const QualityWeights& w,
                                                      std::size_t k,
                                                      RankDirection direction);

/**
 * Builds the flood: `tiers` jobs per usage tier (three tiers), all from
 * `user`, cycling qubit counts over the multi-qubit subset sizes of
 * `targets` (2..|targets|, or just 1 for a single target) and circuit
 * depths over depth_menu (tier t draws depth_menu[t mod |menu|]).
 *
 * Multi-qubit flood circuits are generated with a paced 0.9 two-qubit
 * fraction, so every job's priority metric is >= 0.8. Usage scores are
 * staggered at 0.0 / 0.5 / 1.0 plus a small per-job offset, which spreads
 * the flood across all three priority groups once the queue is
 * fair-share-ordered. Arrival indices run 0..3*tiers-1; callers merging
 * the flood into a live queue should re-stamp them.
 *
 * Deterministic: same arguments, same job list.
 */
[[nodiscard]] std::vector<Job> generate_kitchen_sink_jobs(
    const std::vector<Qubit>& targets, std::size_t tiers,
    const std::vector<std::size_t>& depth_menu, std::uint64_t seed,
    const std::string& user = "flood");

/**
 * Convenience planner: quality-ranked targets (default k = ceil(n/10))
 * plus a kitchen-sink flood sized to them.
 */
[[nodiscard]] AttackPlan plan_attack(const CouplingGraph& g,
                                     const Calibration& cal,
                                     const QualityWeights& w,
                                     RankDirection direction, std::size_t k,
                                     std::size_t tiers,
                                     const std::vector<std::size_t>& depth_menu,
                                     std::uint64_t seed);

/// Victim workload shape; one circuit is drawn per trial seed.
struct VictimSpec {
  std::size_t num_qubits = 6;
  std::size_t num_gates = 120;
  double two_qubit_fraction = 0.5;
};

enum class AttackMode {
  /// Target qubits are simply withheld from the victim's free pool, as if
  /// the adversary's programs were already running on them.
  Hold,
  /// The flood jobs and the victim contend inside the scheduler; the
  /// victim's granted allocation comes out of its batch.
  Flood,
};

struct ImpactOptions {
  AttackMode mode = AttackMode::Flood;
  /// Victim queue identity; usage 0.5005 drops the victim into the middle
  /// of the staggered flood, the position the attack is shaped around.
  std::string victim_user = "victim";
  double victim_usage = 0.5005;
  SchedulerConfig scheduler;
};

struct ImpactRow {
  std::uint64_t seed = 0;
  bool denied = false;
  std::size_t swaps_baseline = 0;
  std::size_t swaps_attack = 0;
  std::size_t cnot_baseline = 0;
  std::size_t cnot_attack = 0;
  /// swap_overhead(cnot_attack, cnot_baseline); 0 when denied.
  double overhead_pct = 0.0;
  std::vector<Qubit> allocation_baseline;
  std::vector<Qubit> allocation_attack;
  /// Every target qubit was held by a flood job (or withheld) when the
  /// victim's allocation was granted.
  bool flood_succeeded = false;
};

struct ImpactAggregates {
  double mean_overhead = 0.0;
  double median_overhead = 0.0;
  double max_overhead = 0.0;
  std::size_t denied = 0;
};

struct ImpactReport {
  std::vector<ImpactRow> rows;
  ImpactAggregates aggregates;
};

/// Recomputes aggregates (over non-denied rows) from the rows.
[[nodiscard]] ImpactAggregates aggregate_impact(
    const std::vector<ImpactRow>& rows);

/**
 * Measures the attack on a victim workload, one trial per seed.
 *
 * Each trial draws a fresh victim circuit from `victim` with the trial
 * seed, routes its baseline arm (victim alone in the queue, full device)
 * and its attack arm, and reports CNOT counts plus the SWAP overhead of
 * attack over baseline. Both arms route with the trial seed, so an empty
 * flood reproduces the baseline bit for bit.
 *
 * Flood mode runs the scheduler to a fixed point: batches are selected
 * and retired until the victim's batch appears. A victim that cannot be
 * placed even on idle hardware is recorded as denied, never thrown.
 * Throws std::invalid_argument when the victim cannot fit the device with
 * the targets removed (the attack would be plain denial of service).
 *
 * Rows come back ordered by seed regardless of evaluation order.
 */
[[nodiscard]] ImpactReport measure_attack_impact(
    const VictimSpec& victim, const CouplingGraph& g, const Calibration& cal,
    const AttackPlan& plan, const ImpactOptions& options,
    const std::vector<std::uint64_t>& seeds);

void to_json(nlohmann::json& j, const ImpactRow& r);
void to_json(nlohmann::json& j, const ImpactReport& r);

}  // namespace mtcsim
