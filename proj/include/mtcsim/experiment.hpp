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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mtcsim/adversary.hpp"
#include "mtcsim/hardware.hpp"

namespace mtcsim {

/// Raised for invalid scenario files and corrupted report files.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedRange {
  std::uint64_t begin = 0;
  std::size_t count = 100;

  [[nodiscard]] std::vector<std::uint64_t> values() const;
};

struct AttackConfig {
  bool enabled = true;
  /// Quality-ranked target count handed to the planner.
  std::size_t targets = 5;
  std::size_t tiers = 3;
  std::vector<std::size_t> depth_menu = {54, 58, 62};
  /// Queue position of the victim relative to the staggered flood.
  double victim_usage = 0.5005;
  /// Batching laxity for the scheduled arms.
  double depth_tolerance = 0.3;
};

struct DefenseConfig {
  bool enabled = true;
  double nu = 0.1;
  std::uint64_t train_seed = 7;
  /// Size of the synthetic normal population the detector trains on.
  std::size_t corpus_normal = 100;
};

/**
 * Declarative experiment description. All randomness flows from
 * `calibration_seed` (hardware noise, attack planning, detector training)
 * and the trial `seeds` (victim circuits and routing), so re-running a
 * scenario file reproduces its reports byte for byte.
 */
struct Scenario {
  /// Preset name ("line5", "grid20") or a coupling-map JSON path.
  std::string coupling = "grid20";
  std::uint64_t calibration_seed = 1;
  VictimSpec victim;
  SeedRange seeds;

  /// Allocation sweep: explicit configurations, or empty for five derived
  /// ones graded from most to least compact. baseline_index designates the
  /// densest one.
  std::vector<std::vector<Qubit>> allocations;
  std::size_t baseline_index = 0;

  /// Complexity sweep: ascending victim gate counts.
  std::vector<std::size_t> gate_menu = {50, 100, 200, 300};

  /// Size sweep: inclusive victim qubit range.
  std::size_t qubit_min = 4;
  std::size_t qubit_max = 10;

  /// End-to-end runs contend through the scheduler instead of imposing
  /// allocations directly.
  bool scheduler_mediated = false;
  AttackConfig attack;
  DefenseConfig defense;
};

void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);

/// Parses and validates a scenario file; throws ScenarioError.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

struct SweepRow {
  std::string cell;
  std::uint64_t seed = 0;
  std::size_t cnot_baseline = 0;
  std::size_t cnot_test = 0;
  long long swaps_added = 0;
  double overhead_pct = 0.0;
};

struct CellAggregate {
  std::string cell;
  double mean_overhead = 0.0;
  double median_overhead = 0.0;
  double max_overhead = 0.0;
  double median_swaps_added = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<CellAggregate> aggregates;
};

/// Per-cell aggregates recomputed from rows, in first-appearance cell order.
[[nodiscard]] std::vector<CellAggregate> aggregate_sweep(
    const std::vector<SweepRow>& rows);

/**
 * Five allocation configurations of size k graded from most to least
 * compact: all connected size-k subsets are ordered by descending induced
 * edge count, then ascending total pairwise distance, then first subset,
 * and the list is sampled at its ends and quartiles. Duplicates collapse
 * when fewer than five distinct subsets exist.
 */
[[nodiscard]] std::vector<std::vector<Qubit>> derive_allocation_configs(
    const CouplingGraph& g, std::size_t k);

/**
 * Routes one victim circuit per seed on every allocation configuration
 * (same circuit, same routing seed and interaction-aware initial placement
 * across configurations) and reports each configuration's CNOT overhead
 * against the baseline configuration. Cells are "config1".."configN" in
 * input order.
 */
[[nodiscard]] SweepReport run_allocation_sweep(const Scenario& s);

/**
 * Sweeps the victim gate count over gate_menu, contrasting the least
 * compact connected allocation of the victim's size against the most
 * compact one. Cells are "gates<n>".
 */
[[nodiscard]] SweepReport run_complexity_sweep(const Scenario& s);

/**
 * Sweeps the victim size over [qubit_min, qubit_max], contrasting the
 * least compact connected allocation of each size against the most
 * compact one. Cells are "qubits<k>".
 */
[[nodiscard]] SweepReport run_size_sweep(const Scenario& s);

struct EndToEndRow {
  std::uint64_t seed = 0;
  double pre_overhead_pct = 0.0;
  double post_overhead_pct = 0.0;
  bool denied_pre = false;
  bool denied_post = false;
};

struct EndToEndReport {
  std::vector<EndToEndRow> rows;
  bool adversary_flagged = false;
  double adversary_score = 0.0;
  double pre_median = 0.0;
  double pre_max = 0.0;
  double post_median = 0.0;
  double post_max = 0.0;
};

/**
 * Full attack/defense loop: plan the flood, measure its impact through
 * the scheduler, detect the flooding user from a synthetic-normal-trained
 * anomaly model, isolate them, and measure again. With the attack
 * disabled both phases are overhead-free; with the defense disabled the
 * post phase equals the pre phase.
 */
[[nodiscard]] EndToEndReport run_end_to_end(const Scenario& s);

/// Shortest round-trippable decimal form of a double ("%.17g").
[[nodiscard]] std::string format_double(double value);

/**
 * Writes <name>.csv (rows) and <name>_aggregates.csv under dir, creating
 * it if needed. Rows are ordered by (cell appearance, seed); floats are
 * printed round-trippably, so identical reports serialize identically.
 */
void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& dir,
                     const std::string& name);

/**
 * Reads a report written by write_sweep_csv and verifies the stored
 * aggregates against recomputation from the rows; throws ScenarioError
 * on any mismatch.
 */
[[nodiscard]] SweepReport load_sweep_csv(const std::filesystem::path& dir,
                                         const std::string& name);

void write_end_to_end_csv(const EndToEndReport& report,
                          const std::filesystem::path& dir,
                          const std::string& name);

}  // namespace mtcsim
