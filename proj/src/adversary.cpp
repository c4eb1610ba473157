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

#include "mtcsim/adversary.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "mtcsim/parallel.hpp"

namespace mtcsim {

std::vector<Qubit> select_target_qubits(const CouplingGraph& g,
                                        const Calibration& cal,
                                        const QualityWeights& w, std::size_t k,
                                        RankDirection direction) {
  if (k == 0 || k >= g.num_qubits()) {
    throw std::invalid_argument(
        "target count must leave at least one qubit for the victim");
  }
  std::vector<Qubit> ranked = rank_qubits_by_quality(g, cal, w, direction);
  ranked.resize(k);
  std::sort(ranked.begin(), ranked.end());
  return ranked;
}

namespace {

const char* const kOneQubitMenu[] = {"h", "x", "y", "z", "s", "t"};

/**
 * Grows a circuit gate by gate until the requested depth is reached. The
 * two-qubit fraction is paced deterministically (a CNOT is emitted while
 * the running fraction stays below the request), so every prefix of a
 * 0.9-paced circuit keeps a priority metric of at least 0.9.
 */
Circuit circuit_with_depth(std::size_t num_qubits, std::size_t target_depth,
                           double two_qubit_fraction, std::mt19937_64& rng) {
  Circuit c(num_qubits);
  if (target_depth == 0) {
    return c;
  }
  std::vector<std::size_t> qubit_depth(num_qubits, 0);
  std::size_t depth = 0;
  std::size_t two_q = 0;
  std::uniform_int_distribution<std::size_t> pick_qubit(0, num_qubits - 1);
  std::uniform_int_distribution<std::size_t> pick_label(
      0, std::size(kOneQubitMenu) - 1);
  while (depth < target_depth) {
    const auto total = static_cast<double>(c.num_gates());
    if (num_qubits >= 2 &&
        static_cast<double>(two_q) < two_qubit_fraction * (total + 1.0)) {
      const auto a = static_cast<Qubit>(pick_qubit(rng));
      std::uniform_int_distribution<std::size_t> pick_other(0, num_qubits - 2);
      auto b = static_cast<Qubit>(pick_other(rng));
      if (b >= a) {
        ++b;
      }
      c.add(Gate::cnot(a, b));
      ++two_q;
      const std::size_t layer =
          std::max(qubit_depth[a], qubit_depth[b]) + 1;
      qubit_depth[a] = layer;
      qubit_depth[b] = layer;
      depth = std::max(depth, layer);
    } else {
      const std::size_t q = pick_qubit(rng);
      c.add(Gate::one_qubit(kOneQubitMenu[pick_label(rng)],
                            static_cast<Qubit>(q)));
      ++qubit_depth[q];
      depth = std::max(depth, qubit_depth[q]);
    }
  }
  return c;
}

}  // namespace

std::vector<Job> generate_kitchen_sink_jobs(
    const std::vector<Qubit>& targets, std::size_t tiers,
    const std::vector<std::size_t>& depth_menu, std::uint64_t seed,
    const std::string& user) {
  if (targets.empty()) {
    throw std::invalid_argument("flood needs at least one target qubit");
  }
  if (tiers == 0) {
    throw std::invalid_argument("tiers must be at least 1");
  }
  if (depth_menu.empty()) {
    throw std::invalid_argument("depth menu must be nonempty");
  }

  // Qubit counts cycle over the multi-qubit subset sizes of the target
  // set; a single target forces one-qubit jobs.
  std::vector<std::size_t> sizes;
  if (targets.size() == 1) {
    sizes.push_back(1);
  } else {
    for (std::size_t s = 2; s <= targets.size(); ++s) {
      sizes.push_back(s);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<Job> jobs;
  jobs.reserve(3 * tiers);
  for (std::size_t tier = 0; tier < 3; ++tier) {
    const std::size_t depth = depth_menu[tier % depth_menu.size()];
    for (std::size_t j = 0; j < tiers; ++j) {
      const std::size_t index = tier * tiers + j;
      const std::size_t width = sizes[index % sizes.size()];
      Job job;
      job.id = user + "-" + std::to_string(tier) + "-" + std::to_string(j);
      job.user = user;
      job.circuit = circuit_with_depth(width, depth, width >= 2 ? 0.9 : 0.0,
                                       rng);
      job.usage_score =
          0.5 * static_cast<double>(tier) + 1e-3 * static_cast<double>(j);
      job.arrival_index = index;
      jobs.push_back(std::move(job));
    }
  }
  return jobs;
}

AttackPlan plan_attack(const CouplingGraph& g, const Calibration& cal,
                       const QualityWeights& w, RankDirection direction,
                       std::size_t k, std::size_t tiers,
                       const std::vector<std::size_t>& depth_menu,
                       std::uint64_t seed) {
  if (k == 0) {
    k = (g.num_qubits() + 9) / 10;
  }
  AttackPlan plan;
  plan.weights = w;
  plan.direction = direction;
  plan.target_qubits = select_target_qubits(g, cal, w, k, direction);
  plan.flood_jobs =
      generate_kitchen_sink_jobs(plan.target_qubits, tiers, depth_menu, seed);
  return plan;
}

namespace {

double overhead_or_zero(std::size_t test_cnots, std::size_t baseline_cnots) {
  if (baseline_cnots == 0) {
    return 0.0;
  }
  return swap_overhead(test_cnots, baseline_cnots);
}

struct ArmResult {
  bool denied = false;
  std::vector<Qubit> allocation;
  bool targets_held = false;
  RoutingResult routing;
};

/// Batch-at-a-time drain: reorder, partition, select, retire, repeat until
/// the victim's batch appears or the victim is rejected.
ArmResult run_scheduled_arm(const Circuit& victim_circuit,
                            const std::string& victim_id,
                            const CouplingGraph& g, const AttackPlan& plan,
                            const ImpactOptions& options, bool with_flood,
                            std::uint64_t routing_seed) {
  ArmResult arm;

  std::vector<Job> queue;
  std::map<std::string, std::pair<std::string, double>> cost_book;
  if (with_flood) {
    for (const Job& flood : plan.flood_jobs) {
      queue.push_back(flood);
      cost_book[flood.id] = {flood.user,
                             static_cast<double>(flood.circuit.num_gates())};
    }
  }
  Job victim;
  victim.id = victim_id;
  victim.user = options.victim_user;
  victim.circuit = victim_circuit;
  victim.usage_score = options.victim_usage;
  victim.arrival_index = queue.size();
  queue.push_back(victim);
  cost_book[victim_id] = {options.victim_user,
                          static_cast<double>(victim_circuit.num_gates())};

  while (!queue.empty()) {
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    SelectResult selected = select_batch(queue, g, options.scheduler);
    for (const Job& rejected : selected.rejected) {
      if (rejected.id == victim_id) {
        arm.denied = true;
        return arm;
      }
    }
    if (selected.batch.entries.empty()) {
      break;
    }
    if (const std::vector<Qubit>* granted =
            selected.batch.allocation_of(victim_id)) {
      arm.allocation = *granted;
      std::set<Qubit> held;
      for (const BatchEntry& entry : selected.batch.entries) {
        if (entry.job_id == victim_id) {
          continue;
        }
        held.insert(entry.allocation.begin(), entry.allocation.end());
      }
      arm.targets_held =
          std::all_of(plan.target_qubits.begin(), plan.target_qubits.end(),
                      [&held](Qubit q) { return held.count(q) != 0; });
      const Layout layout = initial_layout(victim_circuit, g, arm.allocation);
      arm.routing =
          route(victim_circuit, g, arm.allocation, layout, routing_seed);
      return arm;
    }
    // The victim missed this batch; retire it and charge its users.
    std::vector<std::pair<std::string, double>> costs;
    for (const BatchEntry& entry : selected.batch.entries) {
      costs.push_back(cost_book.at(entry.job_id));
    }
    update_usage(queue, costs);
  }
  arm.denied = true;
  return arm;
}

ArmResult run_hold_arm(const Circuit& victim_circuit, const CouplingGraph& g,
                       const AttackPlan& plan, const ImpactOptions& options,
                       std::uint64_t routing_seed) {
  ArmResult arm;
  std::vector<Qubit> available;
  for (const Qubit q : all_qubits(g)) {
    if (!std::binary_search(plan.target_qubits.begin(),
                            plan.target_qubits.end(), q)) {
      available.push_back(q);
    }
  }
  const auto allocation =
      allocate_qubits(victim_circuit, g, available, PriorityLevel::High,
                      options.scheduler.enumeration_cap);
  if (!allocation) {
    arm.denied = true;
    return arm;
  }
  arm.allocation = *allocation;
  arm.targets_held = true;
  const Layout layout = initial_layout(victim_circuit, g, arm.allocation);
  arm.routing = route(victim_circuit, g, arm.allocation, layout, routing_seed);
  return arm;
}

}  // namespace

ImpactAggregates aggregate_impact(const std::vector<ImpactRow>& rows) {
  ImpactAggregates agg;
  std::vector<double> overheads;
  for (const ImpactRow& row : rows) {
    if (row.denied) {
      ++agg.denied;
    } else {
      overheads.push_back(row.overhead_pct);
    }
  }
  if (overheads.empty()) {
    return agg;
  }
  std::sort(overheads.begin(), overheads.end());
  double sum = 0.0;
  for (const double v : overheads) {
    sum += v;
  }
  agg.mean_overhead = sum / static_cast<double>(overheads.size());
  const std::size_t mid = overheads.size() / 2;
  agg.median_overhead = overheads.size() % 2 == 1
                            ? overheads[mid]
                            : 0.5 * (overheads[mid - 1] + overheads[mid]);
  agg.max_overhead = overheads.back();
  return agg;
}

ImpactReport measure_attack_impact(const VictimSpec& victim,
                                   const CouplingGraph& g,
                                   const Calibration& cal,
                                   const AttackPlan& plan,
                                   const ImpactOptions& options,
                                   const std::vector<std::uint64_t>& seeds) {
  cal.validate(g);
  if (plan.target_qubits.empty()) {
    throw std::invalid_argument("attack plan has no target qubits");
  }
  {
    std::vector<Qubit> without_targets;
    for (const Qubit q : all_qubits(g)) {
      if (!std::binary_search(plan.target_qubits.begin(),
                              plan.target_qubits.end(), q)) {
        without_targets.push_back(q);
      }
    }
    if (!densest_allocation(g, victim.num_qubits, without_targets)) {
      throw std::invalid_argument(
          "victim cannot fit the device with the targets removed");
    }
  }

  ImpactReport report;
  report.rows.resize(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    const std::uint64_t seed = seeds[i];
    const Circuit victim_circuit =
        random_circuit(victim.num_qubits, victim.num_gates,
                       victim.two_qubit_fraction, seed);
    const std::string victim_id = "victim-job";

    AttackPlan no_flood = plan;
    no_flood.flood_jobs.clear();
    const ArmResult baseline = run_scheduled_arm(
        victim_circuit, victim_id, g, no_flood, options, false, seed);
    const ArmResult attack =
        options.mode == AttackMode::Hold
            ? run_hold_arm(victim_circuit, g, plan, options, seed)
            : run_scheduled_arm(victim_circuit, victim_id, g, plan, options,
                                true, seed);

    ImpactRow row;
    row.seed = seed;
    row.denied = baseline.denied || attack.denied;
    if (!row.denied) {
      row.swaps_baseline = baseline.routing.swaps_inserted;
      row.swaps_attack = attack.routing.swaps_inserted;
      row.cnot_baseline = baseline.routing.cnot_after_decomposition;
      row.cnot_attack = attack.routing.cnot_after_decomposition;
      row.overhead_pct = overhead_or_zero(row.cnot_attack, row.cnot_baseline);
      row.allocation_baseline = baseline.allocation;
      row.allocation_attack = attack.allocation;
      row.flood_succeeded = attack.targets_held;
    }
    report.rows[i] = std::move(row);
  });

  std::sort(report.rows.begin(), report.rows.end(),
            [](const ImpactRow& lhs, const ImpactRow& rhs) {
              return lhs.seed < rhs.seed;
            });
  report.aggregates = aggregate_impact(report.rows);
  return report;
}

void to_json(nlohmann::json& j, const ImpactRow& r) {
  j = nlohmann::json{{"seed", r.seed},
                     {"denied", r.denied},
                     {"swaps_baseline", r.swaps_baseline},
                     {"swaps_attack", r.swaps_attack},
                     {"cnot_baseline", r.cnot_baseline},
                     {"cnot_attack", r.cnot_attack},
                     {"overhead_pct", r.overhead_pct},
                     {"allocation_baseline", r.allocation_baseline},
                     {"allocation_attack", r.allocation_attack},
                     {"flood_succeeded", r.flood_succeeded}};
}

void to_json(nlohmann::json& j, const ImpactReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ImpactRow& row : r.rows) {
    rows.push_back(row);
  }
  j = nlohmann::json{{"rows", std::move(rows)},
                     {"aggregates",
                      {{"mean_overhead", r.aggregates.mean_overhead},
                       {"median_overhead", r.aggregates.median_overhead},
                       {"max_overhead", r.aggregates.max_overhead},
                       {"denied", r.aggregates.denied}}}};
}

}  // namespace mtcsim
