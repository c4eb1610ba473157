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

#include "mtcsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "mtcsim/defense.hpp"
#include "mtcsim/parallel.hpp"
#include "mtcsim/router.hpp"
#include "mtcsim/scheduler.hpp"

namespace mtcsim {

std::vector<std::uint64_t> SeedRange::values() const {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(begin + i);
  }
  return out;
}

void to_json(nlohmann::json& j, const Scenario& s) {
  j = nlohmann::json{
      {"coupling", s.coupling},
      {"calibration_seed", s.calibration_seed},
      {"victim",
       {{"num_qubits", s.victim.num_qubits},
        {"num_gates", s.victim.num_gates},
        {"two_qubit_fraction", s.victim.two_qubit_fraction}}},
      {"seeds", {{"begin", s.seeds.begin}, {"count", s.seeds.count}}},
      {"allocations", s.allocations},
      {"baseline_index", s.baseline_index},
      {"gate_menu", s.gate_menu},
      {"qubit_range", {{"min", s.qubit_min}, {"max", s.qubit_max}}},
      {"scheduler_mediated", s.scheduler_mediated},
      {"attack",
       {{"enabled", s.attack.enabled},
        {"targets", s.attack.targets},
        {"tiers", s.attack.tiers},
        {"depth_menu", s.attack.depth_menu},
        {"victim_usage", s.attack.victim_usage},
        {"depth_tolerance", s.attack.depth_tolerance}}},
      {"defense",
       {{"enabled", s.defense.enabled},
        {"nu", s.defense.nu},
        {"train_seed", s.defense.train_seed},
        {"corpus_normal", s.defense.corpus_normal}}}};
}

void from_json(const nlohmann::json& j, Scenario& s) {
  s.coupling = j.value("coupling", std::string("grid20"));
  s.calibration_seed = j.value("calibration_seed", std::uint64_t{1});
  if (j.contains("victim")) {
    const auto& v = j.at("victim");
    s.victim.num_qubits = v.value("num_qubits", std::size_t{6});
    s.victim.num_gates = v.value("num_gates", std::size_t{120});
    s.victim.two_qubit_fraction = v.value("two_qubit_fraction", 0.5);
  }
  if (j.contains("seeds")) {
    const auto& r = j.at("seeds");
    s.seeds.begin = r.value("begin", std::uint64_t{0});
    s.seeds.count = r.value("count", std::size_t{100});
  }
  s.allocations =
      j.value("allocations", std::vector<std::vector<Qubit>>{});
  s.baseline_index = j.value("baseline_index", std::size_t{0});
  s.gate_menu =
      j.value("gate_menu", std::vector<std::size_t>{50, 100, 200, 300});
  if (j.contains("qubit_range")) {
    const auto& r = j.at("qubit_range");
    s.qubit_min = r.value("min", std::size_t{4});
    s.qubit_max = r.value("max", std::size_t{10});
  }
  s.scheduler_mediated = j.value("scheduler_mediated", false);
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    s.attack.enabled = a.value("enabled", true);
    s.attack.targets = a.value("targets", std::size_t{5});
    s.attack.tiers = a.value("tiers", std::size_t{3});
    s.attack.depth_menu =
        a.value("depth_menu", std::vector<std::size_t>{54, 58, 62});
    s.attack.victim_usage = a.value("victim_usage", 0.5005);
    s.attack.depth_tolerance = a.value("depth_tolerance", 0.3);
  }
  if (j.contains("defense")) {
    const auto& d = j.at("defense");
    s.defense.enabled = d.value("enabled", true);
    s.defense.nu = d.value("nu", 0.1);
    s.defense.train_seed = d.value("train_seed", std::uint64_t{7});
    s.defense.corpus_normal = d.value("corpus_normal", std::size_t{100});
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open scenario file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("scenario parse error: " + std::string(e.what()));
  }
  Scenario s;
  try {
    s = j.get<Scenario>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("scenario field error: " + std::string(e.what()));
  }
  if (s.seeds.count == 0) {
    throw ScenarioError("seed range must be nonempty");
  }
  if (s.victim.num_qubits == 0) {
    throw ScenarioError("victim needs at least one qubit");
  }
  if (s.victim.two_qubit_fraction < 0.0 ||
      s.victim.two_qubit_fraction > 1.0) {
    throw ScenarioError("two_qubit_fraction must lie in [0, 1]");
  }
  return s;
}

namespace {

double overhead_or_zero(std::size_t test_cnots, std::size_t baseline_cnots) {
  return baseline_cnots == 0 ? 0.0
                             : swap_overhead(test_cnots, baseline_cnots);
}

double median_of(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::vector<CellAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const SweepRow*>> grouped;
  for (const SweepRow& row : rows) {
    auto [it, inserted] = grouped.try_emplace(row.cell);
    if (inserted) {
      order.push_back(row.cell);
    }
    it->second.push_back(&row);
  }
  std::vector<CellAggregate> aggregates;
  aggregates.reserve(order.size());
  for (const std::string& cell : order) {
    const auto& members = grouped.at(cell);
    CellAggregate agg;
    agg.cell = cell;
    std::vector<double> overheads;
    std::vector<double> swaps;
    double sum = 0.0;
    for (const SweepRow* row : members) {
      overheads.push_back(row->overhead_pct);
      swaps.push_back(static_cast<double>(row->swaps_added));
      sum += row->overhead_pct;
    }
    agg.mean_overhead = sum / static_cast<double>(members.size());
    agg.max_overhead = *std::max_element(overheads.begin(), overheads.end());
    agg.median_overhead = median_of(std::move(overheads));
    agg.median_swaps_added = median_of(std::move(swaps));
    aggregates.push_back(std::move(agg));
  }
  return aggregates;
}

std::vector<std::vector<Qubit>> derive_allocation_configs(
    const CouplingGraph& g, std::size_t k) {
  std::vector<std::vector<Qubit>> candidates =
      enumerate_connected_allocations(g, k, all_qubits(g));
  if (candidates.empty()) {
    throw ScenarioError("no connected allocation of the requested size");
  }
  struct Keyed {
    std::size_t density;
    std::size_t spread;
    const std::vector<Qubit>* subset;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(candidates.size());
  for (const auto& subset : candidates) {
    keyed.push_back({allocation_density(g, subset),
                     allocation_spread(g, subset), &subset});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.density != b.density) {
      return a.density > b.density;
    }
    if (a.spread != b.spread) {
      return a.spread < b.spread;
    }
    return *a.subset < *b.subset;
  });
  const std::size_t last = keyed.size() - 1;
  const std::size_t picks[5] = {0, last / 4, last / 2, 3 * last / 4, last};
  std::vector<std::vector<Qubit>> configs;
  for (const std::size_t index : picks) {
    std::vector<Qubit> subset = *keyed[index].subset;
    if (std::find(configs.begin(), configs.end(), subset) == configs.end()) {
      configs.push_back(std::move(subset));
    }
  }
  return configs;
}

SweepReport run_allocation_sweep(const Scenario& s) {
  const auto [g, cal] = resolve_coupling(s.coupling, s.calibration_seed);
  std::vector<std::vector<Qubit>> configs =
      s.allocations.empty() ? derive_allocation_configs(g, s.victim.num_qubits)
                            : s.allocations;
  for (auto& config : configs) {
    std::sort(config.begin(), config.end());
    if (config.size() != s.victim.num_qubits) {
      throw ScenarioError("allocation size must match the victim size");
    }
    if (std::adjacent_find(config.begin(), config.end()) != config.end()) {
      throw ScenarioError("allocation has repeated qubits");
    }
    if (config.back() >= g.num_qubits()) {
      throw ScenarioError("allocation qubit out of range");
    }
    if (!is_connected_subset(g, config)) {
      throw ScenarioError("allocation is not connected");
    }
  }
  if (s.baseline_index >= configs.size()) {
    throw ScenarioError("baseline index out of range");
  }

  const std::vector<std::uint64_t> seeds = s.seeds.values();
  const std::size_t num_seeds = seeds.size();
  SweepReport report;
  report.rows.resize(configs.size() * num_seeds);
  parallel_for(num_seeds, [&, g = g](std::size_t i) {
    const std::uint64_t seed = seeds[i];
    const Circuit victim =
        random_circuit(s.victim.num_qubits, s.victim.num_gates,
                       s.victim.two_qubit_fraction, seed);
    std::vector<RoutingResult> routed;
    routed.reserve(configs.size());
    for (const auto& config : configs) {
      routed.push_back(
          route(victim, g, config, initial_layout(victim, g, config), seed));
    }
    const std::size_t base_cnots =
        routed[s.baseline_index].cnot_after_decomposition;
    const std::size_t base_swaps = routed[s.baseline_index].swaps_inserted;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      SweepRow row;
      row.cell = "config" + std::to_string(c + 1);
      row.seed = seed;
      row.cnot_baseline = base_cnots;
      row.cnot_test = routed[c].cnot_after_decomposition;
      row.swaps_added = static_cast<long long>(routed[c].swaps_inserted) -
                        static_cast<long long>(base_swaps);
      row.overhead_pct = overhead_or_zero(row.cnot_test, row.cnot_baseline);
      report.rows[c * num_seeds + i] = std::move(row);
    }
  });
  report.aggregates = aggregate_sweep(report.rows);
  return report;
}

namespace {

struct Contrast {
  std::vector<Qubit> baseline;
  std::vector<Qubit> test;
};

Contrast densest_vs_sparsest(const CouplingGraph& g, const Calibration& cal,
                             std::size_t k) {
  const auto dense = densest_allocation(g, k, all_qubits(g), &cal);
  const auto sparse = sparsest_allocation(g, k, all_qubits(g), &cal);
  if (!dense || !sparse) {
    throw ScenarioError("no connected allocation of the requested size");
  }
  return {*dense, *sparse};
}

}  // namespace

SweepReport run_complexity_sweep(const Scenario& s) {
  const auto [g, cal] = resolve_coupling(s.coupling, s.calibration_seed);
  if (s.gate_menu.empty()) {
    throw ScenarioError("gate menu must be nonempty");
  }
  if (!std::is_sorted(s.gate_menu.begin(), s.gate_menu.end())) {
    throw ScenarioError("gate menu must be ascending");
  }
  const Contrast contrast =
      densest_vs_sparsest(g, cal, s.victim.num_qubits);
  const std::vector<std::uint64_t> seeds = s.seeds.values();
  const std::size_t num_seeds = seeds.size();

  SweepReport report;
  report.rows.resize(s.gate_menu.size() * num_seeds);
  parallel_for(report.rows.size(), [&, g = g](std::size_t task) {
    const std::size_t c = task / num_seeds;
    const std::size_t i = task % num_seeds;
    const std::uint64_t seed = seeds[i];
    const Circuit victim =
        random_circuit(s.victim.num_qubits, s.gate_menu[c],
                       s.victim.two_qubit_fraction, seed);
    const RoutingResult base =
        route(victim, g, contrast.baseline,
              initial_layout(victim, g, contrast.baseline), seed);
    const RoutingResult test =
        route(victim, g, contrast.test,
              initial_layout(victim, g, contrast.test), seed);
    SweepRow row;
    row.cell = "gates" + std::to_string(s.gate_menu[c]);
    row.seed = seed;
    row.cnot_baseline = base.cnot_after_decomposition;
    row.cnot_test = test.cnot_after_decomposition;
    row.swaps_added = static_cast<long long>(test.swaps_inserted) -
                      static_cast<long long>(base.swaps_inserted);
    row.overhead_pct = overhead_or_zero(row.cnot_test, row.cnot_baseline);
    report.rows[task] = std::move(row);
  });
  report.aggregates = aggregate_sweep(report.rows);
  return report;
}

SweepReport run_size_sweep(const Scenario& s) {
  const auto [g, cal] = resolve_coupling(s.coupling, s.calibration_seed);
  if (s.qubit_min == 0 || s.qubit_min > s.qubit_max) {
    throw ScenarioError("qubit range must satisfy 1 <= min <= max");
  }
  if (s.qubit_max > g.num_qubits()) {
    throw ScenarioError("qubit range exceeds the hardware size");
  }
  if (s.victim.two_qubit_fraction > 0.0 && s.qubit_min < 2) {
    throw ScenarioError(
        "two-qubit circuits need a qubit range starting at 2");
  }
  std::vector<std::size_t> sizes;
  for (std::size_t k = s.qubit_min; k <= s.qubit_max; ++k) {
    sizes.push_back(k);
  }
  std::vector<Contrast> contrasts;
  contrasts.reserve(sizes.size());
  for (const std::size_t k : sizes) {
    contrasts.push_back(densest_vs_sparsest(g, cal, k));
  }
  const std::vector<std::uint64_t> seeds = s.seeds.values();
  const std::size_t num_seeds = seeds.size();

  SweepReport report;
  report.rows.resize(sizes.size() * num_seeds);
  parallel_for(report.rows.size(), [&, g = g](std::size_t task) {
    const std::size_t c = task / num_seeds;
    const std::size_t i = task % num_seeds;
    const std::uint64_t seed = seeds[i];
    const Circuit victim = random_circuit(
        sizes[c], s.victim.num_gates, s.victim.two_qubit_fraction, seed);
    const RoutingResult base =
        route(victim, g, contrasts[c].baseline,
              initial_layout(victim, g, contrasts[c].baseline), seed);
    const RoutingResult test =
        route(victim, g, contrasts[c].test,
              initial_layout(victim, g, contrasts[c].test), seed);
    SweepRow row;
    row.cell = "qubits" + std::to_string(sizes[c]);
    row.seed = seed;
    row.cnot_baseline = base.cnot_after_decomposition;
    row.cnot_test = test.cnot_after_decomposition;
    row.swaps_added = static_cast<long long>(test.swaps_inserted) -
                      static_cast<long long>(base.swaps_inserted);
    row.overhead_pct = overhead_or_zero(row.cnot_test, row.cnot_baseline);
    report.rows[task] = std::move(row);
  });
  report.aggregates = aggregate_sweep(report.rows);
  return report;
}

EndToEndReport run_end_to_end(const Scenario& s) {
  if (!s.scheduler_mediated) {
    throw ScenarioError("end-to-end runs require scheduler_mediated: true");
  }
  if (s.defense.enabled && s.defense.corpus_normal < 10) {
    throw ScenarioError("detector training needs at least 10 normal users");
  }
  const auto [g, cal] = resolve_coupling(s.coupling, s.calibration_seed);

  std::size_t num_targets =
      s.attack.targets == 0 ? (g.num_qubits() + 9) / 10 : s.attack.targets;
  if (num_targets >= g.num_qubits()) {
    throw ScenarioError("attack targets must leave qubits for the victim");
  }
  AttackPlan plan;
  plan.target_qubits = select_target_qubits(
      g, cal, QualityWeights{}, num_targets, RankDirection::Ascending);
  if (s.attack.enabled) {
    plan.flood_jobs = generate_kitchen_sink_jobs(
        plan.target_qubits, s.attack.tiers, s.attack.depth_menu,
        s.calibration_seed);
  }

  ImpactOptions options;
  options.mode = AttackMode::Flood;
  options.victim_usage = s.attack.victim_usage;
  options.scheduler.depth_tolerance = s.attack.depth_tolerance;

  const std::vector<std::uint64_t> seeds = s.seeds.values();
  const ImpactReport pre =
      measure_attack_impact(s.victim, g, cal, plan, options, seeds);

  EndToEndReport report;
  ImpactReport post = pre;
  if (s.defense.enabled && !plan.flood_jobs.empty()) {
    const LabeledCorpus corpus = synthetic_user_corpus(
        s.defense.corpus_normal, 0, s.defense.train_seed);
    std::vector<UserFeatures> normal;
    for (const auto& [user, features] :
         extract_all_features(corpus.log, corpus.window_days)) {
      normal.push_back(features);
    }
    const AnomalyModel model =
        train(normal, s.defense.nu, s.defense.train_seed);

    // Live observation window: the flood lands as one burst on its
    // targets while the victim submits a single ordinary job.
    const std::string flood_user = plan.flood_jobs.front().user;
    JobLog live;
    std::vector<JobRecord> burst;
    for (std::size_t i = 0; i < plan.flood_jobs.size(); ++i) {
      JobRecord r;
      r.submit = 0.5 + static_cast<double>(i) * 3e-4;
      r.finish = r.submit + 0.02;
      r.priority = static_cast<PriorityLevel>(
          std::min<std::size_t>(i / std::max<std::size_t>(s.attack.tiers, 1),
                                2));
      const std::size_t width = plan.flood_jobs[i].circuit.num_qubits();
      r.qubits.assign(
          plan.target_qubits.begin(),
          plan.target_qubits.begin() +
              static_cast<std::ptrdiff_t>(
                  std::min(width, plan.target_qubits.size())));
      burst.push_back(std::move(r));
    }
    live.users[flood_user] = std::move(burst);
    JobRecord victim_record;
    victim_record.submit = 0.25;
    victim_record.finish = 0.27;
    victim_record.priority = PriorityLevel::Medium;
    if (const auto home =
            densest_allocation(g, s.victim.num_qubits, all_qubits(g), &cal)) {
      victim_record.qubits = *home;
    }
    live.users[options.victim_user] = {victim_record};

    report.adversary_score =
        score(model, extract_features(live, flood_user, corpus.window_days));
    report.adversary_flagged = report.adversary_score < 0.0;

    if (report.adversary_flagged) {
      AttackPlan isolated = plan;
      isolated.flood_jobs =
          respond(isolated.flood_jobs, flood_user, ResponsePolicy::Isolate);
      post = measure_attack_impact(s.victim, g, cal, isolated, options, seeds);
    }
  }

  std::vector<double> pre_overheads;
  std::vector<double> post_overheads;
  report.rows.reserve(pre.rows.size());
  for (std::size_t i = 0; i < pre.rows.size(); ++i) {
    EndToEndRow row;
    row.seed = pre.rows[i].seed;
    row.pre_overhead_pct = pre.rows[i].overhead_pct;
    row.post_overhead_pct = post.rows[i].overhead_pct;
    row.denied_pre = pre.rows[i].denied;
    row.denied_post = post.rows[i].denied;
    if (!row.denied_pre) {
      pre_overheads.push_back(row.pre_overhead_pct);
    }
    if (!row.denied_post) {
      post_overheads.push_back(row.post_overhead_pct);
    }
    report.rows.push_back(row);
  }
  report.pre_median = median_of(pre_overheads);
  report.post_median = median_of(post_overheads);
  report.pre_max = pre_overheads.empty()
                       ? 0.0
                       : *std::max_element(pre_overheads.begin(),
                                           pre_overheads.end());
  report.post_max = post_overheads.empty()
                        ? 0.0
                        : *std::max_element(post_overheads.begin(),
                                            post_overheads.end());
  return report;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path, std::size_t expected_fields) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open report file: " + path.string());
  }
  std::string line;
  std::vector<std::vector<std::string>> records;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != expected_fields) {
      throw ScenarioError("malformed report line in " + path.string());
    }
    records.push_back(std::move(fields));
  }
  return records;
}

}  // namespace

void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& dir,
                     const std::string& name) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (name + ".csv"));
    out << "cell,seed,cnot_baseline,cnot_test,swaps_added,overhead_pct\n";
    for (const SweepRow& row : report.rows) {
      out << row.cell << ',' << row.seed << ',' << row.cnot_baseline << ','
          << row.cnot_test << ',' << row.swaps_added << ','
          << format_double(row.overhead_pct) << '\n';
    }
  }
  {
    std::ofstream out(dir / (name + "_aggregates.csv"));
    out << "cell,mean_overhead,median_overhead,max_overhead,"
           "median_swaps_added\n";
    for (const CellAggregate& agg : report.aggregates) {
      out << agg.cell << ',' << format_double(agg.mean_overhead) << ','
          << format_double(agg.median_overhead) << ','
          << format_double(agg.max_overhead) << ','
          << format_double(agg.median_swaps_added) << '\n';
    }
  }
}

SweepReport load_sweep_csv(const std::filesystem::path& dir,
                           const std::string& name) {
  SweepReport report;
  for (const auto& fields : read_csv(dir / (name + ".csv"), 6)) {
    SweepRow row;
    row.cell = fields[0];
    row.seed = std::stoull(fields[1]);
    row.cnot_baseline = std::stoull(fields[2]);
    row.cnot_test = std::stoull(fields[3]);
    row.swaps_added = std::stoll(fields[4]);
    row.overhead_pct = std::stod(fields[5]);
    report.rows.push_back(std::move(row));
  }
  for (const auto& fields : read_csv(dir / (name + "_aggregates.csv"), 5)) {
    CellAggregate agg;
    agg.cell = fields[0];
    agg.mean_overhead = std::stod(fields[1]);
    agg.median_overhead = std::stod(fields[2]);
    agg.max_overhead = std::stod(fields[3]);
    agg.median_swaps_added = std::stod(fields[4]);
    report.aggregates.push_back(std::move(agg));
  }
  const std::vector<CellAggregate> recomputed = aggregate_sweep(report.rows);
  if (recomputed.size() != report.aggregates.size()) {
    throw ScenarioError("aggregate cells diverge from rows in " + name);
  }
  for (std::size_t i = 0; i < recomputed.size(); ++i) {
    const CellAggregate& stored = report.aggregates[i];
    const CellAggregate& fresh = recomputed[i];
    if (stored.cell != fresh.cell ||
        stored.mean_overhead != fresh.mean_overhead ||
        stored.median_overhead != fresh.median_overhead ||
        stored.max_overhead != fresh.max_overhead ||
        stored.median_swaps_added != fresh.median_swaps_added) {
      throw ScenarioError("stored aggregates do not match rows in " + name);
    }
  }
  return report;
}

void write_end_to_end_csv(const EndToEndReport& report,
                          const std::filesystem::path& dir,
                          const std::string& name) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (name + ".csv"));
    out << "seed,pre_overhead_pct,post_overhead_pct,denied_pre,denied_post\n";
    for (const EndToEndRow& row : report.rows) {
      out << row.seed << ',' << format_double(row.pre_overhead_pct) << ','
          << format_double(row.post_overhead_pct) << ','
          << (row.denied_pre ? 1 : 0) << ',' << (row.denied_post ? 1 : 0)
          << '\n';
    }
  }
  {
    std::ofstream out(dir / (name + "_summary.csv"));
    out << "adversary_flagged,adversary_score,pre_median,pre_max,"
           "post_median,post_max\n";
    out << (report.adversary_flagged ? 1 : 0) << ','
        << format_double(report.adversary_score) << ','
        << format_double(report.pre_median) << ','
        << format_double(report.pre_max) << ','
        << format_double(report.post_median) << ','
        << format_double(report.post_max) << '\n';
  }
}

}  // namespace mtcsim
