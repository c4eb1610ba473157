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

// Command-line front end for the simulator. Subcommands mirror the
// library layers: `rank` and `route` exercise the hardware and routing
// models on their own, `schedule` drains a queue file through the
// fair-share scheduler, `attack` measures a SWAP-injection flood,
// `defend` trains and applies the anomaly detector, and `experiment`
// runs the canned sweeps from a scenario file.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mtcsim/adversary.hpp"
#include "mtcsim/defense.hpp"
#include "mtcsim/experiment.hpp"
#include "mtcsim/router.hpp"
#include "mtcsim/scheduler.hpp"

namespace {

using namespace mtcsim;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

struct RankArgs {
  std::string coupling = "grid20";
  std::uint64_t calibration_seed = 1;
  QualityWeights weights;
  bool descending = false;
};

int run_rank(const RankArgs& args) {
  const auto [g, cal] = resolve_coupling(args.coupling, args.calibration_seed);
  const auto ranked = rank_qubits_by_quality(
      g, cal, args.weights,
      args.descending ? RankDirection::Descending : RankDirection::Ascending);
  std::cout << "qubit,quality,degree,mean_connection_error,readout_error\n";
  for (const Qubit q : ranked) {
    std::cout << q << ','
              << format_double(qubit_quality(g, cal, q, args.weights)) << ','
              << g.degree(q) << ','
              << format_double(cal.mean_connection_error(g, q)) << ','
              << format_double(cal.readout_error[q]) << '\n';
  }
  return 0;
}

struct RouteArgs {
  std::string coupling = "grid20";
  std::size_t qubits = 5;
  std::size_t gates = 60;
  double fraction = 0.5;
  std::uint64_t seed = 1;
  std::vector<Qubit> allocation;
  std::string circuit_path;
  bool naive_placement = false;
};

int run_route(const RouteArgs& args) {
  const auto [g, cal] = resolve_coupling(args.coupling, args.seed);
  Circuit c = args.circuit_path.empty()
                  ? random_circuit(args.qubits, args.gates, args.fraction,
                                   args.seed)
                  : read_json_file(args.circuit_path).get<Circuit>();
  std::vector<Qubit> allocation = args.allocation;
  if (allocation.empty()) {
    const auto dense =
        densest_allocation(g, c.num_qubits(), all_qubits(g), &cal);
    if (!dense) {
      throw std::runtime_error("no connected allocation of that size");
    }
    allocation = *dense;
  }
  Layout layout = [&] {
    if (!args.naive_placement) {
      return initial_layout(c, g, allocation);
    }
    std::vector<Qubit> sorted = allocation;
    std::sort(sorted.begin(), sorted.end());
    return Layout(sorted);
  }();
  const RoutingResult result = route(c, g, allocation, layout, args.seed);
  nlohmann::json j;
  to_json(j, result);
  j["allocation"] = allocation;
  j["cnot_before_routing"] = gate_stats(c).two_qubit;
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ScheduleArgs {
  std::string coupling = "grid20";
  std::string queue_path;
  double depth_tolerance = 0.2;
};

int run_schedule(const ScheduleArgs& args) {
  const auto [g, cal] = resolve_coupling(args.coupling, 0);
  auto queue = read_json_file(args.queue_path).get<std::vector<Job>>();
  SchedulerConfig cfg;
  cfg.depth_tolerance = args.depth_tolerance;

  nlohmann::json rounds = nlohmann::json::array();
  while (!queue.empty()) {
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    std::map<std::string, std::pair<std::string, double>> job_info;
    for (const Job& job : queue) {
      job_info[job.id] = {job.user,
                          static_cast<double>(job.circuit.num_gates())};
    }
    SelectResult result = select_batch(queue, g, cfg);
    nlohmann::json round;
    to_json(round["batch"], result.batch);
    round["rejected"] = nlohmann::json::array();
    for (const Job& job : result.rejected) {
      round["rejected"].push_back(job.id);
    }
    if (result.batch.entries.empty() && result.rejected.empty()) {
      break;  // nothing allocatable and nothing rejected: queue is stuck
    }
    std::vector<std::pair<std::string, double>> costs;
    for (const BatchEntry& entry : result.batch.entries) {
      costs.push_back(job_info.at(entry.job_id));
    }
    update_usage(queue, costs);
    rounds.push_back(std::move(round));
  }
  std::cout << rounds.dump(2) << '\n';
  return 0;
}

struct AttackArgs {
  std::string coupling = "grid20";
  std::uint64_t calibration_seed = 1;
  std::size_t victim_qubits = 6;
  std::size_t victim_gates = 120;
  double victim_fraction = 0.5;
  std::size_t targets = 0;
  std::size_t tiers = 3;
  std::vector<std::size_t> depth_menu = {54, 58, 62};
  std::uint64_t seed_begin = 0;
  std::size_t seed_count = 10;
  std::string mode = "flood";
  std::string out_path;
};

int run_attack(const AttackArgs& args) {
  const auto [g, cal] = resolve_coupling(args.coupling, args.calibration_seed);
  const AttackPlan plan =
      plan_attack(g, cal, QualityWeights{}, RankDirection::Ascending,
                  args.targets, args.tiers, args.depth_menu,
                  args.calibration_seed);

  VictimSpec victim;
  victim.num_qubits = args.victim_qubits;
  victim.num_gates = args.victim_gates;
  victim.two_qubit_fraction = args.victim_fraction;

  ImpactOptions options;
  options.mode = args.mode == "hold" ? AttackMode::Hold : AttackMode::Flood;

  SeedRange seeds;
  seeds.begin = args.seed_begin;
  seeds.count = args.seed_count;

  const ImpactReport report =
      measure_attack_impact(victim, g, cal, plan, options, seeds.values());
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    out << "seed,denied,swaps_baseline,swaps_attack,cnot_baseline,"
           "cnot_attack,overhead_pct,flood_succeeded\n";
    for (const ImpactRow& row : report.rows) {
      out << row.seed << ',' << (row.denied ? 1 : 0) << ','
          << row.swaps_baseline << ',' << row.swaps_attack << ','
          << row.cnot_baseline << ',' << row.cnot_attack << ','
          << format_double(row.overhead_pct) << ','
          << (row.flood_succeeded ? 1 : 0) << '\n';
    }
  }
  std::cout << "targets:";
  for (const Qubit q : plan.target_qubits) {
    std::cout << ' ' << q;
  }
  std::cout << "\nflood jobs: " << plan.flood_jobs.size()
            << "\ntrials: " << report.rows.size()
            << "\ndenied: " << report.aggregates.denied
            << "\nmean overhead: "
            << format_double(report.aggregates.mean_overhead)
            << "%\nmedian overhead: "
            << format_double(report.aggregates.median_overhead)
            << "%\nmax overhead: "
            << format_double(report.aggregates.max_overhead) << "%\n";
  return 0;
}

struct TrainArgs {
  std::size_t normal_users = 100;
  double nu = 0.1;
  std::uint64_t seed = 7;
  std::string log_path;
  double window = 1.0;
  std::string out_path = "model.json";
};

int run_defend_train(const TrainArgs& args) {
  std::vector<UserFeatures> normal;
  double window = args.window;
  if (args.log_path.empty()) {
    const LabeledCorpus corpus =
        synthetic_user_corpus(args.normal_users, 0, args.seed);
    window = corpus.window_days;
    for (const auto& [user, features] :
         extract_all_features(corpus.log, window)) {
      normal.push_back(features);
    }
  } else {
    const auto log = read_json_file(args.log_path).get<JobLog>();
    for (const auto& [user, features] : extract_all_features(log, window)) {
      normal.push_back(features);
    }
  }
  const AnomalyModel model = train(normal, args.nu, args.seed);
  nlohmann::json j;
  to_json(j, model);
  write_json_file(args.out_path, j);
  std::cout << "trained on " << normal.size() << " users, model written to "
            << args.out_path << '\n';
  return 0;
}

struct ScoreArgs {
  std::string model_path = "model.json";
  std::string log_path;
  double window = 1.0;
};

int run_defend_score(const ScoreArgs& args) {
  const auto model = read_json_file(args.model_path).get<AnomalyModel>();
  const auto log = read_json_file(args.log_path).get<JobLog>();
  std::cout << "user,score,flagged\n";
  for (const auto& [user, features] : extract_all_features(log, args.window)) {
    const double value = score(model, features);
    std::cout << user << ',' << format_double(value) << ','
              << (value < 0.0 ? 1 : 0) << '\n';
  }
  return 0;
}

struct ExperimentArgs {
  std::string scenario_path;
  std::string out_dir = "reports";
};

int run_experiment(const std::string& kind, const ExperimentArgs& args) {
  Scenario scenario = load_scenario(args.scenario_path);
  if (kind == "end-to-end") {
    scenario.scheduler_mediated = true;
    const EndToEndReport report = run_end_to_end(scenario);
    write_end_to_end_csv(report, args.out_dir, "end_to_end");
    std::cout << "adversary flagged: "
              << (report.adversary_flagged ? "yes" : "no")
              << "\nadversary score: " << format_double(report.adversary_score)
              << "\npre median overhead: " << format_double(report.pre_median)
              << "%\npost median overhead: "
              << format_double(report.post_median) << "%\n";
    return 0;
  }
  SweepReport report;
  if (kind == "allocation") {
    report = run_allocation_sweep(scenario);
  } else if (kind == "complexity") {
    report = run_complexity_sweep(scenario);
  } else {
    report = run_size_sweep(scenario);
  }
  write_sweep_csv(report, args.out_dir, kind);
  std::cout << "cell,median_overhead,mean_overhead,max_overhead,"
               "median_swaps_added\n";
  for (const CellAggregate& agg : report.aggregates) {
    std::cout << agg.cell << ',' << format_double(agg.median_overhead) << ','
              << format_double(agg.mean_overhead) << ','
              << format_double(agg.max_overhead) << ','
              << format_double(agg.median_swaps_added) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-tenant quantum cloud scheduling simulator"};
  app.require_subcommand(1);

  RankArgs rank_args;
  CLI::App* rank = app.add_subcommand(
      "rank", "Rank qubits by the composite quality score");
  rank->add_option("--coupling", rank_args.coupling,
                   "Coupling preset name or JSON path");
  rank->add_option("--calibration-seed", rank_args.calibration_seed,
                   "Synthetic calibration seed");
  rank->add_option("--w1", rank_args.weights.w1, "Degree-term weight");
  rank->add_option("--w2", rank_args.weights.w2, "CNOT-error weight");
  rank->add_option("--w3", rank_args.weights.w3, "Readout-error weight");
  rank->add_flag("--descending", rank_args.descending,
                 "Worst qubits first instead of best");

  RouteArgs route_args;
  CLI::App* route = app.add_subcommand(
      "route", "Route one circuit onto an allocation and report SWAP costs");
  route->add_option("--coupling", route_args.coupling,
                    "Coupling preset name or JSON path");
  route->add_option("--qubits", route_args.qubits,
                    "Random-circuit width (ignored with --circuit)");
  route->add_option("--gates", route_args.gates,
                    "Random-circuit gate count (ignored with --circuit)");
  route->add_option("--fraction", route_args.fraction,
                    "Random-circuit two-qubit fraction");
  route->add_option("--seed", route_args.seed,
                    "Circuit, calibration and routing seed");
  route->add_option("--circuit", route_args.circuit_path,
                    "Circuit JSON file instead of a random circuit");
  route
      ->add_option("--allocation", route_args.allocation,
                   "Physical qubits to route on (default: densest fit)")
      ->delimiter(',');
  route->add_flag("--naive-placement", route_args.naive_placement,
                  "Sorted identity placement instead of interaction-aware");

  ScheduleArgs schedule_args;
  CLI::App* schedule = app.add_subcommand(
      "schedule", "Drain a queue JSON file through the fair-share scheduler");
  schedule->add_option("--coupling", schedule_args.coupling,
                       "Coupling preset name or JSON path");
  schedule
      ->add_option("--queue", schedule_args.queue_path,
                   "JSON array of jobs")
      ->required();
  schedule->add_option("--depth-tolerance", schedule_args.depth_tolerance,
                       "Relative depth comparability tolerance");

  AttackArgs attack_args;
  CLI::App* attack = app.add_subcommand(
      "attack", "Measure a SWAP-injection flood against a victim workload");
  attack->add_option("--coupling", attack_args.coupling,
                     "Coupling preset name or JSON path");
  attack->add_option("--calibration-seed", attack_args.calibration_seed,
                     "Calibration and attack-planning seed");
  attack->add_option("--victim-qubits", attack_args.victim_qubits,
                     "Victim circuit width");
  attack->add_option("--victim-gates", attack_args.victim_gates,
                     "Victim circuit gate count");
  attack->add_option("--victim-fraction", attack_args.victim_fraction,
                     "Victim two-qubit fraction");
  attack->add_option("--targets", attack_args.targets,
                     "Target qubit count (0 = ceil(n/10))");
  attack->add_option("--tiers", attack_args.tiers, "Flood usage tiers");
  attack
      ->add_option("--depth-menu", attack_args.depth_menu,
                   "Flood circuit depths, one per tier")
      ->delimiter(',');
  attack->add_option("--seed-begin", attack_args.seed_begin,
                     "First trial seed");
  attack->add_option("--seeds", attack_args.seed_count, "Trial count");
  attack
      ->add_option("--mode", attack_args.mode,
                   "flood = contend through the scheduler, hold = pin targets")
      ->check(CLI::IsMember({"flood", "hold"}));
  attack->add_option("--out", attack_args.out_path,
                     "Per-trial CSV output path");

  CLI::App* defend =
      app.add_subcommand("defend", "Train or apply the anomaly detector");
  defend->require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = defend->add_subcommand(
      "train", "Fit the one-class model on normal submission behavior");
  train->add_option("--normal", train_args.normal_users,
                    "Synthetic normal-user count (ignored with --log)");
  train->add_option("--nu", train_args.nu,
                    "Expected outlier fraction, in (0, 1)");
  train->add_option("--seed", train_args.seed,
                    "Corpus and training seed");
  train->add_option("--log", train_args.log_path,
                    "Train on a job-log JSON file instead");
  train->add_option("--window", train_args.window,
                    "Observation window in days (with --log)");
  train->add_option("--out", train_args.out_path, "Model JSON output path");

  ScoreArgs score_args;
  CLI::App* score = defend->add_subcommand(
      "score", "Score every user in a job log against a trained model");
  score->add_option("--model", score_args.model_path, "Model JSON path");
  score->add_option("--log", score_args.log_path, "Job-log JSON path")
      ->required();
  score->add_option("--window", score_args.window,
                    "Observation window in days");

  ExperimentArgs experiment_args;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Run a canned sweep from a scenario file");
  experiment->require_subcommand(1);
  std::string experiment_kind;
  for (const std::string kind :
       {"allocation", "complexity", "size", "end-to-end"}) {
    const char* blurb =
        kind == "allocation"   ? "Overhead across allocation compactness"
        : kind == "complexity" ? "Overhead across circuit gate counts"
        : kind == "size"       ? "Overhead across circuit widths"
                               : "Attack, detection and isolation loop";
    CLI::App* sub = experiment->add_subcommand(kind, blurb);
    sub->add_option("--scenario", experiment_args.scenario_path,
                    "Scenario JSON path")
        ->required();
    sub->add_option("--out", experiment_args.out_dir,
                    "Report output directory");
    sub->callback([&experiment_kind, kind] { experiment_kind = kind; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (rank->parsed()) {
      return run_rank(rank_args);
    }
    if (route->parsed()) {
      return run_route(route_args);
    }
    if (schedule->parsed()) {
      return run_schedule(schedule_args);
    }
    if (attack->parsed()) {
      return run_attack(attack_args);
    }
    if (defend->parsed()) {
      return train->parsed() ? run_defend_train(train_args)
                             : run_defend_score(score_args);
    }
    if (experiment->parsed()) {
      return run_experiment(experiment_kind, experiment_args);
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
