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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mtcsim/scheduler.hpp"

using namespace mtcsim;

namespace {

/// n serial CNOTs on two qubits: depth == n by construction.
Circuit chain(std::size_t n) {
  Circuit c(2);
  for (std::size_t i = 0; i < n; ++i) {
    c.add(Gate::cnot(0, 1));
  }
  return c;
}

/// width-qubit circuit with an exact two-qubit share and depth ~ gates.
Circuit with_pm(std::size_t width, std::size_t two_q, std::size_t one_q) {
  Circuit c(width);
  for (std::size_t i = 0; i < two_q; ++i) {
    c.add(Gate::cnot(i % (width - 1), i % (width - 1) + 1));
  }
  for (std::size_t i = 0; i < one_q; ++i) {
    c.add(Gate::one_qubit("t", 0));
  }
  return c;
}

Job make_job(std::string id, std::string user, double usage,
             std::uint64_t arrival, Circuit circuit) {
  Job j;
  j.id = std::move(id);
  j.user = std::move(user);
  j.usage_score = usage;
  j.arrival_index = arrival;
  j.circuit = std::move(circuit);
  return j;
}

std::vector<std::string> ids_of(const std::vector<Job>& jobs) {
  std::vector<std::string> out;
  for (const Job& j : jobs) {
    out.push_back(j.id);
  }
  return out;
}

}  // namespace

TEST_CASE("fair-share ordering matches the worked queue") {
  std::vector<Job> jobs;
  const double usages[5] = {0.2, 0.3, 0.1, 0.1, 0.3};
  for (int i = 0; i < 5; ++i) {
    jobs.push_back(make_job("J" + std::to_string(i + 1), "u", usages[i],
                            static_cast<std::uint64_t>(i + 1), chain(3)));
  }
  const auto ordered = fair_share_order(jobs);
  CHECK(ids_of(ordered) ==
        std::vector<std::string>{"J3", "J4", "J1", "J2", "J5"});

  SUBCASE("equal usage falls back to FIFO") {
    for (Job& j : jobs) {
      j.usage_score = 0.4;
    }
    CHECK(ids_of(fair_share_order(jobs)) ==
          std::vector<std::string>{"J1", "J2", "J3", "J4", "J5"});
  }

  SUBCASE("single job is its own order") {
    const std::vector<Job> one{jobs[2]};
    CHECK(ids_of(fair_share_order(one)) == std::vector<std::string>{"J3"});
  }

  SUBCASE("output is a sorted permutation of the input") {
    std::mt19937_64 rng(4);
    std::vector<Job> noisy;
    for (int i = 0; i < 40; ++i) {
      noisy.push_back(make_job("n" + std::to_string(i), "u",
                               static_cast<double>(rng() % 7) / 10.0,
                               static_cast<std::uint64_t>(i), chain(2)));
    }
    const auto sorted = fair_share_order(noisy);
    REQUIRE(sorted.size() == noisy.size());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      CHECK(sorted[i].usage_score <= sorted[i + 1].usage_score);
      if (sorted[i].usage_score == sorted[i + 1].usage_score) {
        CHECK(sorted[i].arrival_index < sorted[i + 1].arrival_index);
      }
    }
    auto original_ids = ids_of(noisy);
    auto sorted_ids = ids_of(sorted);
    std::sort(original_ids.begin(), original_ids.end());
    std::sort(sorted_ids.begin(), sorted_ids.end());
    CHECK(original_ids == sorted_ids);
  }
}

TEST_CASE("priority grouping sizes and stamping") {
  const auto sizes_for = [](std::size_t n) {
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < n; ++i) {
      jobs.push_back(make_job("j" + std::to_string(i), "u", 0.0,
                              static_cast<std::uint64_t>(i), chain(1)));
    }
    const GroupSizes sizes = partition_priority_groups(jobs);
    // Stamped levels must be contiguous and agree with the sizes.
    for (std::size_t i = 0; i < n; ++i) {
      const PriorityLevel expected =
          i < sizes.high ? PriorityLevel::High
          : i < sizes.high + sizes.medium ? PriorityLevel::Medium
                                          : PriorityLevel::Low;
      CHECK(jobs[i].priority == expected);
    }
    return sizes;
  };

  CHECK(sizes_for(6) == GroupSizes{2, 2, 2});
  CHECK(sizes_for(5) == GroupSizes{2, 2, 1});
  CHECK(sizes_for(1) == GroupSizes{1, 0, 0});
  CHECK(sizes_for(0) == GroupSizes{0, 0, 0});
  for (std::size_t n = 1; n <= 30; ++n) {
    const GroupSizes s = sizes_for(n);
    CHECK(s.high + s.medium + s.low == n);
    CHECK(s.high == (n + 2) / 3);
    CHECK(s.high >= s.medium);
    CHECK(s.medium >= s.low);
  }
}

TEST_CASE("depth comparability window") {
  CHECK(depth_comparable(chain(100), chain(100), 0.2));
  CHECK_FALSE(depth_comparable(chain(100), chain(79), 0.2));
  CHECK(depth_comparable(chain(100), chain(80), 0.2));  // boundary inclusive
  CHECK(depth_comparable(chain(80), chain(100), 0.2));  // symmetric
  CHECK_THROWS_AS(static_cast<void>(depth_comparable(chain(1), chain(1), -0.1)),
                  std::invalid_argument);
}

TEST_CASE("priority-ranked allocation on the T-shaped line") {
  const CouplingGraph g = CouplingGraph::line5();
  const std::vector<Qubit> all = all_qubits(g);
  const Circuit four = random_circuit(4, 8, 0.5, 2);

  const auto high = allocate_qubits(four, g, all, PriorityLevel::High);
  REQUIRE(high.has_value());
  CHECK(*high == std::vector<Qubit>{0, 1, 2, 3});

  const auto medium = allocate_qubits(four, g, all, PriorityLevel::Medium);
  REQUIRE(medium.has_value());
  CHECK(*medium == std::vector<Qubit>{0, 1, 2, 3});

  const auto low = allocate_qubits(four, g, all, PriorityLevel::Low);
  REQUIRE(low.has_value());
  CHECK(*low == std::vector<Qubit>{1, 2, 3, 4});

  SUBCASE("no allocation that exceeds the hardware") {
    const Circuit six = random_circuit(6, 6, 0.5, 2);
    CHECK_FALSE(allocate_qubits(six, g, all, PriorityLevel::High).has_value());
  }

  SUBCASE("no allocation when the free pool is fragmented") {
    const Circuit two = random_circuit(2, 4, 0.5, 2);
    CHECK_FALSE(
        allocate_qubits(two, g, {0, 4}, PriorityLevel::High).has_value());
  }
}

TEST_CASE("batch selection seeds, admits and tie-breaks") {
  SUBCASE("single five-qubit job takes the whole line") {
    std::vector<Job> queue{
        make_job("solo5", "u", 0.0, 0, random_circuit(5, 10, 0.4, 1))};
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    const SelectResult r = select_batch(queue, CouplingGraph::line5());
    REQUIRE(r.batch.entries.size() == 1);
    CHECK(r.batch.entries[0].job_id == "solo5");
    CHECK(r.batch.entries[0].allocation ==
          std::vector<Qubit>{0, 1, 2, 3, 4});
    CHECK(queue.empty());
  }

  SUBCASE("comparable jobs share the hardware disjointly") {
    Circuit four(4);
    four.add(Gate::cnot(0, 1));
    four.add(Gate::cnot(1, 2));
    four.add(Gate::cnot(2, 3));
    Circuit one(1);
    for (int i = 0; i < 3; ++i) {
      one.add(Gate::one_qubit("x", 0));
    }
    std::vector<Job> queue{make_job("big", "u1", 0.0, 0, four),
                           make_job("small", "u2", 0.0, 1, one)};
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    const SelectResult r = select_batch(queue, CouplingGraph::line5());
    REQUIRE(r.batch.entries.size() == 2);
    const auto* big = r.batch.allocation_of("big");
    const auto* small = r.batch.allocation_of("small");
    REQUIRE(big != nullptr);
    REQUIRE(small != nullptr);
    CHECK(*big == std::vector<Qubit>{0, 1, 2, 3});
    CHECK(*small == std::vector<Qubit>{4});
    CHECK(queue.empty());
  }

  SUBCASE("higher PM wins a same-allocation contention") {
    const CouplingGraph g = CouplingGraph::grid20();
    // Seed (2q) takes {0,1}; the two 3q rivals both want {2,3,4}.
    std::vector<Job> queue{
        make_job("seed", "u0", 0.0, 0, with_pm(2, 5, 5)),
        make_job("meek", "u1", 0.1, 1, with_pm(3, 4, 6)),   // PM 0.4
        make_job("eager", "u2", 0.1, 2, with_pm(3, 9, 1)),  // PM 0.9
        make_job("f1", "u3", 0.9, 3, chain(500)),
        make_job("f2", "u4", 0.9, 4, chain(500)),
        make_job("f3", "u5", 0.9, 5, chain(500)),
        make_job("f4", "u6", 0.9, 6, chain(500))};
    queue = fair_share_order(std::move(queue));
    const GroupSizes sizes = partition_priority_groups(queue);
    REQUIRE(sizes.high == 3);  // seed and both rivals
    const SelectResult r = select_batch(queue, g);
    const auto* eager = r.batch.allocation_of("eager");
    REQUIRE(eager != nullptr);
    CHECK(*eager == std::vector<Qubit>{2, 3, 4});
    const auto* meek = r.batch.allocation_of("meek");
    if (meek != nullptr) {
      CHECK(*meek != std::vector<Qubit>{2, 3, 4});
    }
  }

  SUBCASE("empty queue yields an empty batch") {
    std::vector<Job> queue;
    const SelectResult r = select_batch(queue, CouplingGraph::line5());
    CHECK(r.batch.entries.empty());
    CHECK(r.rejected.empty());
  }

  SUBCASE("oversized jobs are rejected, not retried forever") {
    std::vector<Job> queue{
        make_job("whale", "u", 0.0, 0, random_circuit(6, 6, 0.5, 1)),
        make_job("minnow", "u", 0.1, 1, chain(3))};
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    const SelectResult r = select_batch(queue, CouplingGraph::line5());
    REQUIRE(r.rejected.size() == 1);
    CHECK(r.rejected[0].id == "whale");
    REQUIRE(r.batch.entries.size() == 1);
    CHECK(r.batch.entries[0].job_id == "minnow");
  }

  SUBCASE("incomparable depth is never co-scheduled") {
    std::vector<Job> queue{make_job("short", "u1", 0.0, 0, chain(10)),
                           make_job("long", "u2", 0.1, 1, chain(500))};
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    const SelectResult r = select_batch(queue, CouplingGraph::line5());
    REQUIRE(r.batch.entries.size() == 1);
    CHECK(r.batch.entries[0].job_id == "short");
    REQUIRE(queue.size() == 1);
    CHECK(queue[0].id == "long");
  }

  SUBCASE("solo seed runs alone; solo candidates wait") {
    std::vector<Job> queue{make_job("quarantined", "u1", 0.0, 0, chain(10)),
                           make_job("normal", "u2", 0.1, 1, chain(10))};
    queue[0].solo = true;
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    SelectResult r = select_batch(queue, CouplingGraph::line5());
    REQUIRE(r.batch.entries.size() == 1);
    CHECK(r.batch.entries[0].job_id == "quarantined");

    // Solo job behind a normal seed is skipped, not co-admitted.
    std::vector<Job> queue2{make_job("normal", "u2", 0.0, 0, chain(10)),
                            make_job("quarantined", "u1", 0.1, 1, chain(10))};
    queue2[1].solo = true;
    queue2 = fair_share_order(std::move(queue2));
    partition_priority_groups(queue2);
    r = select_batch(queue2, CouplingGraph::line5());
    REQUIRE(r.batch.entries.size() == 1);
    CHECK(r.batch.entries[0].job_id == "normal");
    REQUIRE(queue2.size() == 1);
    CHECK(queue2[0].id == "quarantined");
  }
}

TEST_CASE("PM comparison is invariant under gate duplication") {
  const Circuit a = with_pm(3, 4, 6);
  const Circuit b = with_pm(3, 9, 1);
  Circuit a2(3);
  Circuit b2(3);
  for (int rep = 0; rep < 2; ++rep) {
    for (const Gate& g : a) {
      a2.add(g);
    }
    for (const Gate& g : b) {
      b2.add(g);
    }
  }
  CHECK(priority_metric(a) == priority_metric(a2));
  CHECK(priority_metric(b) == priority_metric(b2));
  CHECK((priority_metric(a) < priority_metric(b)) ==
        (priority_metric(a2) < priority_metric(b2)));
}

TEST_CASE("batch validity holds over randomized queues") {
  const CouplingGraph g = CouplingGraph::grid20();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<Job> queue;
    const std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t width = 1 + rng() % 6;
      const std::size_t gates = 5 + rng() % 30;
      const double fraction = width == 1 ? 0.0 : 0.5;
      queue.push_back(make_job(
          "t" + std::to_string(trial) + "-" + std::to_string(i),
          "user" + std::to_string(rng() % 4),
          static_cast<double>(rng() % 100) / 100.0, i,
          random_circuit(width, gates, fraction, rng())));
    }
    queue = fair_share_order(std::move(queue));
    partition_priority_groups(queue);
    const std::size_t before = queue.size();
    SchedulerConfig cfg;
    const SelectResult r = select_batch(queue, g, cfg);
    REQUIRE(!r.batch.entries.empty());
    CHECK(queue.size() + r.batch.entries.size() + r.rejected.size() ==
          before);

    std::set<Qubit> used;
    for (const BatchEntry& entry : r.batch.entries) {
      CHECK(is_connected_subset(g, entry.allocation));
      for (const Qubit q : entry.allocation) {
        CHECK(used.insert(q).second);  // pairwise disjoint
        CHECK(q < g.num_qubits());
      }
    }
    // No admitted job remains in the queue.
    for (const Job& job : queue) {
      CHECK_FALSE(r.batch.contains(job.id));
    }
  }
}

TEST_CASE("usage accounting closes the fair-share loop") {
  const Circuit c = chain(4);

  SUBCASE("no executed batch leaves the queue untouched") {
    std::vector<Job> queue{make_job("a", "u1", 0.3, 0, c),
                          make_job("b", "u2", 0.7, 1, c)};
    const std::vector<Job> before = queue;
    update_usage(queue, {});
    CHECK(ids_of(queue) == ids_of(before));
    CHECK(queue[0].usage_score == before[0].usage_score);
    CHECK(queue[1].usage_score == before[1].usage_score);
  }

  SUBCASE("a lone executor climbs to the top of the usage table") {
    std::vector<Job> queue{make_job("a2", "u1", 0.2, 2, c),
                          make_job("b2", "u2", 0.5, 3, c)};
    update_usage(queue, {{"u1", 40.0}});
    REQUIRE(queue.size() == 2);
    double u1 = 0.0;
    double u2 = 0.0;
    for (const Job& j : queue) {
      (j.user == "u1" ? u1 : u2) = j.usage_score;
    }
    CHECK(u1 >= u2);
    CHECK(u1 + u2 == doctest::Approx(1.0));
  }

  SUBCASE("equal costs mean equal increments") {
    std::vector<Job> queue{make_job("a", "u1", 0.1, 0, c),
                          make_job("b", "u2", 0.1, 1, c),
                          make_job("c", "u3", 0.1, 2, c)};
    update_usage(queue, {{"u1", 7.0}, {"u2", 7.0}});
    double scores[3] = {};
    for (const Job& j : queue) {
      if (j.user == "u1") scores[0] = j.usage_score;
      if (j.user == "u2") scores[1] = j.usage_score;
      if (j.user == "u3") scores[2] = j.usage_score;
    }
    CHECK(scores[0] == doctest::Approx(scores[1]));
    CHECK(scores[0] > scores[2]);
  }

  SUBCASE("users who never execute never gain relative usage") {
    const CouplingGraph g = CouplingGraph::grid20();
    std::mt19937_64 rng(123);
    std::vector<Job> queue;
    for (std::size_t i = 0; i < 12; ++i) {
      queue.push_back(make_job("j" + std::to_string(i),
                               "user" + std::to_string(i % 5),
                               static_cast<double>(rng() % 50) / 100.0, i,
                               random_circuit(2 + rng() % 3, 10, 0.5,
                                              rng())));
    }
    for (int round = 0; round < 8 && !queue.empty(); ++round) {
      queue = fair_share_order(std::move(queue));
      partition_priority_groups(queue);
      std::map<std::string, double> before;
      for (const Job& j : queue) {
        before.emplace(j.user, j.usage_score);
      }
      std::map<std::string, std::pair<std::string, double>> info;
      for (const Job& j : queue) {
        info[j.id] = {j.user, static_cast<double>(j.circuit.num_gates())};
      }
      const SelectResult r = select_batch(queue, g);
      if (r.batch.entries.empty()) {
        break;
      }
      std::vector<std::pair<std::string, double>> costs;
      std::set<std::string> executed;
      for (const BatchEntry& e : r.batch.entries) {
        costs.push_back(info.at(e.job_id));
        executed.insert(info.at(e.job_id).first);
      }
      update_usage(queue, costs);
      for (const Job& j : queue) {
        if (executed.count(j.user) == 0) {
          CHECK(j.usage_score <= before.at(j.user) + 1e-12);
        }
      }
    }
  }
}
