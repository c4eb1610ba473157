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

#include <random>
#include <stdexcept>

#include "json.hpp"
#include "mtcsim/circuit.hpp"
#include "unitary_sim.hpp"

using namespace mtcsim;

namespace {

Circuit bell_pair_prep() {
  Circuit c(2);
  c.add(Gate::one_qubit("h", 0));
  c.add(Gate::one_qubit("h", 1));
  c.add(Gate::cnot(0, 1));
  return c;
}

}  // namespace

TEST_CASE("gate construction rejects malformed operands") {
  CHECK_THROWS_AS(Gate::cnot(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Gate::swap(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Gate::one_qubit("", 0), std::invalid_argument);
  CHECK_THROWS_AS(Gate::one_qubit("cnot", 0), std::invalid_argument);
  CHECK_THROWS_AS(Gate::one_qubit("SWAP", 0), std::invalid_argument);

  Circuit c(2);
  CHECK_THROWS_AS(c.add(Gate::one_qubit("h", 2)), std::out_of_range);
  CHECK_THROWS_AS(c.add(Gate::cnot(0, 2)), std::out_of_range);
  CHECK_THROWS_AS(Circuit(0), std::invalid_argument);
}

TEST_CASE("gate_stats counts and ASAP depth") {
  SUBCASE("empty circuit is all zeros") {
    CHECK(gate_stats(Circuit(3)) == GateStats{});
  }

  SUBCASE("serial CNOTs stack depth") {
    Circuit c(2);
    c.add(Gate::cnot(0, 1));
    c.add(Gate::cnot(0, 1));
    const GateStats s = gate_stats(c);
    CHECK(s.total == 2);
    CHECK(s.two_qubit == 2);
    CHECK(s.cnot == 2);
    CHECK(s.depth == 2);
  }

  SUBCASE("parallel 1q gates share a layer") {
    const GateStats s = gate_stats(bell_pair_prep());
    CHECK(s.total == 3);
    CHECK(s.two_qubit == 1);
    CHECK(s.depth == 2);
  }

  SUBCASE("independent gates do not interfere") {
    Circuit c(4);
    c.add(Gate::cnot(0, 1));
    c.add(Gate::cnot(2, 3));
    c.add(Gate::one_qubit("x", 0));
    CHECK(gate_stats(c).depth == 2);
  }
}

TEST_CASE("depth bounds for nonempty circuits") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit c = random_circuit(5, 40, 0.4, seed);
    const GateStats s = gate_stats(c);
    CHECK(s.depth >= 1);
    CHECK(s.depth <= s.total);
  }
}

TEST_CASE("priority metric is the two-qubit share") {
  SUBCASE("mixed circuit") {
    Circuit c(3);
    for (int i = 0; i < 4; ++i) {
      c.add(Gate::cnot(0, 1));
    }
    for (int i = 0; i < 6; ++i) {
      c.add(Gate::one_qubit("t", 2));
    }
    CHECK(priority_metric(c) == doctest::Approx(0.4));
  }

  SUBCASE("extremes") {
    Circuit ones(1);
    ones.add(Gate::one_qubit("x", 0));
    CHECK(priority_metric(ones) == 0.0);

    Circuit twos(2);
    twos.add(Gate::cnot(0, 1));
    twos.add(Gate::swap(0, 1));
    CHECK(priority_metric(twos) == 1.0);
  }

  SUBCASE("empty program is rejected") {
    CHECK_THROWS_AS(static_cast<void>(priority_metric(Circuit(2))),
                    std::invalid_argument);
  }

  SUBCASE("always within [0, 1]") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
      const double pm = priority_metric(random_circuit(4, 25, 0.3, seed));
      CHECK(pm >= 0.0);
      CHECK(pm <= 1.0);
    }
  }
}

TEST_CASE("random_circuit honors its contract") {
  SUBCASE("single qubit cannot host two-qubit gates") {
    const Circuit c = random_circuit(1, 10, 0.0, 3);
    CHECK(c.num_gates() == 10);
    CHECK(gate_stats(c).two_qubit == 0);
  }

  SUBCASE("deterministic per seed") {
    CHECK(random_circuit(6, 100, 0.5, 42) == random_circuit(6, 100, 0.5, 42));
    CHECK(random_circuit(6, 100, 0.5, 42) != random_circuit(6, 100, 0.5, 43));
  }

  SUBCASE("two-qubit share concentrates near the requested fraction") {
    // Frozen expectation: the per-seed mean over 100 seeds of the
    // two-qubit share of (6, 300, 0.5, seed) stays within 0.5 +/- 0.05.
    double total_share = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Circuit c = random_circuit(6, 300, 0.5, seed);
      total_share +=
          static_cast<double>(gate_stats(c).two_qubit) / 300.0;
    }
    const double mean_share = total_share / 100.0;
    CHECK(mean_share > 0.45);
    CHECK(mean_share < 0.55);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(static_cast<void>(random_circuit(0, 5, 0.0, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(random_circuit(2, 5, -0.1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(random_circuit(2, 5, 1.1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(random_circuit(1, 5, 0.5, 1)),
                    std::invalid_argument);
  }

  SUBCASE("operands stay in range") {
    const Circuit c = random_circuit(3, 200, 0.6, 9);
    for (const Gate& gate : c) {
      for (std::size_t i = 0; i < gate.num_operands(); ++i) {
        CHECK(gate.operand(i) < 3);
      }
    }
  }
}

TEST_CASE("decompose_swaps rewrites SWAP as 3 CNOTs") {
  SUBCASE("single SWAP") {
    Circuit c(2);
    c.add(Gate::swap(0, 1));
    const Circuit d = decompose_swaps(c);
    REQUIRE(d.num_gates() == 3);
    CHECK(d.gates()[0] == Gate::cnot(0, 1));
    CHECK(d.gates()[1] == Gate::cnot(1, 0));
    CHECK(d.gates()[2] == Gate::cnot(0, 1));
  }

  SUBCASE("mixed circuit count arithmetic") {
    Circuit c(3);
    for (int i = 0; i < 5; ++i) {
      c.add(Gate::cnot(0, 1));
    }
    c.add(Gate::swap(1, 2));
    c.add(Gate::swap(0, 2));
    const GateStats s = gate_stats(decompose_swaps(c));
    CHECK(s.cnot == 11);
    CHECK(s.swap == 0);
  }

  SUBCASE("SWAP-free circuits pass through") {
    const Circuit c = random_circuit(4, 50, 0.5, 11);
    CHECK(decompose_swaps(c) == c);
  }

  SUBCASE("count identity and depth growth on randomized inputs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
      Circuit c = random_circuit(4, 30, 0.4, rng());
      Circuit with_swaps(4);
      for (const Gate& gate : c) {
        with_swaps.add(gate);
        if (rng() % 4 == 0) {
          const Qubit a = static_cast<Qubit>(rng() % 4);
          const Qubit b = static_cast<Qubit>((a + 1 + rng() % 3) % 4);
          with_swaps.add(Gate::swap(a, b));
        }
      }
      const GateStats before = gate_stats(with_swaps);
      const GateStats after = gate_stats(decompose_swaps(with_swaps));
      CHECK(after.cnot == before.cnot + 3 * before.swap);
      CHECK(after.swap == 0);
      CHECK(after.depth >= before.depth);
    }
  }

  SUBCASE("decomposition preserves the unitary") {
    Circuit c(3);
    c.add(Gate::one_qubit("h", 0));
    c.add(Gate::swap(0, 2));
    c.add(Gate::cnot(2, 1));
    c.add(Gate::swap(1, 0));
    c.add(Gate::one_qubit("t", 1));
    const Circuit d = decompose_swaps(c);
    for (std::size_t basis = 0; basis < 8; ++basis) {
      CHECK(testing::states_close(testing::run_on_basis(c, basis),
                                  testing::run_on_basis(d, basis)));
    }
  }
}

TEST_CASE("JSON round trip") {
  const Circuit c = random_circuit(5, 30, 0.5, 21);
  nlohmann::json j;
  to_json(j, c);
  CHECK(j.at("num_qubits") == 5);
  const auto back = j.get<Circuit>();
  CHECK(back == c);

  SUBCASE("kind casing is tolerated, bad operands are not") {
    const nlohmann::json good = {
        {"num_qubits", 2},
        {"gates", {{{"kind", "CNOT"}, {"operands", {0, 1}}}}}};
    CHECK(good.get<Circuit>().num_gates() == 1);

    const nlohmann::json bad = {
        {"num_qubits", 2},
        {"gates", {{{"kind", "cnot"}, {"operands", {0}}}}}};
    CHECK_THROWS_AS(bad.get<Circuit>(), std::invalid_argument);
  }
}
