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

// Brute-force statevector simulator used as a routing oracle: a routed
// circuit must implement the original unitary up to the relabeling given
// by its initial and final layouts. Only for tests; cost is O(4^k).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtcsim/circuit.hpp"
#include "mtcsim/router.hpp"

namespace mtcsim::testing {

using Amplitude = std::complex<double>;
using State = std::vector<Amplitude>;

struct OneQubitMatrix {
  Amplitude m00, m01, m10, m11;
};

/// Fixed matrix per gate label. Unknown labels map to a label-hashed
/// unitary, so equivalence checks stay meaningful for any vocabulary.
inline OneQubitMatrix matrix_for(const std::string& label) {
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const Amplitude i{0.0, 1.0};
  if (label == "h") {
    return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
  }
  if (label == "x") {
    return {0.0, 1.0, 1.0, 0.0};
  }
  if (label == "y") {
    return {0.0, -i, i, 0.0};
  }
  if (label == "z") {
    return {1.0, 0.0, 0.0, -1.0};
  }
  if (label == "s") {
    return {1.0, 0.0, 0.0, i};
  }
  if (label == "t") {
    return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)};
  }
  // Deterministic distinct rotation for anything else.
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : label) {
    h = (h ^ static_cast<std::uint64_t>(c)) * 1099511628211ULL;
  }
  const double theta = static_cast<double>(h % 355) / 113.0;
  const double phi = static_cast<double>((h >> 17) % 628) / 100.0;
  const Amplitude e_phi = std::polar(1.0, phi);
  return {std::cos(theta), -std::sin(theta) * e_phi,
          std::sin(theta) * std::conj(e_phi), std::cos(theta)};
}

inline void apply_one_qubit(State& s, std::size_t q,
                            const OneQubitMatrix& m) {
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    if (idx & mask) {
      continue;
    }
    const Amplitude a = s[idx];
    const Amplitude b = s[idx | mask];
    s[idx] = m.m00 * a + m.m01 * b;
    s[idx | mask] = m.m10 * a + m.m11 * b;
  }
}

inline void apply_cnot(State& s, std::size_t control, std::size_t target) {
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    if ((idx & cmask) && !(idx & tmask)) {
      std::swap(s[idx], s[idx | tmask]);
    }
  }
}

inline void apply_swap_gate(State& s, std::size_t a, std::size_t b) {
  const std::size_t amask = std::size_t{1} << a;
  const std::size_t bmask = std::size_t{1} << b;
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    if ((idx & amask) && !(idx & bmask)) {
      std::swap(s[idx ^ amask ^ bmask], s[idx]);
    }
  }
}

inline void apply_circuit(State& s, const Circuit& c) {
  for (const Gate& gate : c.gates()) {
    switch (gate.kind()) {
      case GateKind::Cnot:
        apply_cnot(s, gate.operand(0), gate.operand(1));
        break;
      case GateKind::Swap:
        apply_swap_gate(s, gate.operand(0), gate.operand(1));
        break;
      case GateKind::OneQubit:
        apply_one_qubit(s, gate.operand(0), matrix_for(gate.label()));
        break;
    }
  }
}

/// U|basis> for a circuit of at most ~12 qubits.
inline State run_on_basis(const Circuit& c, std::size_t basis) {
  State s(std::size_t{1} << c.num_qubits(), Amplitude{0.0, 0.0});
  s.at(basis) = 1.0;
  apply_circuit(s, c);
  return s;
}

inline bool states_close(const State& a, const State& b, double tol = 1e-9) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (std::abs(a[idx] - b[idx]) > tol) {
      return false;
    }
  }
  return true;
}

/**
 * Exact unitary equivalence of a routed circuit with the original: for
 * every basis state, running the routed circuit on the initial-layout
 * embedding must equal the final-layout embedding of the original
 * circuit's output. SWAP insertion adds no phases, so the comparison
 * carries no global-phase slack.
 */
inline bool routed_equivalent(const Circuit& original, const Circuit& routed,
                              const Layout& initial, const Layout& final_,
                              const std::vector<Qubit>& allocation) {
  const std::size_t k = original.num_qubits();
  if (allocation.size() != k) {
    throw std::invalid_argument("allocation size must match circuit width");
  }
  std::map<Qubit, Qubit> compact;
  for (std::size_t idx = 0; idx < allocation.size(); ++idx) {
    compact.emplace(allocation[idx], static_cast<Qubit>(idx));
  }

  Circuit compacted(k);
  for (const Gate& gate : routed.gates()) {
    const auto remap = [&](std::size_t i) -> std::optional<Qubit> {
      const auto it = compact.find(static_cast<Qubit>(gate.operand(i)));
      return it == compact.end() ? std::nullopt
                                 : std::optional<Qubit>(it->second);
    };
    const auto a = remap(0);
    if (!a) {
      return false;  // routed circuit escaped its allocation
    }
    if (gate.kind() == GateKind::OneQubit) {
      compacted.add(Gate::one_qubit(gate.label(), *a));
      continue;
    }
    const auto b = remap(1);
    if (!b) {
      return false;
    }
    compacted.add(gate.kind() == GateKind::Cnot ? Gate::cnot(*a, *b)
                                                : Gate::swap(*a, *b));
  }

  std::vector<std::size_t> perm_in(k);
  std::vector<std::size_t> perm_out(k);
  for (std::size_t l = 0; l < k; ++l) {
    perm_in[l] = compact.at(initial.physical(l));
    perm_out[l] = compact.at(final_.physical(l));
  }

  const std::size_t dim = std::size_t{1} << k;
  for (std::size_t basis = 0; basis < dim; ++basis) {
    std::size_t embedded = 0;
    for (std::size_t l = 0; l < k; ++l) {
      if (basis & (std::size_t{1} << l)) {
        embedded |= std::size_t{1} << perm_in[l];
      }
    }
    const State actual = run_on_basis(compacted, embedded);

    const State logical = run_on_basis(original, basis);
    State expected(dim, Amplitude{0.0, 0.0});
    for (std::size_t p = 0; p < dim; ++p) {
      std::size_t m = 0;
      for (std::size_t l = 0; l < k; ++l) {
        if (p & (std::size_t{1} << perm_out[l])) {
          m |= std::size_t{1} << l;
        }
      }
      expected[p] = logical[m];
    }
    if (!states_close(actual, expected)) {
      return false;
    }
  }
  return true;
}

inline bool routed_equivalent(const Circuit& original,
                              const RoutingResult& result,
                              const Layout& initial,
                              const std::vector<Qubit>& allocation) {
  return routed_equivalent(original, result.routed, initial,
                           result.final_layout, allocation);
}

}  // namespace mtcsim::testing
