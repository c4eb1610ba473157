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
#include <functional>

namespace mtcsim {

/**
 * Worker threads used by trial fan-out: the MTCSIM_WORKERS environment
 * variable when set to a positive integer, otherwise the hardware
 * concurrency, and never less than one.
 */
[[nodiscard]] std::size_t worker_count();

/**
 * Runs fn(0), ..., fn(n - 1) across worker_count() threads. Indices are
 * handed out atomically; the call returns after every index completes.
 * Results must be written to disjoint, index-addressed slots so that the
 * outcome is independent of scheduling. The first exception thrown by any
 * fn is rethrown on the calling thread after the pool drains.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mtcsim
