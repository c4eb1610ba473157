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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "mtcsim/circuit.hpp"
#include "mtcsim/scheduler.hpp"

namespace mtcsim {

/**
 * One submitted program as the queue monitor sees it. Times are in days
 * from the start of the observation window; `qubits` is the requested (or
 * granted) physical set used for contention analysis.
 */
struct JobRecord {
  double submit = 0.0;
  double finish = 0.0;
  PriorityLevel priority = PriorityLevel::Low;
  std::vector<Qubit> qubits;
};

/// Per-user submission history.
struct JobLog {
  std::map<std::string, std::vector<JobRecord>> users;
};

/**
 * The six per-user behavior signals the anomaly detector consumes.
 *
 * request_frequency: jobs per day over the window.
 * concurrency: most of the user's own jobs pending at one instant.
 * priority_skew: mean of +1 (high) / 0 (medium) / -1 (low), in [-1, 1].
 * activity_burstiness: coefficient of variation of the gap sequence
 *   (window start -> first submit, inter-submission gaps, last submit ->
 *   window end); evenly spaced submissions give exactly 0, a single burst
 *   inside a quiet window gives a value well above 1.
 * duration_priority_inversion: fraction of cross-priority job pairs where
 *   the lower-priority job had the shorter turnaround.
 * contention_rate: fraction of the user's jobs that overlap another
 *   user's job in time while sharing at least one qubit.
 */
struct UserFeatures {
  double request_frequency = 0.0;
  double concurrency = 0.0;
  double priority_skew = 0.0;
  double activity_burstiness = 0.0;
  double duration_priority_inversion = 0.0;
  double contention_rate = 0.0;

  [[nodiscard]] std::array<double, 6> as_array() const;
  bool operator==(const UserFeatures&) const = default;
};

/**
 * Computes the feature vector of `user` from the log over a window of
 * `window_days`. Users absent from the log (or with an empty history)
 * yield the all-zeros vector. Records are sorted by submit time before
 * analysis, so unordered logs are accepted.
 */
[[nodiscard]] UserFeatures extract_features(const JobLog& log,
                                            const std::string& user,
                                            double window_days);

/// Features of every user in the log.
[[nodiscard]] std::map<std::string, UserFeatures> extract_all_features(
    const JobLog& log, double window_days);

struct FeatureScaler {
  std::array<double, 6> mean{};
  std::array<double, 6> deviation{};
};

struct SupportPoint {
  std::array<double, 6> standardized{};
  double alpha = 0.0;
};

/**
 * A trained one-class boundary: radial kernel over standardized features.
 * The decision value of a point x is sum_i alpha_i * k(x_i, x) - offset;
 * negative values are anomalous. Immutable once trained; safe to score
 * from many threads.
 */
struct AnomalyModel {
  std::vector<SupportPoint> support_points;
  double kernel_bandwidth = 1.0;
  double offset = 0.0;
  FeatureScaler scaler;
  double nu = 0.1;
};

/**
 * Fits the one-class boundary on normal behavior only.
 *
 * Features are standardized per dimension; the radial kernel bandwidth is
 * the median pairwise distance between standardized points. Coefficients
 * solve the box-constrained dual (0 <= alpha_i <= 1/(nu*n), sum = 1) by
 * deterministic pairwise coordinate descent, stopping when the dual
 * objective moves by less than 1e-6 over a sweep or after 10,000 sweeps.
 * The offset is placed at the floor(nu*n) quantile of training decision
 * values, so about a nu-fraction of the training set scores negative.
 *
 * Throws std::invalid_argument for fewer than 10 samples or nu outside
 * (0, 1). Deterministic: same data and seed give an identical model.
 */
[[nodiscard]] AnomalyModel train(const std::vector<UserFeatures>& normal,
                                 double nu, std::uint64_t seed);

/// Decision value of one user; negative means anomalous.
[[nodiscard]] double score(const AnomalyModel& m, const UserFeatures& f);

enum class ResponsePolicy {
  /// The user's jobs run alone: each becomes a single-job batch.
  Isolate,
  /// The user's usage score is pushed past the queue maximum, so
  /// fair-share ordering places them last.
  Deprioritize,
};

/**
 * Applies the response to every job of `flagged_user`. An empty queue is
 * returned unchanged; a nonempty queue without the user throws
 * std::invalid_argument.
 */
[[nodiscard]] std::vector<Job> respond(std::vector<Job> queue,
                                       const std::string& flagged_user,
                                       ResponsePolicy policy);

/**
 * Seeded benchmark population over a one-day window: `normal_users`
 * steady users (a handful of spread-out jobs, mixed priorities, small
 * random qubit requests) plus `attackers` flood users whose job lists
 * come from the kitchen-sink generator, submitted as one tight burst on
 * the best-connected qubits.
 */
struct LabeledCorpus {
  JobLog log;
  std::vector<std::string> attacker_users;
  double window_days = 1.0;
};

[[nodiscard]] LabeledCorpus synthetic_user_corpus(std::size_t normal_users,
                                                  std::size_t attackers,
                                                  std::uint64_t seed);

[[nodiscard]] PriorityLevel priority_from_name(const std::string& name);

void to_json(nlohmann::json& j, const JobRecord& r);
void from_json(const nlohmann::json& j, JobRecord& r);
void to_json(nlohmann::json& j, const JobLog& log);
void from_json(const nlohmann::json& j, JobLog& log);
void to_json(nlohmann::json& j, const UserFeatures& f);
void from_json(const nlohmann::json& j, UserFeatures& f);
void to_json(nlohmann::json& j, const AnomalyModel& m);
void from_json(const nlohmann::json& j, AnomalyModel& m);

}  // namespace mtcsim
