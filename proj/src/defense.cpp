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

#include "mtcsim/defense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "mtcsim/adversary.hpp"
#include "mtcsim/hardware.hpp"

namespace mtcsim {

std::array<double, 6> UserFeatures::as_array() const {
  return {request_frequency,          concurrency,
          priority_skew,              activity_burstiness,
          duration_priority_inversion, contention_rate};
}

namespace {

int priority_rank(PriorityLevel level) {
  switch (level) {
  case PriorityLevel::High:
    return 2;
  case PriorityLevel::Medium:
    return 1;
  case PriorityLevel::Low:
    return 0;
  }
  return 0;
}

double priority_value(PriorityLevel level) {
  return static_cast<double>(priority_rank(level) - 1);
}

bool time_overlap(const JobRecord& a, const JobRecord& b) {
  return a.submit < b.finish && b.submit < a.finish;
}

bool share_qubit(const JobRecord& a, const JobRecord& b) {
  for (const Qubit qa : a.qubits) {
    for (const Qubit qb : b.qubits) {
      if (qa == qb) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

UserFeatures extract_features(const JobLog& log, const std::string& user,
                              double window_days) {
  if (window_days <= 0.0) {
    throw std::invalid_argument("window must be positive");
  }
  UserFeatures f;
  const auto it = log.users.find(user);
  if (it == log.users.end() || it->second.empty()) {
    return f;
  }
  std::vector<JobRecord> records = it->second;
  std::sort(records.begin(), records.end(),
            [](const JobRecord& lhs, const JobRecord& rhs) {
              return lhs.submit < rhs.submit;
            });
  const auto n = static_cast<double>(records.size());

  f.request_frequency = n / window_days;

  // Peak number of simultaneously pending jobs; a job finishing exactly
  // when another starts does not overlap it.
  std::vector<std::pair<double, int>> events;
  for (const JobRecord& r : records) {
    events.emplace_back(r.submit, +1);
    events.emplace_back(std::max(r.finish, r.submit), -1);
  }
  std::sort(events.begin(), events.end(),
            [](const auto& lhs, const auto& rhs) {
              if (lhs.first != rhs.first) {
                return lhs.first < rhs.first;
              }
              return lhs.second < rhs.second;
            });
  int running = 0;
  int peak = 0;
  for (const auto& [time, delta] : events) {
    running += delta;
    peak = std::max(peak, running);
  }
  f.concurrency = static_cast<double>(peak);

  double skew = 0.0;
  for (const JobRecord& r : records) {
    skew += priority_value(r.priority);
  }
  f.priority_skew = skew / n;

  // Gap sequence padded with the window edges, so a quiet window around a
  // single burst registers as high variation.
  std::vector<double> gaps;
  gaps.push_back(std::max(records.front().submit, 0.0));
  for (std::size_t i = 1; i < records.size(); ++i) {
    gaps.push_back(records[i].submit - records[i - 1].submit);
  }
  gaps.push_back(std::max(window_days - records.back().submit, 0.0));
  const double gap_mean =
      std::accumulate(gaps.begin(), gaps.end(), 0.0) /
      static_cast<double>(gaps.size());
  if (gap_mean > 0.0) {
    double var = 0.0;
    for (const double gap : gaps) {
      var += (gap - gap_mean) * (gap - gap_mean);
    }
    var /= static_cast<double>(gaps.size());
    f.activity_burstiness = std::sqrt(var) / gap_mean;
  }

  std::size_t inversions = 0;
  std::size_t cross_pairs = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      const int ri = priority_rank(records[i].priority);
      const int rj = priority_rank(records[j].priority);
      if (ri == rj) {
        continue;
      }
      ++cross_pairs;
      const JobRecord& lower = ri < rj ? records[i] : records[j];
      const JobRecord& higher = ri < rj ? records[j] : records[i];
      if (lower.finish - lower.submit < higher.finish - higher.submit) {
        ++inversions;
      }
    }
  }
  if (cross_pairs > 0) {
    f.duration_priority_inversion =
        static_cast<double>(inversions) / static_cast<double>(cross_pairs);
  }

  std::size_t contended = 0;
  for (const JobRecord& mine : records) {
    bool hit = false;
    for (const auto& [other_user, other_records] : log.users) {
      if (other_user == user) {
        continue;
      }
      for (const JobRecord& theirs : other_records) {
        if (time_overlap(mine, theirs) && share_qubit(mine, theirs)) {
          hit = true;
          break;
        }
      }
      if (hit) {
        break;
      }
    }
    if (hit) {
      ++contended;
    }
  }
  f.contention_rate = static_cast<double>(contended) / n;

  return f;
}

std::map<std::string, UserFeatures> extract_all_features(const JobLog& log,
                                                         double window_days) {
  std::map<std::string, UserFeatures> out;
  for (const auto& [user, records] : log.users) {
    out.emplace(user, extract_features(log, user, window_days));
  }
  return out;
}

namespace {

double squared_distance(const std::array<double, 6>& a,
                        const std::array<double, 6>& b) {
  double d2 = 0.0;
  for (std::size_t d = 0; d < 6; ++d) {
    const double diff = a[d] - b[d];
    d2 += diff * diff;
  }
  return d2;
}

double kernel(const std::array<double, 6>& a, const std::array<double, 6>& b,
              double bandwidth) {
  return std::exp(-squared_distance(a, b) / (2.0 * bandwidth * bandwidth));
}

}  // namespace

AnomalyModel train(const std::vector<UserFeatures>& normal, double nu,
                   std::uint64_t seed) {
  const std::size_t n = normal.size();
  if (n < 10) {
    throw std::invalid_argument(
        "insufficient data: at least 10 normal samples required");
  }
  if (!(nu > 0.0) || !(nu < 1.0)) {
    throw std::invalid_argument("nu must lie strictly between 0 and 1");
  }

  AnomalyModel model;
  model.nu = nu;

  std::vector<std::array<double, 6>> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = normal[i].as_array();
  }
  for (std::size_t d = 0; d < 6; ++d) {
    double mean = 0.0;
    for (const auto& x : raw) {
      mean += x[d];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& x : raw) {
      var += (x[d] - mean) * (x[d] - mean);
    }
    var /= static_cast<double>(n);
    model.scaler.mean[d] = mean;
    model.scaler.deviation[d] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  std::vector<std::array<double, 6>> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < 6; ++d) {
      points[i][d] =
          (raw[i][d] - model.scaler.mean[d]) / model.scaler.deviation[d];
    }
  }

  std::vector<double> distances;
  distances.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      distances.push_back(std::sqrt(squared_distance(points[i], points[j])));
    }
  }
  std::sort(distances.begin(), distances.end());
  const std::size_t mid = distances.size() / 2;
  double bandwidth = distances.empty() ? 1.0
                     : distances.size() % 2 == 1
                         ? distances[mid]
                         : 0.5 * (distances[mid - 1] + distances[mid]);
  if (!(bandwidth > 0.0)) {
    bandwidth = 1.0;
  }
  model.kernel_bandwidth = bandwidth;

  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(points[i], points[j], bandwidth);
      K[i][j] = v;
      K[j][i] = v;
    }
  }

  // Dual: minimize 0.5 a^T K a over the simplex slice
  // {0 <= a_i <= 1/(nu n), sum a_i = 1} by pairwise moves that preserve
  // the equality constraint.
  const double box = 1.0 / (nu * static_cast<double>(n));
  std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      g += K[i][j] * alpha[j];
    }
    grad[i] = g;
  }
  auto objective = [&] {
    double J = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      J += alpha[i] * grad[i];
    }
    return 0.5 * J;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  std::mt19937_64 rng(seed);
  double previous = objective();
  for (std::size_t sweep = 0; sweep < 10000; ++sweep) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (const auto& [i, j] : pairs) {
      const double curvature = K[i][i] + K[j][j] - 2.0 * K[i][j];
      if (curvature <= 1e-12) {
        continue;
      }
      double delta = -(grad[i] - grad[j]) / curvature;
      const double lo = std::max(-alpha[i], alpha[j] - box);
      const double hi = std::min(box - alpha[i], alpha[j]);
      delta = std::clamp(delta, lo, hi);
      if (std::abs(delta) < 1e-15) {
        continue;
      }
      alpha[i] += delta;
      alpha[j] -= delta;
      for (std::size_t t = 0; t < n; ++t) {
        grad[t] += delta * (K[t][i] - K[t][j]);
      }
    }
    const double current = objective();
    if (std::abs(previous - current) < 1e-6) {
      break;
    }
    previous = current;
  }

  // grad now holds each training point's raw decision value sum_j a_j K_ij.
  std::vector<double> values = grad;
  std::sort(values.begin(), values.end());
  const auto below = static_cast<std::size_t>(nu * static_cast<double>(n));
  model.offset = below == 0
                     ? values.front() - 1e-6
                     : 0.5 * (values[below - 1] + values[below]);

  model.support_points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.support_points.push_back({points[i], alpha[i]});
  }
  return model;
}

double score(const AnomalyModel& m, const UserFeatures& f) {
  std::array<double, 6> x = f.as_array();
  for (std::size_t d = 0; d < 6; ++d) {
    x[d] = (x[d] - m.scaler.mean[d]) / m.scaler.deviation[d];
  }
  double value = 0.0;
  for (const SupportPoint& p : m.support_points) {
    if (p.alpha > 0.0) {
      value += p.alpha * kernel(p.standardized, x, m.kernel_bandwidth);
    }
  }
  return value - m.offset;
}

std::vector<Job> respond(std::vector<Job> queue,
                         const std::string& flagged_user,
                         ResponsePolicy policy) {
  if (queue.empty()) {
    return queue;
  }
  const bool known =
      std::any_of(queue.begin(), queue.end(),
                  [&](const Job& job) { return job.user == flagged_user; });
  if (!known) {
    throw std::invalid_argument("unknown user: " + flagged_user);
  }
  if (policy == ResponsePolicy::Isolate) {
    for (Job& job : queue) {
      if (job.user == flagged_user) {
        job.solo = true;
      }
    }
  } else {
    double max_usage = queue.front().usage_score;
    for (const Job& job : queue) {
      max_usage = std::max(max_usage, job.usage_score);
    }
    for (Job& job : queue) {
      if (job.user == flagged_user) {
        job.usage_score = max_usage + 1e-3;
      }
    }
  }
  return queue;
}

LabeledCorpus synthetic_user_corpus(std::size_t normal_users,
                                    std::size_t attackers,
                                    std::uint64_t seed) {
  LabeledCorpus corpus;
  corpus.window_days = 1.0;
  std::mt19937_64 rng(seed);

  std::uniform_int_distribution<int> job_count(3, 8);
  std::uniform_real_distribution<double> jitter(-0.04, 0.04);
  std::uniform_real_distribution<double> normal_duration(0.005, 0.04);
  std::uniform_int_distribution<int> priority_die(0, 2);
  std::uniform_int_distribution<int> request_size(1, 5);
  std::uniform_int_distribution<Qubit> any_qubit(0, 19);

  for (std::size_t u = 0; u < normal_users; ++u) {
    std::string name = "user-";
    if (u < 100) {
      name += u < 10 ? "00" : "0";
    }
    name += std::to_string(u);
    const int jobs = job_count(rng);
    std::vector<JobRecord> records;
    for (int i = 0; i < jobs; ++i) {
      JobRecord r;
      const double base =
          static_cast<double>(i + 1) / static_cast<double>(jobs + 1);
      r.submit = std::clamp(base + jitter(rng), 0.0, 0.98);
      r.finish = r.submit + normal_duration(rng);
      r.priority = static_cast<PriorityLevel>(priority_die(rng));
      const int size = request_size(rng);
      while (static_cast<int>(r.qubits.size()) < size) {
        const Qubit q = any_qubit(rng);
        if (std::find(r.qubits.begin(), r.qubits.end(), q) ==
            r.qubits.end()) {
          r.qubits.push_back(q);
        }
      }
      std::sort(r.qubits.begin(), r.qubits.end());
      records.push_back(r);
    }
    std::sort(records.begin(), records.end(),
              [](const JobRecord& lhs, const JobRecord& rhs) {
                return lhs.submit < rhs.submit;
              });
    corpus.log.users.emplace(std::move(name), std::move(records));
  }

  if (attackers > 0) {
    const CouplingGraph g = CouplingGraph::grid20();
    const Calibration cal = Calibration::synthetic(g, seed);
    const std::vector<Qubit> targets = select_target_qubits(
        g, cal, QualityWeights{}, 5, RankDirection::Ascending);
    std::uniform_real_distribution<double> burst_start(0.15, 0.75);
    std::uniform_real_distribution<double> flood_duration(0.01, 0.03);
    for (std::size_t a = 0; a < attackers; ++a) {
      std::string name = "flood-" + std::to_string(a);
      const std::vector<Job> flood = generate_kitchen_sink_jobs(
          targets, 3, {30, 34, 38},
          seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)), name);
      const double start = burst_start(rng);
      std::vector<JobRecord> records;
      for (std::size_t i = 0; i < flood.size(); ++i) {
        JobRecord r;
        r.submit = start + static_cast<double>(i) * 3e-4;
        r.finish = r.submit + flood_duration(rng);
        r.priority = static_cast<PriorityLevel>(i / 3);
        const std::size_t width = flood[i].circuit.num_qubits();
        r.qubits.assign(targets.begin(),
                        targets.begin() +
                            static_cast<std::ptrdiff_t>(
                                std::min(width, targets.size())));
        records.push_back(std::move(r));
      }
      corpus.attacker_users.push_back(name);
      corpus.log.users.emplace(std::move(name), std::move(records));
    }
  }
  return corpus;
}

PriorityLevel priority_from_name(const std::string& name) {
  if (name == "high") {
    return PriorityLevel::High;
  }
  if (name == "medium") {
    return PriorityLevel::Medium;
  }
  if (name == "low") {
    return PriorityLevel::Low;
  }
  throw std::invalid_argument("unknown priority: " + name);
}

void to_json(nlohmann::json& j, const JobRecord& r) {
  j = nlohmann::json{{"submit", r.submit},
                     {"finish", r.finish},
                     {"priority", priority_name(r.priority)},
                     {"qubits", r.qubits}};
}

void from_json(const nlohmann::json& j, JobRecord& r) {
  r.submit = j.at("submit").get<double>();
  r.finish = j.at("finish").get<double>();
  r.priority = priority_from_name(j.at("priority").get<std::string>());
  r.qubits = j.value("qubits", std::vector<Qubit>{});
}

void to_json(nlohmann::json& j, const JobLog& log) {
  j = nlohmann::json{{"users", log.users}};
}

void from_json(const nlohmann::json& j, JobLog& log) {
  log.users =
      j.at("users")
          .get<std::map<std::string, std::vector<JobRecord>>>();
}

void to_json(nlohmann::json& j, const UserFeatures& f) {
  j = nlohmann::json{
      {"request_frequency", f.request_frequency},
      {"concurrency", f.concurrency},
      {"priority_skew", f.priority_skew},
      {"activity_burstiness", f.activity_burstiness},
      {"duration_priority_inversion", f.duration_priority_inversion},
      {"contention_rate", f.contention_rate}};
}

void from_json(const nlohmann::json& j, UserFeatures& f) {
  f.request_frequency = j.at("request_frequency").get<double>();
  f.concurrency = j.at("concurrency").get<double>();
  f.priority_skew = j.at("priority_skew").get<double>();
  f.activity_burstiness = j.at("activity_burstiness").get<double>();
  f.duration_priority_inversion =
      j.at("duration_priority_inversion").get<double>();
  f.contention_rate = j.at("contention_rate").get<double>();
}

void to_json(nlohmann::json& j, const AnomalyModel& m) {
  nlohmann::json points = nlohmann::json::array();
  for (const SupportPoint& p : m.support_points) {
    points.push_back({{"alpha", p.alpha}, {"x", p.standardized}});
  }
  j = nlohmann::json{{"support_points", std::move(points)},
                     {"kernel_bandwidth", m.kernel_bandwidth},
                     {"offset", m.offset},
                     {"nu", m.nu},
                     {"scaler",
                      {{"mean", m.scaler.mean},
                       {"deviation", m.scaler.deviation}}}};
}

void from_json(const nlohmann::json& j, AnomalyModel& m) {
  m.support_points.clear();
  for (const auto& p : j.at("support_points")) {
    SupportPoint point;
    point.alpha = p.at("alpha").get<double>();
    point.standardized = p.at("x").get<std::array<double, 6>>();
    m.support_points.push_back(point);
  }
  m.kernel_bandwidth = j.at("kernel_bandwidth").get<double>();
  m.offset = j.at("offset").get<double>();
  m.nu = j.value("nu", 0.1);
  m.scaler.mean = j.at("scaler").at("mean").get<std::array<double, 6>>();
  m.scaler.deviation =
      j.at("scaler").at("deviation").get<std::array<double, 6>>();
}

}  // namespace mtcsim
