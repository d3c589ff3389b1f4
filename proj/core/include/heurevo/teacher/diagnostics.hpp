// Copyright 2026 The heurevo Authors.
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

#ifndef HEUREVO_TEACHER_DIAGNOSTICS_HPP_
#define HEUREVO_TEACHER_DIAGNOSTICS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heurevo/engine/rollout.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace heurevo::teacher {

class NoSampledStates : public std::invalid_argument {
 public:
  NoSampledStates() : std::invalid_argument("no sampled states to diagnose") {}
};

struct DisagreementCase {
  std::string state_digest;
  int step = 0;
  ActionId heuristic_action{};
  FeatureVector heuristic_features;
  ActionId teacher_action{};
  FeatureVector teacher_features;
  // Normalized teacher scores; absent for action-only teachers.
  std::optional<double> heuristic_score;
  std::optional<double> teacher_score;

  double gap() const {
    return teacher_score && heuristic_score ? *teacher_score - *heuristic_score : 0.0;
  }
};

struct DiagnosticsSummary {
  double align = 0.0;
  // Absent for action-only teachers.
  std::optional<double> value;
  std::optional<double> mean_percentile;
  std::size_t n_states = 0;
  std::vector<DisagreementCase> disagreements;
};

inline constexpr std::size_t kDefaultDisagreements = 8;

// Agreement of the heuristic's recorded choices with the teacher on every
// sampled state of `rollouts`. Keeps the `max_cases` disagreements with the
// largest normalized-score gap (earliest first among equal gaps; sampling
// order for action-only teachers). Throws NoSampledStates.
DiagnosticsSummary compute_diagnostics(const Teacher& teacher,
                                       const std::vector<RolloutResult>& rollouts,
                                       std::size_t max_cases = kDefaultDisagreements);

// Percentile of `chosen` among the candidates: share of the other
// candidates scored strictly lower; 1 for a singleton set.
double percentile_rank(const std::vector<double>& scores, std::size_t chosen);

}  // namespace heurevo::teacher

#endif  // HEUREVO_TEACHER_DIAGNOSTICS_HPP_
