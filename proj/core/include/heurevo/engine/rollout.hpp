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

#ifndef HEUREVO_ENGINE_ROLLOUT_HPP_
#define HEUREVO_ENGINE_ROLLOUT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "heurevo/dsl/program.hpp"
#include "heurevo/engine/environment.hpp"
#include "heurevo/engine/instance.hpp"

namespace heurevo {

// Must be safe to call concurrently when used with evaluate_* helpers.
using ActionSelector = std::function<ActionId(const EpisodeState&)>;

ActionSelector program_selector(dsl::HeuristicProgram program);

inline constexpr double kInvalidObjective = std::numeric_limits<double>::infinity();

// Which visited states to keep for teacher queries. With stride k a random
// phase in [0, k) is drawn from the trace seed and every k-th state from
// there is kept, up to `cap`. stride 0 picks k = ceil(horizon / cap).
struct SamplingPlan {
  std::size_t stride = 0;
  std::size_t cap = 64;

  static SamplingPlan none() { return {1, 0}; }
};

struct SampledState {
  EpisodeState state;
  ActionId chosen{};
};

struct RolloutResult {
  double objective = kInvalidObjective;  // minimization form
  int steps = 0;
  std::vector<SampledState> sampled_states;
  std::uint64_t trace_seed = 0;
  bool valid = false;
  std::string failure;  // set when !valid
};

// Drives `env` to termination. A selector answer outside the candidate set
// aborts the episode (valid = false, objective = +inf).
RolloutResult run_episode(Environment& env, const ActionSelector& policy,
                          const SamplingPlan& plan, std::uint64_t trace_seed);

RolloutResult rollout(const ActionSelector& policy, const ProblemInstance& instance,
                      const SamplingPlan& plan, std::uint64_t trace_seed,
                      const TaskOptions& options = {});

// Trace seed of instance i in a set.
std::uint64_t instance_trace_seed(const InstanceSet& set, std::size_t index);

// One rollout per instance, results in instance order regardless of worker
// scheduling.
std::vector<RolloutResult> rollout_set(const ActionSelector& policy, const InstanceSet& set,
                                       const SamplingPlan& plan, const TaskOptions& options = {},
                                       std::size_t workers = 1);

// Mean objective; +inf if any episode is invalid.
double mean_objective(const std::vector<RolloutResult>& results);

double evaluate_objective(const ActionSelector& policy, const InstanceSet& set,
                          const TaskOptions& options = {}, std::size_t workers = 1);

}  // namespace heurevo

#endif  // HEUREVO_ENGINE_ROLLOUT_HPP_
