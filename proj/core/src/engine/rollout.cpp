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

#include "heurevo/engine/rollout.hpp"

#include <fmt/format.h>

#include "heurevo/util/parallel.hpp"
#include "heurevo/util/random.hpp"

namespace heurevo {

ActionSelector program_selector(dsl::HeuristicProgram program) {
  return [p = std::move(program)](const EpisodeState& s) { return dsl::select_action(p, s); };
}

RolloutResult run_episode(Environment& env, const ActionSelector& policy,
                          const SamplingPlan& plan, std::uint64_t trace_seed) {
  RolloutResult result;
  result.trace_seed = trace_seed;
  std::size_t stride = plan.stride;
  if (stride == 0 && plan.cap > 0) {
    stride = std::max<std::size_t>(1, (env.horizon_hint() + plan.cap - 1) / plan.cap);
  }
  std::size_t phase = 0;
  if (plan.cap > 0 && stride > 1) {
    Rng rng(mix_seed(trace_seed, 0x5a3b1e));
    phase = rng.below(stride);
  }
  std::size_t t = 0;
  while (!env.terminal()) {
    EpisodeState state = env.observe();
    const ActionId chosen = policy(state);
    if (!state.contains(chosen)) {
      result.failure = fmt::format("step {}: policy chose action {} outside the candidate set",
                                   t, to_int(chosen));
      result.steps = static_cast<int>(t);
      result.sampled_states.clear();
      return result;
    }
    env.step(chosen);
    if (result.sampled_states.size() < plan.cap && t >= phase && (t - phase) % stride == 0) {
      result.sampled_states.push_back({std::move(state), chosen});
    }
    ++t;
  }
  result.steps = static_cast<int>(t);
  result.objective = env.objective();
  result.valid = true;
  return result;
}

RolloutResult rollout(const ActionSelector& policy, const ProblemInstance& instance,
                      const SamplingPlan& plan, std::uint64_t trace_seed,
                      const TaskOptions& options) {
  auto env = make_environment(instance, options, trace_seed);
  return run_episode(*env, policy, plan, trace_seed);
}

std::uint64_t instance_trace_seed(const InstanceSet& set, std::size_t index) {
  return mix_seed(set.seed, index);
}

std::vector<RolloutResult> rollout_set(const ActionSelector& policy, const InstanceSet& set,
                                       const SamplingPlan& plan, const TaskOptions& options,
                                       std::size_t workers) {
  set.validate();
  std::vector<RolloutResult> out(set.instances.size());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = rollout(policy, set.instances[i], plan, instance_trace_seed(set, i), options);
  });
  return out;
}

double mean_objective(const std::vector<RolloutResult>& results) {
  if (results.empty()) return kInvalidObjective;
  double sum = 0.0;
  for (const auto& r : results) {
    if (!r.valid) return kInvalidObjective;
    sum += r.objective;
  }
  return sum / static_cast<double>(results.size());
}

double evaluate_objective(const ActionSelector& policy, const InstanceSet& set,
                          const TaskOptions& options, std::size_t workers) {
  return mean_objective(rollout_set(policy, set, SamplingPlan::none(), options, workers));
}

}  // namespace heurevo
