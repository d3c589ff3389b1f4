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

#ifndef HEUREVO_ENGINE_INSTANCE_HPP_
#define HEUREVO_ENGINE_INSTANCE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "heurevo/dsl/schema.hpp"
#include "heurevo/engine/environment.hpp"
#include "heurevo/tasks/jssp.hpp"
#include "heurevo/tasks/maxcut.hpp"
#include "heurevo/tasks/routing.hpp"

namespace heurevo {

// Immutable problem instance of any task, shared between episodes.
class ProblemInstance {
 public:
  using Variant = std::variant<std::shared_ptr<const jssp::JsspInstance>,
                               std::shared_ptr<const routing::RoutingInstance>,
                               std::shared_ptr<const maxcut::MaxCutInstance>>;

  ProblemInstance(jssp::JsspInstance inst);
  ProblemInstance(routing::RoutingInstance inst);
  ProblemInstance(maxcut::MaxCutInstance inst);

  TaskKind task() const;
  const std::string& name() const;
  const Variant& data() const { return data_; }

  const jssp::JsspInstance& jssp() const;
  const routing::RoutingInstance& routing() const;
  const maxcut::MaxCutInstance& maxcut() const;

 private:
  Variant data_;
};

// Per-task knobs that shape the environment rather than the instance.
struct TaskOptions {
  jssp::DispatchMode dispatch = jssp::DispatchMode::kInsertion;
  // MaxCut flip budget = ceil(maxcut_steps_per_vertex * n).
  double maxcut_steps_per_vertex = 2.0;
  bool maxcut_all_plus = false;
};

// Builds a fresh episode. `episode_seed` drives any stochastic start
// (MaxCut initial spins); other tasks are deterministic.
std::unique_ptr<Environment> make_environment(const ProblemInstance& instance,
                                              const TaskOptions& options,
                                              std::uint64_t episode_seed);

const dsl::FeatureSchema& schema_for(TaskKind task);

// Classical constructive rules used as seed programs, as (name, source).
std::vector<std::pair<std::string, std::string>> classical_rules(TaskKind task);

enum class Split { kDesign, kEval };
std::string_view to_string(Split split);

struct InstanceSet {
  TaskKind task = TaskKind::kJssp;
  std::string name;
  std::vector<ProblemInstance> instances;
  Split split = Split::kDesign;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument if empty or mixed-task.
  void validate() const;
};

}  // namespace heurevo

#endif  // HEUREVO_ENGINE_INSTANCE_HPP_
