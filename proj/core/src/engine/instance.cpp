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

#include "heurevo/engine/instance.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "heurevo/util/random.hpp"

namespace heurevo {

ProblemInstance::ProblemInstance(jssp::JsspInstance inst)
    : data_(std::make_shared<const jssp::JsspInstance>(std::move(inst))) {}
ProblemInstance::ProblemInstance(routing::RoutingInstance inst)
    : data_(std::make_shared<const routing::RoutingInstance>(std::move(inst))) {}
ProblemInstance::ProblemInstance(maxcut::MaxCutInstance inst)
    : data_(std::make_shared<const maxcut::MaxCutInstance>(std::move(inst))) {}

TaskKind ProblemInstance::task() const {
  switch (data_.index()) {
    case 0:
      return TaskKind::kJssp;
    case 1:
      return std::get<1>(data_)->task;
    default:
      return TaskKind::kMaxCut;
  }
}

const std::string& ProblemInstance::name() const {
  return std::visit([](const auto& p) -> const std::string& { return p->name; }, data_);
}

const jssp::JsspInstance& ProblemInstance::jssp() const { return *std::get<0>(data_); }
const routing::RoutingInstance& ProblemInstance::routing() const {
  return *std::get<1>(data_);
}
const maxcut::MaxCutInstance& ProblemInstance::maxcut() const { return *std::get<2>(data_); }

std::unique_ptr<Environment> make_environment(const ProblemInstance& instance,
                                              const TaskOptions& options,
                                              std::uint64_t episode_seed) {
  const auto& data = instance.data();
  switch (data.index()) {
    case 0:
      return std::make_unique<jssp::JsspEnvironment>(std::get<0>(data), options.dispatch);
    case 1: {
      const auto& r = std::get<1>(data);
      if (r->task == TaskKind::kTsp) return std::make_unique<routing::TspEnvironment>(r);
      return std::make_unique<routing::CvrpEnvironment>(r);
    }
    default: {
      const auto& g = std::get<2>(data);
      if (!(options.maxcut_steps_per_vertex >= 0.0)) {
        throw std::invalid_argument("maxcut_steps_per_vertex must be non-negative");
      }
      const int steps = static_cast<int>(std::ceil(options.maxcut_steps_per_vertex * g->n));
      return std::make_unique<maxcut::MaxCutEnvironment>(
          g, maxcut::initial_spins(g->n, mix_seed(episode_seed, 0x5eed), options.maxcut_all_plus),
          steps);
    }
  }
}

const dsl::FeatureSchema& schema_for(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp:
      return jssp::feature_schema();
    case TaskKind::kTsp:
      return routing::tsp_schema();
    case TaskKind::kCvrp:
      return routing::cvrp_schema();
    case TaskKind::kMaxCut:
      return maxcut::feature_schema();
  }
  throw std::invalid_argument("unknown task");
}

std::vector<std::pair<std::string, std::string>> classical_rules(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp: {
      std::vector<std::pair<std::string, std::string>> out;
      for (const auto& name : jssp::rule_names()) {
        out.emplace_back(name, jssp::baseline_rule(name).source_text());
      }
      return out;
    }
    case TaskKind::kTsp:
      return {{"nearest_neighbor", "-1 * dist_from_current"},
              {"nearest_then_home", "-1 * dist_from_current - 0.1 * dist_to_destination"}};
    case TaskKind::kCvrp:
      return {{"nearest_feasible", "-1 * dist_from_current"},
              {"nearest_customer_first", "-1 * dist_from_current - 10 * is_restart"}};
    case TaskKind::kMaxCut:
      return {{"greedy_gain", "1 * flip_gain"},
              {"gain_with_recency", "1 * flip_gain + 0.01 * steps_since_flip"}};
  }
  return {};
}

std::string_view to_string(Split split) { return split == Split::kDesign ? "design" : "eval"; }

void InstanceSet::validate() const {
  if (instances.empty()) throw std::invalid_argument("instance set '" + name + "' is empty");
  for (const auto& inst : instances) {
    if (inst.task() != task) {
      throw std::invalid_argument(fmt::format("instance '{}' in set '{}' is {}, expected {}",
                                              inst.name(), name, to_string(inst.task()),
                                              to_string(task)));
    }
  }
}

}  // namespace heurevo
