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

#ifndef HEUREVO_ENGINE_STATE_HPP_
#define HEUREVO_ENGINE_STATE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heurevo {

enum class TaskKind { kJssp, kTsp, kCvrp, kMaxCut };

std::string_view to_string(TaskKind task);
// Accepts "jssp", "tsp", "cvrp", "maxcut". Throws std::invalid_argument.
TaskKind parse_task(std::string_view name);

// Task-canonical action identifier: job index (JSSP), node index
// (TSP/CVRP, 0 = depot restart), vertex index (MaxCut).
enum class ActionId : std::int64_t {};

constexpr std::int64_t to_int(ActionId id) {
  return static_cast<std::int64_t>(id);
}

// Feature values in the order of the task's FeatureSchema.
using FeatureVector = std::vector<double>;

struct CandidateAction {
  ActionId id{};
  FeatureVector features;
};

// Decision-point view shared by heuristics and teachers. Candidates are
// ordered by ascending id.
struct EpisodeState {
  TaskKind task = TaskKind::kJssp;
  int step = 0;
  std::vector<CandidateAction> candidates;
  // Task-specific scalars, in a fixed task-defined order.
  std::vector<std::pair<std::string, double>> context;

  const CandidateAction* find(ActionId id) const;
  bool contains(ActionId id) const { return find(id) != nullptr; }
};

// Stable digest of a state's task, step, candidate ids and features.
std::string state_digest(const EpisodeState& state);

}  // namespace heurevo

#endif  // HEUREVO_ENGINE_STATE_HPP_
