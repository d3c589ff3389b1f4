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

#ifndef HEUREVO_TESTS_SUPPORT_FIXTURES_HPP_
#define HEUREVO_TESTS_SUPPORT_FIXTURES_HPP_

#include <string>

#include "heurevo/engine/instance.hpp"
#include "heurevo/util/random.hpp"

namespace heurevo::testing {

inline constexpr TaskKind kAllTasks[] = {TaskKind::kJssp, TaskKind::kTsp, TaskKind::kCvrp,
                                         TaskKind::kMaxCut};

// Small random instance of each task.
inline ProblemInstance small_instance(TaskKind task, std::uint64_t seed) {
  Rng rng(seed);
  switch (task) {
    case TaskKind::kJssp:
      return ProblemInstance(jssp::generate_random(6, 6, rng));
    case TaskKind::kTsp:
      return ProblemInstance(routing::generate_tsp(20, rng));
    case TaskKind::kCvrp:
      return ProblemInstance(routing::generate_cvrp(20, 40, rng));
    case TaskKind::kMaxCut:
      return ProblemInstance(maxcut::generate_ba(30, 3, maxcut::Weighting::kSigned, rng));
  }
  throw std::invalid_argument("task");
}

inline InstanceSet small_set(TaskKind task, std::size_t count, std::uint64_t seed) {
  InstanceSet set{task, std::string(to_string(task)) + "-small", {}, Split::kDesign, seed};
  for (std::size_t i = 0; i < count; ++i) set.instances.push_back(small_instance(task, seed * 1000 + i));
  return set;
}

inline const char* default_teacher(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp:
      return "mwkr_teacher";
    case TaskKind::kTsp:
    case TaskKind::kCvrp:
      return "greedy_insertion_teacher";
    case TaskKind::kMaxCut:
      return "best_gain_teacher";
  }
  return "";
}

}  // namespace heurevo::testing

#endif  // HEUREVO_TESTS_SUPPORT_FIXTURES_HPP_
