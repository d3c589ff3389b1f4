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

#ifndef HEUREVO_TEACHER_TEACHER_HPP_
#define HEUREVO_TEACHER_TEACHER_HPP_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/dsl/program.hpp"
#include "heurevo/engine/rollout.hpp"
#include "heurevo/engine/state.hpp"

namespace heurevo::teacher {

enum class Capability { kScores, kActionOnly };
std::string_view to_string(Capability c);
Capability parse_capability(std::string_view name);

class UnknownTeacher : public std::invalid_argument {
 public:
  explicit UnknownTeacher(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent reply from an external teacher.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

class TeacherTimeout : public std::runtime_error {
 public:
  explicit TeacherTimeout(const std::string& what) : std::runtime_error(what) {}
};

struct TeacherReply {
  // One finite score per candidate, aligned with state.candidates. Absent
  // for action-only teachers.
  std::optional<std::vector<double>> scores;
  // Preferred action: the argmax of scores (ties to the smallest id) when
  // scores are present.
  ActionId action{};
};

// Black-box policy queried on candidate action sets. Implementations must
// tolerate concurrent query() calls.
class Teacher {
 public:
  virtual ~Teacher() = default;
  virtual const std::string& name() const = 0;
  virtual Capability capability() const = 0;
  // `state` must be non-terminal.
  virtual TeacherReply query(const EpisodeState& state) const = 0;
};

using TeacherPtr = std::shared_ptr<const Teacher>;

// Scripted reference teachers:
//   jssp:     mwkr_teacher (remaining_work), lb_teacher (-lower_bound_after)
//   tsp/cvrp: greedy_insertion_teacher (-dist_from_current)
//   maxcut:   best_gain_teacher (flip_gain)
// Throws UnknownTeacher.
TeacherPtr scripted_teacher(TaskKind task, std::string_view name);
std::vector<std::string> scripted_teacher_names(TaskKind task);
// The scoring rule behind a scripted teacher, as a program.
dsl::HeuristicProgram scripted_teacher_program(TaskKind task, std::string_view name);

// Teacher that scores with a given program.
TeacherPtr program_teacher(std::string name, dsl::HeuristicProgram program);

// Hides the scores of `inner`, exposing only its preferred action.
TeacherPtr action_only(TeacherPtr inner);

// Selector that follows the teacher's preferred action.
ActionSelector teacher_selector(TeacherPtr teacher);

// Min-max normalization to [0, 1]; zero range maps every entry to 1.
std::vector<double> normalize_scores(std::span<const double> raw);
std::map<ActionId, double> normalize_scores(const std::map<ActionId, double>& raw);

}  // namespace heurevo::teacher

#endif  // HEUREVO_TEACHER_TEACHER_HPP_
