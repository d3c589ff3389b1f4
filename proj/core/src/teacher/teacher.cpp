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

#include "heurevo/teacher/teacher.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "heurevo/engine/instance.hpp"

namespace heurevo::teacher {

std::string_view to_string(Capability c) {
  return c == Capability::kScores ? "scores" : "action_only";
}

Capability parse_capability(std::string_view name) {
  if (name == "scores") return Capability::kScores;
  if (name == "action_only" || name == "action-only" || name == "action") {
    return Capability::kActionOnly;
  }
  throw std::invalid_argument(fmt::format("unknown teacher capability '{}'", name));
}

namespace {

class ProgramTeacher final : public Teacher {
 public:
  ProgramTeacher(std::string name, dsl::HeuristicProgram program)
      : name_(std::move(name)), program_(std::move(program)) {}

  const std::string& name() const override { return name_; }
  Capability capability() const override { return Capability::kScores; }

  TeacherReply query(const EpisodeState& state) const override {
    std::vector<double> scores;
    scores.reserve(state.candidates.size());
    for (const auto& c : state.candidates) {
      const double v = program_.evaluate(std::span<const double>(c.features));
      // Scores must be finite; a NEG_INF action is ranked below everything.
      scores.push_back(std::isfinite(v) ? v : -std::numeric_limits<double>::max());
    }
    TeacherReply reply;
    reply.action = dsl::argmax_action(state, scores);
    reply.scores = std::move(scores);
    return reply;
  }

 private:
  std::string name_;
  dsl::HeuristicProgram program_;
};

class ActionOnlyTeacher final : public Teacher {
 public:
  explicit ActionOnlyTeacher(TeacherPtr inner)
      : inner_(std::move(inner)), name_(inner_->name() + "/action_only") {}

  const std::string& name() const override { return name_; }
  Capability capability() const override { return Capability::kActionOnly; }
  TeacherReply query(const EpisodeState& state) const override {
    TeacherReply r = inner_->query(state);
    r.scores.reset();
    return r;
  }

 private:
  TeacherPtr inner_;
  std::string name_;
};

struct ScriptedSpec {
  TaskKind task;
  const char* name;
  const char* source;
};

constexpr ScriptedSpec kScripted[] = {
    {TaskKind::kJssp, "mwkr_teacher", "remaining_work"},
    {TaskKind::kJssp, "lb_teacher", "-lower_bound_after"},
    {TaskKind::kTsp, "greedy_insertion_teacher", "-dist_from_current"},
    {TaskKind::kCvrp, "greedy_insertion_teacher", "-dist_from_current"},
    {TaskKind::kMaxCut, "best_gain_teacher", "flip_gain"},
};

}  // namespace

dsl::HeuristicProgram scripted_teacher_program(TaskKind task, std::string_view name) {
  for (const auto& s : kScripted) {
    if (s.task == task && name == s.name) {
      return dsl::HeuristicProgram::parse(s.source, schema_for(task));
    }
  }
  throw UnknownTeacher(fmt::format("UnknownTeacher: '{}' is not a scripted {} teacher", name,
                                   heurevo::to_string(task)));
}

TeacherPtr scripted_teacher(TaskKind task, std::string_view name) {
  return program_teacher(std::string(name), scripted_teacher_program(task, name));
}

std::vector<std::string> scripted_teacher_names(TaskKind task) {
  std::vector<std::string> out;
  for (const auto& s : kScripted) {
    if (s.task == task) out.emplace_back(s.name);
  }
  return out;
}

TeacherPtr program_teacher(std::string name, dsl::HeuristicProgram program) {
  return std::make_shared<ProgramTeacher>(std::move(name), std::move(program));
}

TeacherPtr action_only(TeacherPtr inner) {
  return std::make_shared<ActionOnlyTeacher>(std::move(inner));
}

ActionSelector teacher_selector(TeacherPtr teacher) {
  return [t = std::move(teacher)](const EpisodeState& s) { return t->query(s).action; };
}

std::vector<double> normalize_scores(std::span<const double> raw) {
  if (raw.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) out.push_back(hi > lo ? (v - lo) / (hi - lo) : 1.0);
  return out;
}

std::map<ActionId, double> normalize_scores(const std::map<ActionId, double>& raw) {
  std::vector<double> values;
  for (const auto& [id, v] : raw) values.push_back(v);
  const auto norm = normalize_scores(std::span<const double>(values));
  std::map<ActionId, double> out;
  std::size_t i = 0;
  for (const auto& [id, v] : raw) out[id] = norm[i++];
  return out;
}

}  // namespace heurevo::teacher
