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

#ifndef HEUREVO_HARNESS_CONFIG_HPP_
#define HEUREVO_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "heurevo/evolution/evolution.hpp"
#include "heurevo/genbackend/backend.hpp"
#include "heurevo/genbackend/llm.hpp"
#include "heurevo/genbackend/mock.hpp"
#include "heurevo/harness/instances.hpp"
#include "heurevo/teacher/external.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace heurevo::harness {

// Invalid run configuration; what() starts with the dotted field path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct TeacherSpec {
  std::string kind = "scripted";  // scripted | external | none
  std::string name;               // scripted: defaults to the task's first teacher
  teacher::Capability capability = teacher::Capability::kScores;
  teacher::ExternalTeacherConfig external;
};

struct BackendSpec {
  std::string kind = "mock";  // mock | llm
  bool seed_set = false;      // mock seed defaults to the run seed
  genbackend::MockOptions mock;
  genbackend::LlmConfig llm;
};

struct RunConfig {
  TaskKind task = TaskKind::kJssp;
  std::uint64_t seed = 0;
  InstanceSpec design;
  std::vector<InstanceSpec> eval;
  evolution::EvolutionConfig evolution;
  TeacherSpec teacher;
  BackendSpec backend;
  // Run directory when the command line gives none.
  std::string output_dir;
};

// Instance source used when the config has no design section.
InstanceSpec default_design_spec(TaskKind task);

// Throws ConfigError. Relative instance paths resolve against base_dir.
RunConfig parse_run_config(const std::string& yaml_text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

// nullptr for kind "none".
teacher::TeacherPtr make_teacher(const TeacherSpec& spec, TaskKind task);

// `log_path` overrides the LLM exchange log location when non-empty.
std::unique_ptr<genbackend::Backend> make_backend(const BackendSpec& spec, std::uint64_t run_seed,
                                                  const std::string& log_path = {});

}  // namespace heurevo::harness

#endif  // HEUREVO_HARNESS_CONFIG_HPP_
