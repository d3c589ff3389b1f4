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

#ifndef HEUREVO_HARNESS_REPORT_HPP_
#define HEUREVO_HARNESS_REPORT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "heurevo/dsl/program.hpp"
#include "heurevo/engine/rollout.hpp"

namespace heurevo::harness {

// A policy under benchmark.
struct Method {
  std::string name;
  ActionSelector selector;
};

// Accepted forms:
//   <rule>              classical rule of the task (spt, mwkr, fdd-mwkr, ...)
//   teacher:<name>      scripted teacher
//   <path>.heur         saved heuristic (also heur:<path>)
//   external:<command>  external teacher process, followed greedily
// Throws std::invalid_argument for unknown names, std::runtime_error for
// unreadable files.
Method resolve_method(TaskKind task, std::string_view spec);

// Saved heuristic file: a comment line with the description, then the
// canonical expression.
void save_program(const dsl::HeuristicProgram& program, const std::string& path);
dsl::HeuristicProgram load_program(TaskKind task, const std::string& path);

// Objective in the task's own convention: cut value for MaxCut (engine
// objective negated), the minimization objective otherwise.
double native_objective(TaskKind task, double minimization_objective);
std::string_view objective_label(TaskKind task);

struct ReportRow {
  std::string dataset;
  std::string method;
  double objective = 0.0;  // native convention
  double runtime_seconds = 0.0;
  std::size_t instances = 0;
  std::size_t invalid = 0;
};

// Rows ordered dataset-major, methods in the order given. Runtime is the
// wall-clock time of the rollouts only.
std::vector<ReportRow> run_bench(TaskKind task, const std::vector<InstanceSet>& sets,
                                 const std::vector<Method>& methods,
                                 const TaskOptions& options = {}, std::size_t workers = 1);

std::string format_table(TaskKind task, const std::vector<ReportRow>& rows);
// Header: dataset,method,objective,runtime_seconds,instances,invalid
std::string format_csv(const std::vector<ReportRow>& rows);
nlohmann::json report_json(TaskKind task, const std::vector<ReportRow>& rows);

}  // namespace heurevo::harness

#endif  // HEUREVO_HARNESS_REPORT_HPP_
