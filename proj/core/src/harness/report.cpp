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

#include "heurevo/harness/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "heurevo/teacher/external.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace heurevo::harness {

namespace {

std::string rule_key(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  return key;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

void save_program(const dsl::HeuristicProgram& program, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::string desc = program.description();
  std::replace(desc.begin(), desc.end(), '\n', ' ');
  out << "# " << (desc.empty() ? program.id() : desc) << "\n" << program.canonical() << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

dsl::HeuristicProgram load_program(TaskKind task, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read heuristic file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return dsl::HeuristicProgram::parse(buffer.str(), schema_for(task));
}

Method resolve_method(TaskKind task, std::string_view spec) {
  const std::string name(spec);
  if (spec.starts_with("teacher:")) {
    return {name, teacher::teacher_selector(teacher::scripted_teacher(task, spec.substr(8)))};
  }
  if (spec.starts_with("external:")) {
    teacher::ExternalTeacherConfig cfg;
    cfg.command = std::string(spec.substr(9));
    cfg.capability = teacher::Capability::kActionOnly;
    if (cfg.command.empty()) throw std::invalid_argument("external: needs a command");
    return {name, teacher::teacher_selector(teacher::external_teacher(std::move(cfg)))};
  }
  if (spec.starts_with("heur:") || ends_with(spec, ".heur")) {
    const auto path = spec.starts_with("heur:") ? spec.substr(5) : spec;
    return {name, program_selector(load_program(task, std::string(path)))};
  }
  const auto key = rule_key(spec);
  for (const auto& [rule, source] : classical_rules(task)) {
    if (rule == key) {
      return {name, program_selector(dsl::HeuristicProgram::parse(source, schema_for(task)))};
    }
  }
  std::string known;
  for (const auto& [rule, source] : classical_rules(task)) known += (known.empty() ? "" : ", ") + rule;
  throw std::invalid_argument(
      fmt::format("unknown method '{}' for {} (rules: {})", spec, to_string(task), known));
}

double native_objective(TaskKind task, double minimization_objective) {
  return task == TaskKind::kMaxCut ? -minimization_objective : minimization_objective;
}

std::string_view objective_label(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp: return "makespan";
    case TaskKind::kTsp:
    case TaskKind::kCvrp: return "length";
    case TaskKind::kMaxCut: return "cut";
  }
  return "objective";
}

std::vector<ReportRow> run_bench(TaskKind task, const std::vector<InstanceSet>& sets,
                                 const std::vector<Method>& methods, const TaskOptions& options,
                                 std::size_t workers) {
  if (methods.empty()) throw std::invalid_argument("no methods to benchmark");
  std::vector<ReportRow> rows;
  for (const auto& set : sets) {
    if (set.task != task) {
      throw std::invalid_argument(fmt::format("instance set '{}' is not a {} set", set.name,
                                              to_string(task)));
    }
    for (const auto& method : methods) {
      const auto start = std::chrono::steady_clock::now();
      const auto results = rollout_set(method.selector, set, SamplingPlan::none(), options, workers);
      const auto stop = std::chrono::steady_clock::now();
      ReportRow row;
      row.dataset = set.name;
      row.method = method.name;
      row.instances = results.size();
      row.invalid = static_cast<std::size_t>(
          std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.valid; }));
      row.objective = native_objective(task, mean_objective(results));
      row.runtime_seconds = std::chrono::duration<double>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_table(TaskKind task, const std::vector<ReportRow>& rows) {
  std::size_t wd = 7, wm = 6;
  for (const auto& r : rows) {
    wd = std::max(wd, r.dataset.size());
    wm = std::max(wm, r.method.size());
  }
  std::string out = fmt::format("{:<{}}  {:<{}}  {:>12}  {:>10}  {:>5}\n", "dataset", wd, "method",
                                wm, objective_label(task), "time (s)", "n");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:>12.2f}  {:>10.3f}  {:>5}{}\n", r.dataset, wd, r.method,
                       wm, r.objective, r.runtime_seconds, r.instances,
                       r.invalid ? fmt::format("  ({} invalid)", r.invalid) : "");
  }
  return out;
}

std::string format_csv(const std::vector<ReportRow>& rows) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out = "dataset,method,objective,runtime_seconds,instances,invalid\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.6f},{:.6f},{},{}\n", quote(r.dataset), quote(r.method),
                       r.objective, r.runtime_seconds, r.instances, r.invalid);
  }
  return out;
}

nlohmann::json report_json(TaskKind task, const std::vector<ReportRow>& rows) {
  nlohmann::json j;
  j["task"] = std::string(to_string(task));
  j["objective"] = std::string(objective_label(task));
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o{{"dataset", r.dataset},     {"method", r.method},
                     {"instances", r.instances}, {"invalid", r.invalid},
                     {"runtime_seconds", r.runtime_seconds}};
    o["objective"] = std::isfinite(r.objective) ? nlohmann::json(r.objective) : nlohmann::json();
    arr.push_back(std::move(o));
  }
  return j;
}

}  // namespace heurevo::harness
