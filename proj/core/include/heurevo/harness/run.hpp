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

#ifndef HEUREVO_HARNESS_RUN_HPP_
#define HEUREVO_HARNESS_RUN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "heurevo/evolution/evolution.hpp"
#include "heurevo/harness/config.hpp"
#include "heurevo/harness/report.hpp"

namespace heurevo::harness {

struct EvolveOptions {
  std::string run_dir;
  bool resume = false;
  // Also echo the run log to stderr.
  bool console_log = true;
};

struct EvolveSummary {
  evolution::EvolutionResult result;
  // Best program on each eval set.
  std::vector<ReportRow> eval_rows;
  std::string run_dir;
};

// Full driver. Writes into run_dir: run.json, run.log, archive.jsonl,
// checkpoints/, best.heur, convergence.csv and, with eval sets, eval.csv
// and eval.json. An LLM backend logs its exchanges to llm.jsonl.
EvolveSummary run_evolve(const RunConfig& config, const EvolveOptions& options);

// "generation,best_so_far,population_best,mean_align,front_sizes,children,
// discarded,duplicates,analyzer,generation_calls,analyzer_calls"; one row
// per record, objectives in minimization form.
std::string convergence_csv(const std::vector<evolution::GenerationRecord>& history);

struct RunInspection {
  TaskKind task = TaskKind::kJssp;
  std::vector<evolution::GenerationRecord> records;
  std::vector<evolution::Candidate> archive;
  // Parent ids or population ids that do not resolve, or parents born
  // after their child.
  std::vector<std::string> lineage_errors;
};

// Reads run.json (for the task unless given), checkpoints and archive.
// Throws std::runtime_error on missing or corrupt files.
RunInspection inspect_run(const std::string& run_dir, std::optional<TaskKind> task = {});

std::string format_generations(const RunInspection& run);
// Source, scores and disagreement cases of one candidate; `id` may be a
// unique prefix. Throws std::invalid_argument if it matches none or many.
std::string format_candidate(const RunInspection& run, const std::string& id);

}  // namespace heurevo::harness

#endif  // HEUREVO_HARNESS_RUN_HPP_
