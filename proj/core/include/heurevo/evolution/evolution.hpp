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

#ifndef HEUREVO_EVOLUTION_EVOLUTION_HPP_
#define HEUREVO_EVOLUTION_EVOLUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/engine/instance.hpp"
#include "heurevo/engine/rollout.hpp"
#include "heurevo/evolution/population.hpp"
#include "heurevo/genbackend/backend.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace heurevo::evolution {

struct Ablation {
  // No teacher queries at all: align recorded as 0, generic operators.
  bool performance_only = false;
  bool no_analyzer = false;
  // Generic mutation/crossover prompts without teacher statistics.
  bool no_teacher_ops = false;
  bool no_pareto = false;
  bool max_align_selection = false;
  bool no_structural = false;
  bool no_calibration = false;
  bool no_fusion = false;

  bool operator==(const Ablation&) const = default;
};

// Flag names: performance-only, no-analyzer, no-teacher-ops, no-pareto,
// max-align, no-structural, no-calibration, no-fusion.
void apply_ablation(Ablation& ablation, std::string_view flag);
std::vector<std::string> ablation_names(const Ablation& ablation);

struct EvolutionConfig {
  TaskKind task = TaskKind::kJssp;
  std::size_t population = 10;
  int generations = 5;
  std::size_t budget = 5;
  std::size_t top_k = 5;
  double lambda = 0.5;
  int retries = 2;
  // Teacher-active generations are those with g % teacher_every == 0.
  int teacher_every = 1;
  std::size_t random_seeds = 6;
  std::size_t prompt_disagreements = 4;
  std::size_t analyzer_disagreements = 12;
  SamplingPlan sampling;
  TaskOptions task_options;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  Ablation ablation;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Classical rules of the task followed by `random_seeds` random programs.
std::vector<dsl::HeuristicProgram> seed_programs(TaskKind task, std::size_t random_seeds,
                                                 std::uint64_t seed);

// Rollouts on the design set plus teacher diagnostics. Without a teacher
// (or with performance_only) align is 0 and no diagnostics are taken.
Candidate evaluate_candidate(const dsl::HeuristicProgram& program, const InstanceSet& design,
                             const teacher::Teacher* teacher, const EvolutionConfig& config,
                             int generation);

struct Proposal {
  std::optional<dsl::HeuristicProgram> program;
  dsl::RevisionMode mode = dsl::RevisionMode::kStructural;
  std::vector<std::string> parent_ids;
  int attempts = 0;
  std::string failure;
};

// Round-robin over the enabled modes of s, p, m. Unusable replies are
// retried `config.retries` times, then the slot is discarded.
std::vector<Proposal> propose_children(const std::vector<Candidate>& population,
                                       const genbackend::BriefSet& briefs,
                                       genbackend::Backend& backend,
                                       const EvolutionConfig& config, Rng& rng);

genbackend::AnalyzerRequest analyzer_request(const std::vector<Candidate>& population,
                                             TaskKind task, int generation,
                                             std::size_t max_cases);

struct GenerationRecord {
  int generation = 0;
  double best_so_far = kInvalidObjective;
  double population_best = kInvalidObjective;
  double mean_align = 0.0;
  std::vector<std::size_t> front_sizes;
  std::vector<std::string> population_ids;
  std::size_t children = 0;
  std::size_t discarded = 0;
  std::size_t duplicates = 0;
  bool analyzer_invoked = false;
  std::uint64_t generation_calls = 0;
  std::uint64_t analyzer_calls = 0;
};

struct EvolutionResult {
  // Every evaluated candidate, in evaluation order.
  std::vector<Candidate> archive;
  std::vector<Candidate> population;
  // Entry 0 is the seed population; entry g the population after g
  // generations.
  std::vector<GenerationRecord> history;
  std::optional<Candidate> best;
  std::uint64_t generation_calls = 0;
  std::uint64_t analyzer_calls = 0;
};

struct RunOptions {
  // Archive and checkpoints go here when non-empty.
  std::string run_dir;
  // Continue from the last checkpoint in run_dir.
  bool resume = false;
};

// The generation loop. The returned best member is the lowest-objective
// program ever retained (highest align under max_align_selection).
EvolutionResult run_evolution(const EvolutionConfig& config, const InstanceSet& design,
                              teacher::TeacherPtr teacher, genbackend::Backend& backend,
                              const RunOptions& options = {});

// Survivor selection of one generation: objective-only top-N under
// no_pareto or performance_only, Pareto retention otherwise.
std::vector<Candidate> retain_population(const std::vector<Candidate>& merged,
                                         const EvolutionConfig& config);

// Final selection over the retained members.
const Candidate& select_final(const std::vector<Candidate>& retained, bool by_alignment);

}  // namespace heurevo::evolution

#endif  // HEUREVO_EVOLUTION_EVOLUTION_HPP_
