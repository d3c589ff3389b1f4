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

#include "heurevo/evolution/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "heurevo/dsl/parser.hpp"
#include "heurevo/evolution/archive.hpp"
#include "heurevo/genbackend/mock.hpp"
#include "heurevo/genbackend/prompt.hpp"
#include "heurevo/util/parallel.hpp"

namespace heurevo::evolution {

namespace fs = std::filesystem;
using dsl::RevisionMode;

namespace {

struct FlagName {
  std::string_view name;
  bool Ablation::*field;
};

constexpr FlagName kFlags[] = {
    {"performance-only", &Ablation::performance_only},
    {"no-analyzer", &Ablation::no_analyzer},
    {"no-teacher-ops", &Ablation::no_teacher_ops},
    {"no-pareto", &Ablation::no_pareto},
    {"max-align", &Ablation::max_align_selection},
    {"no-structural", &Ablation::no_structural},
    {"no-calibration", &Ablation::no_calibration},
    {"no-fusion", &Ablation::no_fusion},
};

std::vector<RevisionMode> enabled_modes(const Ablation& a) {
  std::vector<RevisionMode> modes;
  if (!a.no_structural) modes.push_back(RevisionMode::kStructural);
  if (!a.no_calibration) modes.push_back(RevisionMode::kCalibration);
  if (!a.no_fusion) modes.push_back(RevisionMode::kFusion);
  return modes;
}

bool teacher_guided(const Ablation& a) { return !a.performance_only && !a.no_teacher_ops; }

}  // namespace

void apply_ablation(Ablation& ablation, std::string_view flag) {
  for (const auto& f : kFlags) {
    if (f.name == flag) {
      ablation.*f.field = true;
      return;
    }
  }
  throw std::invalid_argument(fmt::format("unknown ablation flag '{}'", flag));
}

std::vector<std::string> ablation_names(const Ablation& ablation) {
  std::vector<std::string> out;
  for (const auto& f : kFlags) {
    if (ablation.*f.field) out.emplace_back(f.name);
  }
  return out;
}

void EvolutionConfig::validate() const {
  auto fail = [](const char* field, const std::string& why) {
    throw std::invalid_argument(fmt::format("{}: {}", field, why));
  };
  if (population < 2) fail("evolution.population", "must be at least 2");
  if (generations < 0) fail("evolution.generations", "must be non-negative");
  if (budget < 1) fail("evolution.budget", "must be at least 1");
  if (top_k < 1) fail("evolution.top_k", "must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("evolution.lambda", "must be >= 0");
  if (retries < 0) fail("evolution.retries", "must be non-negative");
  if (teacher_every < 1) fail("evolution.teacher_every", "must be at least 1");
  if (enabled_modes(ablation).empty()) fail("ablation", "every revision mode is disabled");
}

std::vector<dsl::HeuristicProgram> seed_programs(TaskKind task, std::size_t random_seeds,
                                                 std::uint64_t seed) {
  const auto& schema = schema_for(task);
  std::vector<dsl::HeuristicProgram> out;
  for (const auto& [name, source] : classical_rules(task)) {
    out.push_back(dsl::HeuristicProgram::parse(
        source, schema, {fmt::format("Classical rule {}.", name), {}, RevisionMode::kSeed}));
  }
  Rng rng(mix_seed(seed, 0x5eedULL));
  for (std::size_t i = 0; i < random_seeds; ++i) {
    out.push_back(dsl::HeuristicProgram::from_ast(
        genbackend::random_expression(schema, 3, rng), schema,
        {fmt::format("Random seed expression {}.", i + 1), {}, RevisionMode::kSeed}));
  }
  return out;
}

Candidate evaluate_candidate(const dsl::HeuristicProgram& program, const InstanceSet& design,
                             const teacher::Teacher* teacher, const EvolutionConfig& config,
                             int generation) {
  Candidate c{program};
  c.generation_born = generation;
  const bool diagnose = teacher != nullptr && !config.ablation.performance_only;
  const SamplingPlan plan = diagnose ? config.sampling : SamplingPlan::none();
  const auto rollouts = rollout_set(program_selector(program), design, plan, config.task_options);
  c.objective = mean_objective(rollouts);
  c.valid = std::isfinite(c.objective);
  if (c.valid && diagnose) {
    try {
      c.diagnostics = teacher::compute_diagnostics(*teacher, rollouts);
    } catch (const teacher::NoSampledStates&) {
      // Nothing sampled (cap 0); align stays 0.
    }
  }
  return c;
}

genbackend::AnalyzerRequest analyzer_request(const std::vector<Candidate>& population,
                                             TaskKind task, int generation,
                                             std::size_t max_cases) {
  genbackend::AnalyzerRequest req;
  req.task = task;
  req.generation = generation;
  std::vector<genbackend::LabeledDisagreement> cases;
  for (const auto& c : population) {
    req.members.push_back({c.id(), c.program.canonical(), c.objective, c.align(),
                           c.diagnostics.value, c.diagnostics.mean_percentile});
    for (const auto& d : c.diagnostics.disagreements) cases.push_back({{}, c.id(), d});
  }
  std::stable_sort(cases.begin(), cases.end(), [](const auto& a, const auto& b) {
    return a.item.gap() > b.item.gap();
  });
  if (cases.size() > max_cases) cases.resize(max_cases);
  for (std::size_t i = 0; i < cases.size(); ++i) cases[i].label = fmt::format("D{}", i + 1);
  req.disagreements = std::move(cases);
  return req;
}

namespace {

genbackend::ParentInfo parent_info(const Candidate& c, std::string role) {
  return {c.program, c.objective, c.align(), c.diagnostics.value, c.diagnostics.mean_percentile,
          std::move(role)};
}

}  // namespace

std::vector<Proposal> propose_children(const std::vector<Candidate>& population,
                                       const genbackend::BriefSet& briefs,
                                       genbackend::Backend& backend,
                                       const EvolutionConfig& config, Rng& rng) {
  const auto modes = enabled_modes(config.ablation);
  if (modes.empty()) throw std::invalid_argument("every revision mode is disabled");
  const bool guided = teacher_guided(config.ablation);
  const auto& schema = schema_for(config.task);
  std::vector<Proposal> out;
  for (std::size_t slot = 0; slot < config.budget; ++slot) {
    Proposal p;
    p.mode = modes[slot % modes.size()];
    genbackend::GenerationRequest req;
    req.task = config.task;
    req.mode = p.mode;
    req.teacher_guided = guided;
    const Candidate& first = sample_parent(population, Criterion::kObjective, config.top_k, rng);
    if (p.mode == RevisionMode::kFusion) {
      const Criterion second_by = guided ? Criterion::kAlignment : Criterion::kObjective;
      const Candidate* second = &sample_parent(population, second_by, config.top_k, rng);
      for (int t = 0; t < 4 && second->id() == first.id() && population.size() > 1; ++t) {
        second = &sample_parent(population, second_by, config.top_k, rng);
      }
      req.parents.push_back(parent_info(first, guided ? "objective-strong" : ""));
      req.parents.push_back(parent_info(*second, guided ? "alignment-strong" : ""));
    } else {
      req.parents.push_back(parent_info(first, ""));
    }
    for (const auto& parent : req.parents) p.parent_ids.push_back(parent.program.id());
    if (guided) {
      req.brief = briefs.for_mode(p.mode).text;
      const auto& cases = first.diagnostics.disagreements;
      req.disagreements.assign(
          cases.begin(), cases.begin() + std::min(cases.size(), config.prompt_disagreements));
    }
    for (int attempt = 0; attempt <= config.retries; ++attempt) {
      req.attempt = attempt;
      ++p.attempts;
      try {
        const auto reply = genbackend::extract_response(backend.generate(req));
        auto program = dsl::parse_program_file(reply.program_source, schema);
        p.program = program.with_meta({reply.description, p.parent_ids, p.mode});
        p.failure.clear();
        break;
      } catch (const genbackend::ExtractError& e) {
        p.failure = fmt::format("{} ({})", e.what(), genbackend::to_string(e.kind()));
      } catch (const dsl::ParseError& e) {
        p.failure = e.what();
      }
      req.retry_feedback = p.failure;
    }
    if (!p.program) spdlog::info("discarding {} proposal: {}", dsl::to_string(p.mode), p.failure);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Candidate> retain_population(const std::vector<Candidate>& merged,
                                         const EvolutionConfig& config) {
  if (config.ablation.no_pareto || config.ablation.performance_only) {
    return objective_retain(merged, config.population);
  }
  return pareto_retain(merged, config.population, config.lambda);
}

const Candidate& select_final(const std::vector<Candidate>& retained, bool by_alignment) {
  if (retained.empty()) throw std::invalid_argument("no retained candidate to select from");
  auto better = [by_alignment](const Candidate& a, const Candidate& b) {
    if (by_alignment && a.align() != b.align()) return a.align() > b.align();
    if (a.objective != b.objective) return a.objective < b.objective;
    if (a.generation_born != b.generation_born) return a.generation_born < b.generation_born;
    return a.id() < b.id();
  };
  const Candidate* best = &retained.front();
  for (const auto& c : retained) {
    if (better(c, *best)) best = &c;
  }
  return *best;
}

namespace {

class Evolver {
 public:
  Evolver(const EvolutionConfig& config, const InstanceSet& design, teacher::TeacherPtr teacher,
          genbackend::Backend& backend, const RunOptions& options)
      : config_(config),
        design_(design),
        teacher_(config.ablation.performance_only ? nullptr : std::move(teacher)),
        backend_(backend),
        options_(options),
        rng_(mix_seed(config.seed, 0xe7011ULL)) {}

  EvolutionResult run() {
    config_.validate();
    design_.validate();
    if (design_.task != config_.task) {
      throw std::invalid_argument("design instances belong to a different task");
    }
    int start = 0;
    if (!options_.run_dir.empty()) fs::create_directories(options_.run_dir);
    if (options_.resume && restore(start)) {
      spdlog::info("resuming after generation {}", start);
    } else {
      if (!options_.run_dir.empty()) {
        fs::remove(archive_path());
        fs::remove_all(fs::path(options_.run_dir) / "checkpoints");
      }
      backend_.reset_counters();
      initialise();
    }
    for (int g = start; g < config_.generations; ++g) step(g);

    EvolutionResult out;
    out.archive = archive_;
    out.population = population_;
    out.history = history_;
    std::vector<Candidate> retained;
    for (const auto& c : archive_) {
      if (retained_.count(c.id())) retained.push_back(c);
    }
    out.best = select_final(retained, config_.ablation.max_align_selection);
    out.generation_calls = backend_.generation_calls();
    out.analyzer_calls = backend_.analyzer_calls();
    return out;
  }

 private:
  std::string archive_path() const { return (fs::path(options_.run_dir) / "archive.jsonl").string(); }

  std::vector<Candidate> evaluate_all(const std::vector<dsl::HeuristicProgram>& programs,
                                      int generation) {
    std::vector<std::optional<Candidate>> slots(programs.size());
    parallel_for(programs.size(), config_.workers, [&](std::size_t i) {
      slots[i] = evaluate_candidate(programs[i], design_, teacher_.get(), config_, generation);
    });
    std::vector<Candidate> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    archive_.insert(archive_.end(), out.begin(), out.end());
    for (const auto& c : out) known_.insert(c.id());
    if (!options_.run_dir.empty()) append_archive(archive_path(), out);
    return out;
  }

  std::vector<Candidate> retain(const std::vector<Candidate>& merged) const {
    return retain_population(merged, config_);
  }

  void record(int generation, GenerationRecord r) {
    r.generation = generation;
    for (const auto& c : population_) retained_.insert(c.id());
    r.best_so_far = history_.empty() ? kInvalidObjective : history_.back().best_so_far;
    r.population_best = kInvalidObjective;
    r.mean_align = 0.0;
    std::vector<Point> points;
    for (const auto& c : population_) {
      r.population_best = std::min(r.population_best, c.objective);
      r.mean_align += c.align();
      r.population_ids.push_back(c.id());
      points.emplace_back(c.objective, -c.align());
    }
    r.best_so_far = std::min(r.best_so_far, r.population_best);
    if (!population_.empty()) r.mean_align /= static_cast<double>(population_.size());
    for (const auto& f : nondominated_sort(points)) r.front_sizes.push_back(f.size());
    r.generation_calls = backend_.generation_calls();
    r.analyzer_calls = backend_.analyzer_calls();
    history_.push_back(r);
    spdlog::info("generation {}: best so far {}, mean align {:.4f}, population {}", generation,
                 r.best_so_far, r.mean_align, population_.size());
    if (!options_.run_dir.empty()) {
      Checkpoint cp;
      cp.generation = generation;
      cp.population = r.population_ids;
      cp.retained.assign(retained_.begin(), retained_.end());
      cp.rng_state = rng_.save_state();
      cp.generation_calls = r.generation_calls;
      cp.analyzer_calls = r.analyzer_calls;
      cp.record = r;
      write_checkpoint(options_.run_dir, cp);
    }
  }

  void initialise() {
    const auto seeds = seed_programs(config_.task, config_.random_seeds, config_.seed);
    // Random seeds may collide with each other or with a classical rule.
    std::vector<dsl::HeuristicProgram> unique;
    std::set<std::string> ids;
    for (const auto& p : seeds) {
      if (ids.insert(p.id()).second) unique.push_back(p);
    }
    population_ = retain(evaluate_all(unique, 0));
    if (population_.empty()) throw std::runtime_error("no valid seed program");
    record(0, {});
  }

  void step(int g) {
    GenerationRecord r;
    genbackend::BriefSet briefs;
    const bool teacher_active = teacher_ != nullptr && g % config_.teacher_every == 0;
    if (teacher_active && !config_.ablation.no_analyzer) {
      briefs = genbackend::analyzer_call(
          backend_, analyzer_request(population_, config_.task, g, config_.analyzer_disagreements));
      r.analyzer_invoked = true;
    }
    const auto proposals = propose_children(population_, briefs, backend_, config_, rng_);
    std::vector<dsl::HeuristicProgram> fresh;
    std::set<std::string> batch;
    for (const auto& p : proposals) {
      if (!p.program) {
        ++r.discarded;
      } else if (known_.count(p.program->id()) || !batch.insert(p.program->id()).second) {
        ++r.duplicates;
      } else {
        fresh.push_back(*p.program);
      }
    }
    const auto children = evaluate_all(fresh, g + 1);
    r.children = children.size();
    std::vector<Candidate> merged = population_;
    merged.insert(merged.end(), children.begin(), children.end());
    population_ = retain(merged);
    record(g + 1, r);
  }

  bool restore(int& start) {
    if (options_.run_dir.empty()) return false;
    const auto checkpoints = read_checkpoints(options_.run_dir);
    if (checkpoints.empty() || !fs::exists(archive_path())) return false;
    const Checkpoint& last = checkpoints.back();
    std::vector<Candidate> kept;
    for (auto& c : read_archive(archive_path(), config_.task)) {
      if (c.generation_born <= last.generation) kept.push_back(std::move(c));
    }
    // Rewrite without the partial generation that was cut short.
    fs::remove(archive_path());
    append_archive(archive_path(), kept);
    archive_ = kept;
    std::map<std::string, const Candidate*> by_id;
    for (const auto& c : archive_) {
      known_.insert(c.id());
      by_id.emplace(c.id(), &c);
    }
    population_.clear();
    for (const auto& id : last.population) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw std::runtime_error("checkpoint references unknown id " + id);
      population_.push_back(*it->second);
    }
    retained_.insert(last.retained.begin(), last.retained.end());
    for (const auto& cp : checkpoints) {
      if (cp.generation <= last.generation) history_.push_back(cp.record);
    }
    rng_.restore_state(last.rng_state);
    backend_.reset_counters(last.generation_calls, last.analyzer_calls);
    start = last.generation;
    return true;
  }

  EvolutionConfig config_;
  const InstanceSet& design_;
  teacher::TeacherPtr teacher_;
  genbackend::Backend& backend_;
  RunOptions options_;
  Rng rng_;

  std::vector<Candidate> archive_;
  std::vector<Candidate> population_;
  std::vector<GenerationRecord> history_;
  std::set<std::string> known_;
  std::set<std::string> retained_;
};

}  // namespace

EvolutionResult run_evolution(const EvolutionConfig& config, const InstanceSet& design,
                              teacher::TeacherPtr teacher, genbackend::Backend& backend,
                              const RunOptions& options) {
  return Evolver(config, design, std::move(teacher), backend, options).run();
}

}  // namespace heurevo::evolution
