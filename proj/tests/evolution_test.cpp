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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "heurevo/evolution/archive.hpp"
#include "heurevo/evolution/evolution.hpp"
#include "heurevo/genbackend/mock.hpp"
#include "heurevo/genbackend/prompt.hpp"
#include "heurevo/util/hash.hpp"
#include "support/fixtures.hpp"
#include "support/population.hpp"

namespace heurevo::evolution {
namespace {

namespace fs = std::filesystem;
using heurevo::testing::ids_of;
using heurevo::testing::make_candidate;

TEST(NondominatedSort, Examples) {
  EXPECT_EQ(nondominated_sort({{10, -0.5}, {12, -0.8}, {11, -0.4}}),
            (std::vector<std::vector<std::size_t>>{{0, 1}, {2}}));
  EXPECT_EQ(nondominated_sort({{3, -1}, {3, -1}, {3, -1}}),
            (std::vector<std::vector<std::size_t>>{{0, 1, 2}}));
  EXPECT_EQ(nondominated_sort({{3, -0.1}, {1, -0.9}, {2, -0.5}}),
            (std::vector<std::vector<std::size_t>>{{1}, {2}, {0}}));
}

TEST(RankScore, Formula) {
  // Candidate 0: one member better on objective, four better on align.
  std::vector<Candidate> pop{make_candidate(0, 20, 0.1), make_candidate(1, 10, 0.2),
                             make_candidate(2, 30, 0.3), make_candidate(3, 40, 0.4),
                             make_candidate(4, 50, 0.5), make_candidate(5, 60, 0.6)};
  EXPECT_EQ(rank_score(pop[0], pop, 0.5), 2 + 0.5 * 6);
  pop[5].diagnostics.align = 0.0;
  EXPECT_EQ(rank_score(pop[0], pop, 0.5), 4.5);
  EXPECT_EQ(rank_score(pop[0], pop, 0.0), 2.0);
  std::vector<Candidate> tied{make_candidate(0, 5, 0.5), make_candidate(1, 5, 0.5)};
  EXPECT_EQ(rank_score(tied[0], tied, 0.7), rank_score(tied[1], tied, 0.7));
  EXPECT_EQ(competition_ranks({3, 1, 3, 2}), (std::vector<int>{3, 1, 3, 2}));
}

TEST(ParetoRetain, OverflowingSecondFront) {
  // Front 1: seven mutually nondominated members; front 2: six members
  // each dominated by a front-1 member.
  std::vector<Candidate> merged;
  for (int i = 0; i < 7; ++i) merged.push_back(make_candidate(i, 100 + 10 * i, 0.1 * i));
  for (int i = 0; i < 6; ++i) merged.push_back(make_candidate(10 + i, 105 + 10 * i, 0.1 * i - 0.05));
  const auto fronts = nondominated_sort([&] {
    std::vector<Point> p;
    for (const auto& c : merged) p.emplace_back(c.objective, -c.align());
    return p;
  }());
  ASSERT_EQ(fronts.size(), 2u);
  ASSERT_EQ(fronts[0].size(), 7u);
  ASSERT_EQ(fronts[1].size(), 6u);

  const auto kept = pareto_retain(merged, 10, 0.5);
  ASSERT_EQ(kept.size(), 10u);
  // Direct computation: S over all 13 members, best three of front 2.
  std::vector<std::pair<double, std::string>> s2;
  for (std::size_t i = 7; i < 13; ++i) {
    double rf = 1, ra = 1;
    for (const auto& m : merged) {
      rf += m.objective < merged[i].objective;
      ra += m.align() > merged[i].align();
    }
    s2.emplace_back(rf + 0.5 * ra, merged[i].id());
  }
  std::sort(s2.begin(), s2.end());
  std::set<std::string> expect;
  for (int i = 0; i < 7; ++i) expect.insert(merged[i].id());
  for (int i = 0; i < 3; ++i) expect.insert(s2[i].second);
  const auto got = ids_of(kept);
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), expect);
}

TEST(ParetoRetain, SmallAndDuplicateInputs) {
  std::vector<Candidate> merged{make_candidate(1, 10, 0.2), make_candidate(2, 12, 0.9),
                                make_candidate(1, 10, 0.2), make_candidate(3, 0, 1, false)};
  const auto kept = pareto_retain(merged, 10, 0.5);
  EXPECT_EQ(ids_of(kept), (std::vector<std::string>{merged[0].id(), merged[1].id()}));
}

TEST(ParetoRetain, MatchesBruteForceOracle) {
  std::mt19937 gen(77);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + gen() % 12;
    const std::size_t cap = 4 + gen() % 7;
    const double lambda = std::uniform_real_distribution<double>(0, 1)(gen);
    const auto merged = heurevo::testing::random_population(gen, n);
    mismatches += ids_of(pareto_retain(merged, cap, lambda)) !=
                  oracle::pareto_retain(heurevo::testing::as_items(merged), cap, lambda);
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(ParetoRetain, NothingDominatedByADiscardedMemberWhenCapacityIsLoose) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto merged = heurevo::testing::random_population(gen, 1 + gen() % 12);
    const auto kept = pareto_retain(merged, 12, 0.5);
    const auto pool = valid_unique(merged);
    EXPECT_EQ(kept.size(), pool.size());
  }
}

TEST(ObjectiveRetain, EqualsParetoWhenAlignIsFlat) {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 300; ++trial) {
    auto merged = heurevo::testing::random_population(gen, 1 + gen() % 12);
    for (auto& c : merged) c.diagnostics.align = 0.0;
    const auto a = ids_of(pareto_retain(merged, 5, 0.5));
    const auto b = ids_of(objective_retain(merged, 5));
    EXPECT_EQ(std::set<std::string>(a.begin(), a.end()), std::set<std::string>(b.begin(), b.end()));
  }
}

TEST(SampleParent, RankWeights) {
  std::vector<Candidate> pop{make_candidate(0, 30, 0.9), make_candidate(1, 10, 0.1),
                             make_candidate(2, 20, 0.5), make_candidate(3, 40, 0.0)};
  const auto p = parent_probabilities(pop, Criterion::kObjective, 3);
  EXPECT_DOUBLE_EQ(p[1], 6.0 / 11.0);
  EXPECT_DOUBLE_EQ(p[2], 3.0 / 11.0);
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 11.0);
  EXPECT_EQ(p[3], 0.0);

  Rng rng(3);
  std::map<std::string, int> hits;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++hits[sample_parent(pop, Criterion::kObjective, 3, rng).id()];
  EXPECT_NEAR(hits[pop[1].id()] / double(draws), 6.0 / 11.0, 0.01);
  EXPECT_NEAR(hits[pop[0].id()] / double(draws), 2.0 / 11.0, 0.01);
  EXPECT_EQ(hits.count(pop[3].id()), 0u);

  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(sample_parent(pop, Criterion::kObjective, 1, rng).id(), pop[1].id());
    EXPECT_EQ(sample_parent(pop, Criterion::kAlignment, 1, rng).id(), pop[0].id());
  }
  const auto all = parent_probabilities(pop, Criterion::kAlignment, 50);
  EXPECT_DOUBLE_EQ(all[3], 0.25 / (1 + 0.5 + 1.0 / 3 + 0.25));

  Rng a(11), b(11);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(sample_parent(pop, Criterion::kAlignment, 3, a).id(),
              sample_parent(pop, Criterion::kAlignment, 3, b).id());
  }
}

std::vector<Candidate> evaluated_seeds(TaskKind task, const InstanceSet& design,
                                       const EvolutionConfig& cfg) {
  auto teacher = teacher::scripted_teacher(task, heurevo::testing::default_teacher(task));
  std::vector<Candidate> out;
  for (const auto& p : seed_programs(task, 6, 1)) {
    out.push_back(evaluate_candidate(p, design, teacher.get(), cfg, 0));
  }
  return out;
}

TEST(ProposeChildren, ModeCycleParentsAndDeterminism) {
  EvolutionConfig cfg;
  const auto design = heurevo::testing::small_set(TaskKind::kJssp, 3, 1);
  const auto pop = evaluated_seeds(TaskKind::kJssp, design, cfg);
  genbackend::MockBackend backend({42, 0.0});
  Rng rng(1);
  const auto kids = propose_children(pop, {}, backend, cfg, rng);
  ASSERT_EQ(kids.size(), 5u);
  using dsl::RevisionMode;
  const RevisionMode expect[] = {RevisionMode::kStructural, RevisionMode::kCalibration,
                                 RevisionMode::kFusion, RevisionMode::kStructural,
                                 RevisionMode::kCalibration};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(kids[i].mode, expect[i]);
    EXPECT_EQ(kids[i].parent_ids.size(), kids[i].mode == RevisionMode::kFusion ? 2u : 1u);
    ASSERT_TRUE(kids[i].program);
    EXPECT_EQ(kids[i].program->parent_ids(), kids[i].parent_ids);
    EXPECT_EQ(kids[i].program->revision_mode(), kids[i].mode);
    EXPECT_FALSE(kids[i].program->description().empty());
  }
  EXPECT_EQ(backend.generation_calls(), 5u);

  genbackend::MockBackend again({42, 0.0});
  Rng rng2(1);
  const auto kids2 = propose_children(pop, {}, again, cfg, rng2);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(kids2[i].program->id(), kids[i].program->id());

  cfg.ablation.no_calibration = true;
  Rng rng3(1);
  const auto kids3 = propose_children(pop, {}, again, cfg, rng3);
  EXPECT_EQ(kids3[1].mode, RevisionMode::kFusion);
  EXPECT_EQ(kids3[2].mode, RevisionMode::kStructural);
}

// Answers prose for the first `failures` calls, then defers to the mock.
class FlakyBackend : public genbackend::MockBackend {
 public:
  explicit FlakyBackend(int failures) : failures_(failures) {}

 protected:
  std::string do_generate(const genbackend::GenerationRequest& r) override {
    if (failures_-- > 0) return failures_ % 2 ? "no braces, no code" : "{desc}\n```\nbogus_name\n```";
    return MockBackend::do_generate(r);
  }

 private:
  int failures_;
};

TEST(ProposeChildren, RetriesThenDiscards) {
  EvolutionConfig cfg;
  cfg.budget = 3;
  const auto design = heurevo::testing::small_set(TaskKind::kJssp, 2, 2);
  const auto pop = evaluated_seeds(TaskKind::kJssp, design, cfg);
  FlakyBackend backend(4);
  Rng rng(5);
  const auto kids = propose_children(pop, {}, backend, cfg, rng);
  // Slot 0 burns three attempts and is discarded; slot 1 succeeds on its
  // second attempt; slot 2 on its first.
  ASSERT_EQ(kids.size(), 3u);
  EXPECT_FALSE(kids[0].program);
  EXPECT_EQ(kids[0].attempts, 3);
  EXPECT_FALSE(kids[0].failure.empty());
  ASSERT_TRUE(kids[1].program);
  EXPECT_EQ(kids[1].attempts, 2);
  EXPECT_EQ(kids[2].attempts, 1);
  EXPECT_EQ(backend.generation_calls(), 6u);
  EXPECT_LE(backend.generation_calls(), cfg.budget * (1 + cfg.retries));
}

std::string file_hash(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return content_hash(ss.str());
}

struct Run {
  EvolutionResult result;
  std::uint64_t analyzer_calls;
};

EvolutionConfig jssp_config(std::uint64_t seed) {
  EvolutionConfig cfg;
  cfg.task = TaskKind::kJssp;
  cfg.population = 10;
  cfg.generations = 5;
  cfg.budget = 5;
  cfg.seed = seed;
  cfg.workers = 4;
  return cfg;
}

EvolutionResult run_jssp(const EvolutionConfig& cfg, const std::string& dir = {},
                         bool resume = false) {
  const auto design = heurevo::testing::small_set(TaskKind::kJssp, 8, 21);
  genbackend::MockBackend backend({cfg.seed, 0.0});
  return run_evolution(cfg, design, teacher::scripted_teacher(TaskKind::kJssp, "lb_teacher"),
                       backend, {dir, resume});
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("heurevo_evolution_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(RunEvolution, ZeroGenerationsReturnsBestSeed) {
  auto cfg = jssp_config(3);
  cfg.generations = 0;
  const auto r = run_jssp(cfg);
  ASSERT_TRUE(r.best);
  double best = kInvalidObjective;
  for (const auto& c : r.archive) best = std::min(best, c.objective);
  EXPECT_EQ(r.best->objective, best);
  EXPECT_EQ(r.best->program.revision_mode(), dsl::RevisionMode::kSeed);
  EXPECT_EQ(r.generation_calls + r.analyzer_calls, 0u);
}

TEST(RunEvolution, MockJsspRunInvariants) {
  const auto dir = temp_dir("a");
  const auto cfg = jssp_config(7);
  const auto r = run_jssp(cfg, dir.string());
  ASSERT_EQ(r.history.size(), 6u);
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    EXPECT_LE(r.history[g].best_so_far, r.history[g - 1].best_so_far);
    EXPECT_TRUE(r.history[g].analyzer_invoked);
    const auto calls = r.history[g].generation_calls - r.history[g - 1].generation_calls;
    const auto an = r.history[g].analyzer_calls - r.history[g - 1].analyzer_calls;
    EXPECT_LE(calls, cfg.budget * (1 + cfg.retries));
    EXPECT_EQ(an, 1u);
    EXPECT_EQ(r.history[g].children + r.history[g].discarded + r.history[g].duplicates, cfg.budget);
  }
  EXPECT_EQ(r.analyzer_calls, 5u);
  // Lineage: every parent is archived and strictly older.
  std::map<std::string, int> born;
  for (const auto& c : r.archive) born.emplace(c.id(), c.generation_born);
  for (const auto& c : r.archive) {
    if (c.program.revision_mode() == dsl::RevisionMode::kSeed) {
      EXPECT_TRUE(c.program.parent_ids().empty());
      continue;
    }
    ASSERT_FALSE(c.program.parent_ids().empty());
    for (const auto& pid : c.program.parent_ids()) {
      ASSERT_TRUE(born.count(pid)) << pid;
      EXPECT_LT(born[pid], c.generation_born);
    }
  }
  // Final pick = best objective among members ever retained.
  std::set<std::string> retained;
  for (const auto& h : r.history) retained.insert(h.population_ids.begin(), h.population_ids.end());
  double best = kInvalidObjective;
  for (const auto& c : r.archive) {
    if (retained.count(c.id())) best = std::min(best, c.objective);
  }
  EXPECT_EQ(r.best->objective, best);
  EXPECT_EQ(r.best->objective, r.history.back().best_so_far);

  // Artifacts on disk mirror the in-memory archive.
  const auto archived = read_archive((dir / "archive.jsonl").string(), TaskKind::kJssp);
  EXPECT_EQ(ids_of(archived), ids_of(r.archive));
  EXPECT_EQ(read_checkpoints(dir.string()).size(), 6u);

  const auto dir2 = temp_dir("b");
  const auto r2 = run_jssp(cfg, dir2.string());
  EXPECT_EQ(file_hash(dir / "archive.jsonl"), file_hash(dir2 / "archive.jsonl"));
  EXPECT_EQ(r2.best->id(), r.best->id());
}

TEST(RunEvolution, ResumeMatchesUninterruptedRun) {
  const auto full = temp_dir("full");
  const auto part = temp_dir("part");
  auto cfg = jssp_config(11);
  const auto a = run_jssp(cfg, full.string());
  auto short_cfg = cfg;
  short_cfg.generations = 2;
  run_jssp(short_cfg, part.string());
  // Simulate a crash mid-generation: stray lines past the last checkpoint.
  {
    std::ofstream junk(part / "archive.jsonl", std::ios::app);
    auto extra = make_candidate(999, 1, 0);
    extra.generation_born = 3;
    junk << candidate_to_json(extra).dump() << '\n';
  }
  const auto b = run_jssp(cfg, part.string(), true);
  EXPECT_EQ(file_hash(full / "archive.jsonl"), file_hash(part / "archive.jsonl"));
  EXPECT_EQ(a.best->id(), b.best->id());
  EXPECT_EQ(a.generation_calls, b.generation_calls);
  EXPECT_EQ(a.analyzer_calls, b.analyzer_calls);
  ASSERT_EQ(b.history.size(), a.history.size());
}

TEST(RunEvolution, PerformanceOnlyAndMaxAlign) {
  auto cfg = jssp_config(5);
  cfg.ablation.performance_only = true;
  const auto r = run_jssp(cfg);
  EXPECT_EQ(r.analyzer_calls, 0u);
  for (const auto& c : r.archive) {
    EXPECT_EQ(c.align(), 0.0);
    EXPECT_EQ(c.diagnostics.n_states, 0u);
  }

  cfg = jssp_config(5);
  cfg.ablation.max_align_selection = true;
  const auto m = run_jssp(cfg);
  std::set<std::string> retained;
  for (const auto& h : m.history) retained.insert(h.population_ids.begin(), h.population_ids.end());
  double top = -1;
  for (const auto& c : m.archive) {
    if (retained.count(c.id())) top = std::max(top, c.align());
  }
  EXPECT_EQ(m.best->align(), top);
}

TEST(RunEvolution, AnalyzerScheduleAndAblations) {
  auto cfg = jssp_config(2);
  cfg.generations = 4;
  cfg.teacher_every = 2;
  EXPECT_EQ(run_jssp(cfg).analyzer_calls, 2u);
  cfg.teacher_every = 1;
  cfg.ablation.no_analyzer = true;
  EXPECT_EQ(run_jssp(cfg).analyzer_calls, 0u);

  Ablation a;
  for (const char* f : {"performance-only", "no-analyzer", "no-teacher-ops", "no-pareto",
                        "max-align", "no-structural", "no-calibration", "no-fusion"}) {
    apply_ablation(a, f);
  }
  EXPECT_EQ(ablation_names(a).size(), 8u);
  EXPECT_THROW(apply_ablation(a, "no-such-flag"), std::invalid_argument);
  cfg.ablation = a;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunEvolution, GenericOperatorsDropTeacherContent) {
  EvolutionConfig cfg;
  cfg.ablation.no_teacher_ops = true;
  const auto design = heurevo::testing::small_set(TaskKind::kJssp, 2, 3);
  const auto pop = evaluated_seeds(TaskKind::kJssp, design, cfg);

  class Capture : public genbackend::MockBackend {
   public:
    std::vector<genbackend::GenerationRequest> seen;

   protected:
    std::string do_generate(const genbackend::GenerationRequest& r) override {
      seen.push_back(r);
      return MockBackend::do_generate(r);
    }
  } backend;
  Rng rng(4);
  genbackend::BriefSet briefs;
  briefs.structural.text = "brief text";
  propose_children(pop, briefs, backend, cfg, rng);
  for (const auto& r : backend.seen) {
    EXPECT_FALSE(r.teacher_guided);
    EXPECT_TRUE(r.brief.empty());
    EXPECT_TRUE(r.disagreements.empty());
    const auto prompt = genbackend::build_prompt(r);
    EXPECT_EQ(prompt[1].content.find("align ="), std::string::npos);
  }
}

}  // namespace
}  // namespace heurevo::evolution
