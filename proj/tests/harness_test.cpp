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

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "heurevo/evolution/archive.hpp"
#include "heurevo/harness/config.hpp"
#include "heurevo/harness/instances.hpp"
#include "heurevo/harness/report.hpp"
#include "heurevo/harness/run.hpp"
#include "heurevo/util/hash.hpp"

namespace fs = std::filesystem;
using namespace heurevo;
using namespace heurevo::harness;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("heurevo_harness_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kMockJssp = R"(
task: jssp
seed: 11
design: {kind: random, jobs: 6, machines: 6, count: 6}
evolution: {population: 10, generations: 3, budget: 4}
teacher: {kind: scripted, name: lb_teacher}
backend: {kind: mock}
)";

std::string config_error(const std::string& yaml) {
  try {
    parse_run_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(RunConfig, ParsesEverySection) {
  const auto cfg = parse_run_config(R"(
task: maxcut
seed: 5
design: {kind: ba, n: 60, m: 3, weighting: w, count: 4}
eval:
  - {kind: er, n: 40, p: 0.1, count: 2, seed: 9}
  - {kind: files, files: [graphs/a.edges, /abs/b.edges]}
evolution: {population: 6, generations: 2, budget: 3, top_k: 4, lambda: 0.25, retries: 1,
            teacher_every: 2, random_seeds: 3, prompt_disagreements: 2, analyzer_disagreements: 5}
sampling: {stride: 4, cap: 16}
task_options: {maxcut_steps_per_vertex: 1.5, maxcut_all_plus: true}
workers: 3
ablation: [no-pareto, no-fusion]
teacher: {kind: scripted, name: best_gain_teacher, capability: action_only}
backend: {kind: mock, seed: 99, fault_rate: 0.1}
)",
                                    "/base");
  EXPECT_EQ(cfg.task, TaskKind::kMaxCut);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.design.kind, "ba");
  EXPECT_EQ(cfg.design.n, 60);
  EXPECT_EQ(cfg.design.weighting, maxcut::Weighting::kSigned);
  EXPECT_EQ(cfg.design.seed, 5u);  // inherits the run seed
  ASSERT_EQ(cfg.eval.size(), 2u);
  EXPECT_EQ(cfg.eval[0].seed, 9u);
  EXPECT_EQ(cfg.eval[1].paths, (std::vector<std::string>{"/base/graphs/a.edges", "/abs/b.edges"}));
  const auto& ev = cfg.evolution;
  EXPECT_EQ(ev.task, TaskKind::kMaxCut);
  EXPECT_EQ(ev.seed, 5u);
  EXPECT_EQ(ev.population, 6u);
  EXPECT_EQ(ev.generations, 2);
  EXPECT_EQ(ev.budget, 3u);
  EXPECT_EQ(ev.top_k, 4u);
  EXPECT_DOUBLE_EQ(ev.lambda, 0.25);
  EXPECT_EQ(ev.retries, 1);
  EXPECT_EQ(ev.teacher_every, 2);
  EXPECT_EQ(ev.random_seeds, 3u);
  EXPECT_EQ(ev.prompt_disagreements, 2u);
  EXPECT_EQ(ev.analyzer_disagreements, 5u);
  EXPECT_EQ(ev.sampling.stride, 4u);
  EXPECT_EQ(ev.sampling.cap, 16u);
  EXPECT_DOUBLE_EQ(ev.task_options.maxcut_steps_per_vertex, 1.5);
  EXPECT_TRUE(ev.task_options.maxcut_all_plus);
  EXPECT_EQ(ev.workers, 3u);
  EXPECT_TRUE(ev.ablation.no_pareto);
  EXPECT_TRUE(ev.ablation.no_fusion);
  EXPECT_FALSE(ev.ablation.no_structural);
  EXPECT_EQ(cfg.teacher.name, "best_gain_teacher");
  EXPECT_EQ(cfg.teacher.capability, teacher::Capability::kActionOnly);
  EXPECT_TRUE(cfg.backend.seed_set);
  EXPECT_EQ(cfg.backend.mock.seed, 99u);
  EXPECT_DOUBLE_EQ(cfg.backend.mock.fault_rate, 0.1);
}

TEST(RunConfig, DefaultsFollowTheTask) {
  const auto cfg = parse_run_config("task: tsp\nseed: 3\n");
  EXPECT_EQ(cfg.design.kind, "uniform");
  EXPECT_EQ(cfg.design.nodes, 50);
  EXPECT_EQ(cfg.design.count, 8u);
  EXPECT_EQ(cfg.evolution.population, 10u);
  EXPECT_EQ(cfg.evolution.generations, 5);
  EXPECT_EQ(cfg.evolution.budget, 5u);
  EXPECT_EQ(cfg.teacher.kind, "scripted");
  EXPECT_EQ(cfg.backend.kind, "mock");
  EXPECT_NE(make_teacher(cfg.teacher, cfg.task), nullptr);
  EXPECT_EQ(make_teacher({.kind = "none"}, cfg.task), nullptr);
}

TEST(RunConfig, ErrorsNameTheField) {
  EXPECT_EQ(config_error("task: jssp\n"), "seed: required");
  EXPECT_EQ(config_error("seed: 1\n"), "task: required");
  EXPECT_EQ(config_error("task: knapsack\nseed: 1\n").rfind("task: ", 0), 0u);
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nevolution: {popsize: 4}\n"),
            "evolution.popsize: unknown key");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nfoo: 1\n"), "foo: unknown key");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nevolution: {population: ten}\n"),
            "evolution.population: 'ten' is not an integer");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nevolution: {budget: -1}\n"),
            "evolution.budget: must not be negative");
  EXPECT_NE(config_error("task: jssp\nseed: 1\nevolution: {population: 1}\n").find("evolution.population"),
            std::string::npos);
  EXPECT_NE(config_error("task: jssp\nseed: 1\nevolution: {budget: 0}\n").find("evolution.budget"),
            std::string::npos);
  EXPECT_EQ(config_error("task: jssp\nseed: 1\neval: [{kind: random, jobs: 3, machines: 3, colour: 2}]\n"),
            "eval[0].colour: unknown key");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\ndesign: {jobs: 3}\n"), "design.kind: required");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nablation: [no-such-thing]\n").rfind("ablation[0]: ", 0), 0u);
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nteacher: {kind: external}\n"),
            "teacher.command: required for a process teacher");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nteacher: {name: oracle}\n"),
            "teacher.name: no scripted teacher 'oracle' for jssp");
  EXPECT_EQ(config_error("task: jssp\nseed: 1\nbackend: {kind: llm, model: m}\n"),
            "backend.url: required for the llm backend");
  EXPECT_EQ(config_error("task: jssp\nseed: [1\n").rfind("invalid YAML", 0), 0u);
}

TEST(InstanceSpec, CompactForm) {
  auto s = parse_instance_spec("taillard:ids=21-23+30");
  EXPECT_EQ(s.taillard_ids, (std::vector<int>{21, 22, 23, 30}));
  s = parse_instance_spec("ba:n=200,m=4,weighting=w,count=5,seed=2");
  EXPECT_EQ(s.n, 200);
  EXPECT_EQ(s.m, 4);
  EXPECT_EQ(s.count, 5u);
  EXPECT_EQ(s.seed, 2u);
  EXPECT_EQ(default_set_name(TaskKind::kMaxCut, s), "ba200w");
  s = parse_instance_spec("dir:some/where,seed=4");
  EXPECT_EQ(s.paths, (std::vector<std::string>{"some/where"}));
  EXPECT_EQ(s.seed, 4u);
  EXPECT_THROW(parse_instance_spec("random:jobs=x"), std::invalid_argument);
  EXPECT_THROW(parse_instance_spec("random:colour=2"), std::invalid_argument);
  EXPECT_THROW(parse_instance_spec("files:"), std::invalid_argument);
}

TEST(InstanceSets, GeneratedSetsAreSeededAndNamed) {
  const auto spec = parse_instance_spec("random:jobs=20,machines=20,count=4,seed=1");
  const auto a = build_instance_set(TaskKind::kJssp, spec, Split::kDesign);
  const auto b = build_instance_set(TaskKind::kJssp, spec, Split::kDesign);
  ASSERT_EQ(a.instances.size(), 4u);
  EXPECT_EQ(a.name, "jssp20x20");
  EXPECT_EQ(a.instances[2].name(), "jssp20x20-002");
  const auto da = fresh_dir("gen_a"), db = fresh_dir("gen_b");
  const auto pa = write_instance_set(a, da.string());
  const auto pb = write_instance_set(b, db.string());
  std::set<std::string> hashes;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(content_hash(slurp(pa[i])), content_hash(slurp(pb[i])));
    hashes.insert(content_hash(slurp(pa[i])));
  }
  EXPECT_EQ(hashes.size(), 4u);  // instances differ from each other

  // Instance i depends only on (seed, i), not on the count.
  auto bigger = spec;
  bigger.count = 6;
  const auto c = build_instance_set(TaskKind::kJssp, bigger, Split::kDesign);
  const auto pc = write_instance_set(c, fresh_dir("gen_c").string());
  EXPECT_EQ(slurp(pc[3]), slurp(pa[3]));
}

TEST(InstanceSets, TspCoordinatesInUnitSquare) {
  const auto set =
      build_instance_set(TaskKind::kTsp, parse_instance_spec("uniform:nodes=50,count=10,seed=3"),
                         Split::kEval);
  for (const auto& inst : set.instances) {
    ASSERT_EQ(inst.routing().size(), 50u);
    for (const auto& p : inst.routing().coords) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1.0);
    }
  }
}

TEST(InstanceSets, FilesRoundTripForEveryTask) {
  const std::vector<std::pair<TaskKind, std::string>> cases = {
      {TaskKind::kJssp, "random:jobs=5,machines=4,count=3,seed=8"},
      {TaskKind::kTsp, "uniform:nodes=20,count=3,seed=8"},
      {TaskKind::kCvrp, "uniform:customers=20,count=3,seed=8"},
      {TaskKind::kMaxCut, "ba:n=200,m=4,weighting=w,count=3,seed=8"},
      {TaskKind::kMaxCut, "er:n=50,p=0.2,weighting=signed,count=3,seed=8"}};
  for (const auto& [task, text] : cases) {
    SCOPED_TRACE(text);
    auto spec = parse_instance_spec(text);
    const auto set = build_instance_set(task, spec, Split::kEval);
    const auto dir = fresh_dir("roundtrip");
    const auto paths = write_instance_set(set, dir.string());
    InstanceSpec from_dir;
    from_dir.kind = "dir";
    from_dir.paths = {dir.string()};
    from_dir.seed = spec.seed;
    const auto back = build_instance_set(task, from_dir, Split::kEval);
    ASSERT_EQ(back.instances.size(), set.instances.size());
    // Same files when written again, and the same rollouts.
    const auto again = write_instance_set(back, fresh_dir("roundtrip2").string());
    for (std::size_t i = 0; i < paths.size(); ++i) EXPECT_EQ(slurp(paths[i]), slurp(again[i]));
    const auto rule = resolve_method(task, classical_rules(task).front().first);
    EXPECT_EQ(evaluate_objective(rule.selector, set), evaluate_objective(rule.selector, back));
  }
}

TEST(InstanceSets, CvrpCapacityAndErrors) {
  auto set = build_instance_set(TaskKind::kCvrp, parse_instance_spec("uniform:customers=50,count=2"),
                                Split::kEval);
  EXPECT_DOUBLE_EQ(set.instances[0].routing().capacity, 40.0);
  set = build_instance_set(TaskKind::kCvrp,
                           parse_instance_spec("uniform:customers=20,capacity=25,count=1"),
                           Split::kEval);
  EXPECT_DOUBLE_EQ(set.instances[0].routing().capacity, 25.0);

  EXPECT_THROW(build_instance_set(TaskKind::kTsp, parse_instance_spec("files:/no/such.tsp"),
                                  Split::kEval),
               std::runtime_error);
  EXPECT_THROW(build_instance_set(TaskKind::kJssp, parse_instance_spec("taillard:ids=10"),
                                  Split::kEval),
               std::invalid_argument);
  EXPECT_THROW(build_instance_set(TaskKind::kTsp, parse_instance_spec("ba:n=10,m=2"), Split::kEval),
               std::invalid_argument);
  // A TSP file is not a CVRP instance.
  const auto tsp = build_instance_set(TaskKind::kTsp, parse_instance_spec("uniform:nodes=8"),
                                      Split::kEval);
  const auto paths = write_instance_set(tsp, fresh_dir("kind").string());
  EXPECT_THROW(read_instance_file(TaskKind::kCvrp, paths[0]), std::runtime_error);
}

TEST(Bench, TaillardRulesMatchGoldenReport) {
  const auto set = build_instance_set(TaskKind::kJssp, parse_instance_spec("taillard:ids=21-30"),
                                      Split::kEval);
  std::vector<Method> methods;
  for (const char* m : {"spt", "mwkr", "fdd-mwkr", "mor"}) {
    methods.push_back(resolve_method(TaskKind::kJssp, m));
  }
  const auto rows = run_bench(TaskKind::kJssp, {set}, methods);
  auto produced = csv_rows(format_csv(rows));
  for (std::size_t i = 1; i < produced.size(); ++i) produced[i][3] = "*";
  const auto golden =
      csv_rows(slurp(fs::path(HEUREVO_TEST_DATA_DIR) / "golden" / "bench_ta21-30.csv"));
  EXPECT_EQ(produced, golden);
  for (const auto& r : rows) EXPECT_GE(r.runtime_seconds, 0.0);

  const auto j = report_json(TaskKind::kJssp, rows);
  EXPECT_EQ(j["objective"], "makespan");
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][1]["method"], "mwkr");
  EXPECT_DOUBLE_EQ(j["rows"][1]["objective"].get<double>(), 2079.5);
}

TEST(Bench, RowOrderIsDatasetMajor) {
  const auto a = build_instance_set(TaskKind::kTsp, parse_instance_spec("uniform:nodes=10,count=2,name=a"),
                                    Split::kEval);
  const auto b = build_instance_set(TaskKind::kTsp, parse_instance_spec("uniform:nodes=12,count=2,name=b"),
                                    Split::kEval);
  const auto rows = run_bench(TaskKind::kTsp, {a, b},
                              {resolve_method(TaskKind::kTsp, "nearest_neighbor"),
                               resolve_method(TaskKind::kTsp, "teacher:greedy_insertion_teacher")},
                              {}, 2);
  ASSERT_EQ(rows.size(), 4u);
  const std::vector<std::pair<std::string, std::string>> order = {
      {"a", "nearest_neighbor"},
      {"a", "teacher:greedy_insertion_teacher"},
      {"b", "nearest_neighbor"},
      {"b", "teacher:greedy_insertion_teacher"}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].dataset, order[i].first);
    EXPECT_EQ(rows[i].method, order[i].second);
  }
  // The scripted teacher scores -dist_from_current, same as nearest neighbor.
  EXPECT_EQ(rows[0].objective, rows[1].objective);
}

TEST(Bench, MaxCutReportsPositiveCut) {
  const auto set = build_instance_set(TaskKind::kMaxCut,
                                      parse_instance_spec("ba:n=60,m=3,count=3,seed=2"), Split::kEval);
  const auto method = resolve_method(TaskKind::kMaxCut, "greedy_gain");
  const auto rows = run_bench(TaskKind::kMaxCut, {set}, {method});
  ASSERT_EQ(rows.size(), 1u);
  const double engine = evaluate_objective(method.selector, set);
  EXPECT_LT(engine, 0.0);
  EXPECT_EQ(rows[0].objective, -engine);
  EXPECT_EQ(objective_label(TaskKind::kMaxCut), "cut");
}

TEST(Bench, MethodResolution) {
  EXPECT_THROW(resolve_method(TaskKind::kJssp, "fifo"), std::invalid_argument);
  EXPECT_THROW(resolve_method(TaskKind::kJssp, "teacher:nobody"), std::invalid_argument);
  EXPECT_THROW(resolve_method(TaskKind::kJssp, "/no/such/file.heur"), std::runtime_error);
  EXPECT_THROW(run_bench(TaskKind::kJssp, {}, {}), std::invalid_argument);

  const auto prog = jssp::baseline_rule("mor").with_meta({.description = "most operations\nremaining"});
  const auto path = fresh_dir("heur") / "mor.heur";
  save_program(prog, path.string());
  const auto text = slurp(path);
  EXPECT_EQ(text, "# most operations remaining\n" + prog.canonical() + "\n");
  EXPECT_EQ(load_program(TaskKind::kJssp, path.string()).id(), prog.id());

  const auto set = build_instance_set(TaskKind::kJssp, parse_instance_spec("taillard:ids=21-22"),
                                      Split::kEval);
  const auto rows = run_bench(TaskKind::kJssp, {set},
                              {resolve_method(TaskKind::kJssp, path.string()),
                               resolve_method(TaskKind::kJssp, "MOR")});
  EXPECT_EQ(rows[0].objective, rows[1].objective);
}

class EvolveRun : public ::testing::Test {
 protected:
  static EvolveSummary run(const std::string& yaml, const fs::path& dir) {
    return run_evolve(parse_run_config(yaml), {.run_dir = dir.string(), .console_log = false});
  }
};

TEST_F(EvolveRun, WritesArtifactsAndIsReproducible) {
  const auto d1 = fresh_dir("run1"), d2 = fresh_dir("run2");
  const auto s1 = run(kMockJssp, d1);
  run(kMockJssp, d2);
  for (const char* f : {"archive.jsonl", "run.log", "best.heur", "convergence.csv", "run.json"}) {
    EXPECT_TRUE(fs::is_regular_file(d1 / f)) << f;
  }
  EXPECT_TRUE(fs::is_regular_file(d1 / "checkpoints" / "gen_0003.json"));
  EXPECT_FALSE(fs::exists(d1 / "eval.csv"));
  EXPECT_EQ(content_hash(slurp(d1 / "best.heur")), content_hash(slurp(d2 / "best.heur")));
  EXPECT_EQ(content_hash(slurp(d1 / "archive.jsonl")), content_hash(slurp(d2 / "archive.jsonl")));
  EXPECT_GT(fs::file_size(d1 / "run.log"), 0u);

  ASSERT_TRUE(s1.result.best);
  EXPECT_EQ(load_program(TaskKind::kJssp, (d1 / "best.heur").string()).id(), s1.result.best->id());

  const auto csv = csv_rows(slurp(d1 / "convergence.csv"));
  ASSERT_EQ(csv.size(), 5u);  // header + generations 0..3
  EXPECT_EQ(csv[0][0], "generation");
  EXPECT_EQ(csv[0][1], "best_so_far");
  for (std::size_t i = 2; i < csv.size(); ++i) {
    EXPECT_LE(std::stod(csv[i][1]), std::stod(csv[i - 1][1]));
  }
  EXPECT_DOUBLE_EQ(std::stod(csv.back()[1]), s1.result.best->objective);

  const auto run_json = nlohmann::json::parse(slurp(d1 / "run.json"));
  EXPECT_EQ(run_json["config"]["task"], "jssp");
  EXPECT_EQ(run_json["config"]["seed"], 11);
  EXPECT_EQ(run_json["result"]["best"]["id"], s1.result.best->id());
}

TEST_F(EvolveRun, PerformanceOnlyZeroesAlign) {
  const auto d = fresh_dir("perf");
  run(std::string(kMockJssp) + "ablation: [performance-only]\n", d);
  std::ifstream in(d / "archive.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["align"].get<double>(), 0.0);
    EXPECT_EQ(j["n_states"].get<int>(), 0);
    ++n;
  }
  EXPECT_GT(n, 10u);
}

TEST_F(EvolveRun, EvalSetsAndResume) {
  const std::string yaml = std::string(kMockJssp) + "eval: [{kind: taillard, ids: [21, 22]}]\n";
  const auto d = fresh_dir("eval");
  const auto s = run(yaml, d);
  ASSERT_EQ(s.eval_rows.size(), 1u);
  EXPECT_EQ(s.eval_rows[0].dataset, "ta21-22");
  EXPECT_TRUE(fs::is_regular_file(d / "eval.csv"));
  const auto archive = slurp(d / "archive.jsonl");

  // Resume after the last checkpoint has nothing left to do.
  const auto again = run_evolve(parse_run_config(yaml), {.run_dir = d.string(), .resume = true, .console_log = false});
  EXPECT_EQ(slurp(d / "archive.jsonl"), archive);
  EXPECT_EQ(again.result.best->id(), s.result.best->id());

  // Different config in an existing run directory is refused on resume.
  EXPECT_THROW(run_evolve(parse_run_config(std::string(kMockJssp) + "workers: 2\n"),
                          {.run_dir = d.string(), .resume = true, .console_log = false}),
               std::runtime_error);
}

TEST_F(EvolveRun, InspectReportsGenerationsAndLineage) {
  const auto d = fresh_dir("inspect");
  const auto s = run(kMockJssp, d);
  const auto info = inspect_run(d.string());
  EXPECT_EQ(info.task, TaskKind::kJssp);
  ASSERT_EQ(info.records.size(), 4u);
  EXPECT_EQ(info.records.back().generation, 3);
  for (std::size_t g = 1; g < info.records.size(); ++g) {
    EXPECT_LE(info.records[g].best_so_far, info.records[g - 1].best_so_far);
  }
  EXPECT_TRUE(info.lineage_errors.empty());
  EXPECT_EQ(info.archive.size(), s.result.archive.size());

  const auto table = format_generations(info);
  EXPECT_NE(table.find("3 generations"), std::string::npos);
  EXPECT_NE(table.find("lineage ok"), std::string::npos);

  // A child with disagreement cases prints them with feature names.
  const evolution::Candidate* pick = nullptr;
  for (const auto& c : info.archive) {
    if (!c.diagnostics.disagreements.empty() && !c.program.parent_ids().empty()) pick = &c;
  }
  ASSERT_NE(pick, nullptr);
  const auto text = format_candidate(info, pick->id().substr(0, 8));
  EXPECT_NE(text.find(pick->program.canonical()), std::string::npos);
  EXPECT_NE(text.find("D1 step"), std::string::npos);
  EXPECT_NE(text.find("proc_time="), std::string::npos);
  EXPECT_THROW(format_candidate(info, "zzzz"), std::invalid_argument);

  // Dangling parent and corrupt line.
  auto lines = slurp(d / "archive.jsonl");
  {
    auto j = nlohmann::json::parse(lines.substr(lines.rfind('\n', lines.size() - 2) + 1));
    const auto first_line = lines.substr(0, lines.find('\n'));
    auto seed = nlohmann::json::parse(first_line);
    std::ofstream out(d / "archive.jsonl");
    out << first_line << "\n";  // only the first seed survives
    out << j.dump() << "\n";
  }
  const auto broken = inspect_run(d.string());
  EXPECT_FALSE(broken.lineage_errors.empty());
  {
    std::ofstream out(d / "archive.jsonl", std::ios::app);
    out << "{not json\n";
  }
  EXPECT_THROW(inspect_run(d.string()), std::runtime_error);
}

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HEUREVO_CLI) + " -q " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto d = fresh_dir("cli");
  {
    std::ofstream(d / "ok.yaml") << kMockJssp;
    std::ofstream(d / "bad.yaml") << "task: jssp\nevolution: {population: 4}\n";
  }
  EXPECT_EQ(run_cli("evolve --config " + (d / "ok.yaml").string() + " --out " + (d / "run").string()), 0);
  EXPECT_TRUE(fs::is_regular_file(d / "run" / "best.heur"));
  EXPECT_EQ(run_cli("evolve --config " + (d / "bad.yaml").string()), 2);
  EXPECT_EQ(run_cli("evolve --config " + (d / "missing.yaml").string()), 2);
  EXPECT_EQ(run_cli("evolve --config " + (d / "ok.yaml").string() + " --ablation bogus"), 2);
  EXPECT_EQ(run_cli("inspect --archive " + (d / "run").string()), 0);
  EXPECT_EQ(run_cli("inspect --archive " + (d / "nothing").string()), 1);

  EXPECT_EQ(run_cli("bench --task jssp --methods spt,mor --instances taillard:ids=21-22 --csv " +
                    (d / "b.csv").string()),
            0);
  EXPECT_EQ(csv_rows(slurp(d / "b.csv")).size(), 3u);
  EXPECT_EQ(run_cli("bench --task jssp --methods \"\" --instances taillard:ids=21-22"), 2);
  EXPECT_EQ(run_cli("bench --task jssp --instances taillard:ids=21-22"), 2);
  EXPECT_EQ(run_cli("bench --task jssp --methods spt"), 2);
  EXPECT_EQ(run_cli("bench --task tsp --methods nearest_neighbor --instances files:/no/such.tsp"), 1);
  EXPECT_EQ(run_cli("bench --task jssp --methods " + (d / "run" / "best.heur").string() +
                    " --instances random:jobs=8,machines=8,count=3"),
            0);

  EXPECT_EQ(run_cli("gen-instances --task jssp --jobs 20 --machines 20 --count 5 --seed 1 --out " +
                    (d / "gen").string()),
            0);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d / "gen")) ++files;
  EXPECT_EQ(files, 5u);
  EXPECT_EQ(run_cli("gen-instances --task jssp --jobs 0 --machines 3 --out " + (d / "x").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Experiments, EveryConfigParsesAndAblationsAreConfigDiffs) {
  const fs::path root(HEUREVO_EXPERIMENTS_DIR);
  std::size_t parsed = 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.path().extension() != ".yaml") continue;
    SCOPED_TRACE(e.path().string());
    const auto cfg = load_run_config(e.path().string());
    ++parsed;
    if (e.path().parent_path().parent_path().filename() != "ablations") continue;
    const auto base_path = root / (e.path().parent_path().filename().string() + ".yaml");
    auto base = load_run_config(base_path.string());
    // The file name is the single ablation flag applied.
    evolution::apply_ablation(base.evolution.ablation, e.path().stem().string());
    EXPECT_EQ(base.evolution.ablation, cfg.evolution.ablation);
    EXPECT_EQ(evolution::ablation_names(cfg.evolution.ablation).size(), 1u);
    EXPECT_EQ(nlohmann::json(evolution::ablation_names(cfg.evolution.ablation)).dump(),
              nlohmann::json(std::vector<std::string>{e.path().stem().string()}).dump());
    EXPECT_EQ(base.evolution.population, cfg.evolution.population);
    EXPECT_EQ(base.evolution.generations, cfg.evolution.generations);
    EXPECT_EQ(base.design.kind, cfg.design.kind);
    EXPECT_EQ(base.eval.size(), cfg.eval.size());
    EXPECT_EQ(base.seed, cfg.seed);
  }
  EXPECT_GE(parsed, 4u + 4u + 16u);
}
