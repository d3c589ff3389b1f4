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

// heurevo: evolve heuristics, benchmark policies, generate and inspect.
// Exit codes: 0 ok, 1 domain error, 2 usage or configuration error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "heurevo/harness/config.hpp"
#include "heurevo/harness/instances.hpp"
#include "heurevo/harness/report.hpp"
#include "heurevo/harness/run.hpp"

namespace fs = std::filesystem;
using namespace heurevo;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Raised for command-line misuse discovered after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EvolveArgs {
  std::string config, out;
  bool resume = false;
  std::vector<std::string> ablation;
  std::size_t workers = 0;
};

struct BenchArgs {
  std::string task, config, csv, json, dispatch;
  std::vector<std::string> methods, instances;
  std::size_t workers = 1;
  std::string format = "text";
};

struct GenArgs {
  std::string task, spec, kind, out, name, weighting = "unit";
  int jobs = 0, machines = 0, nodes = 0, customers = 0, n = 0, m = 0;
  double capacity = 0, p = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct InspectArgs {
  std::string archive, candidate, task;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

int cmd_evolve(const EvolveArgs& a) {
  auto cfg = harness::load_run_config(a.config);
  for (const auto& flag : a.ablation) {
    try {
      evolution::apply_ablation(cfg.evolution.ablation, flag);
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("--ablation: {}", e.what()));
    }
  }
  if (a.workers) cfg.evolution.workers = a.workers;
  std::string out = a.out;
  if (out.empty()) out = cfg.output_dir;
  if (out.empty()) {
    out = (fs::path("runs") / fs::path(a.config).stem()).string();
    const auto names = evolution::ablation_names(cfg.evolution.ablation);
    for (const auto& n : names) out += "-" + n;
  }
  const auto summary = harness::run_evolve(cfg, {.run_dir = out, .resume = a.resume});
  const auto& r = summary.result;
  if (r.best) {
    std::cout << fmt::format("best {} {} {:.4f} align {:.4f}\n", r.best->id(),
                             harness::objective_label(cfg.task),
                             harness::native_objective(cfg.task, r.best->objective), r.best->align());
  } else {
    std::cout << "no valid candidate\n";
  }
  if (!summary.eval_rows.empty()) std::cout << harness::format_table(cfg.task, summary.eval_rows);
  std::cout << "run directory: " << out << "\n";
  return r.best ? kOk : kDomainError;
}

int cmd_bench(const BenchArgs& a) {
  std::vector<std::string> names;
  for (const auto& m : a.methods) {
    if (!m.empty()) names.push_back(m);
  }
  if (names.empty()) throw UsageError("--methods: at least one method is required");
  std::optional<harness::RunConfig> cfg;
  if (!a.config.empty()) cfg = harness::load_run_config(a.config);
  TaskKind task{};
  if (!a.task.empty()) {
    try {
      task = parse_task(a.task);
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("--task: {}", e.what()));
    }
    if (cfg && cfg->task != task) throw UsageError("--task disagrees with the config task");
  } else if (cfg) {
    task = cfg->task;
  } else {
    throw UsageError("--task or --config is required");
  }

  TaskOptions options = cfg ? cfg->evolution.task_options : TaskOptions{};
  if (!a.dispatch.empty()) {
    try {
      options.dispatch = jssp::parse_dispatch_mode(a.dispatch);
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("--dispatch: {}", e.what()));
    }
  }

  std::vector<harness::InstanceSpec> specs;
  for (const auto& text : a.instances) {
    try {
      specs.push_back(harness::parse_instance_spec(text));
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("--instances {}: {}", text, e.what()));
    }
  }
  if (specs.empty() && cfg) specs = cfg->eval;
  if (specs.empty()) throw UsageError("--instances: no instance sets given");

  std::vector<harness::Method> methods;
  for (const auto& m : names) {
    try {
      methods.push_back(harness::resolve_method(task, m));
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("--methods: {}", e.what()));
    }
  }

  std::vector<InstanceSet> sets;
  for (const auto& spec : specs) sets.push_back(harness::build_instance_set(task, spec, Split::kEval));
  const auto rows = harness::run_bench(task, sets, methods, options, a.workers);

  if (a.format == "csv") {
    std::cout << harness::format_csv(rows);
  } else if (a.format == "json") {
    std::cout << harness::report_json(task, rows).dump(2) << "\n";
  } else {
    std::cout << harness::format_table(task, rows);
  }
  if (!a.csv.empty()) write_file(a.csv, harness::format_csv(rows));
  if (!a.json.empty()) write_file(a.json, harness::report_json(task, rows).dump(2) + "\n");
  return kOk;
}

int cmd_gen(const GenArgs& a) {
  TaskKind task{};
  try {
    task = parse_task(a.task);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("--task: {}", e.what()));
  }
  harness::InstanceSpec spec;
  try {
    if (!a.spec.empty()) {
      spec = harness::parse_instance_spec(a.spec);
    } else {
      spec.kind = a.kind;
      if (spec.kind.empty()) {
        spec.kind = task == TaskKind::kJssp ? "random" : task == TaskKind::kMaxCut ? "ba" : "uniform";
      }
      spec.jobs = a.jobs;
      spec.machines = a.machines;
      spec.nodes = a.nodes;
      spec.customers = a.customers;
      spec.capacity = a.capacity;
      spec.n = a.n;
      spec.m = a.m;
      spec.p = a.p;
      spec.weighting = maxcut::parse_weighting(a.weighting);
      spec.count = a.count;
      spec.name = a.name;
    }
    if (a.seed_set) spec.seed = a.seed;
    if (spec.kind == "files" || spec.kind == "dir") {
      throw std::invalid_argument("gen-instances needs a generator, not existing files");
    }
    const auto set = harness::build_instance_set(task, spec, Split::kDesign);
    const auto paths = harness::write_instance_set(set, a.out);
    for (const auto& p : paths) std::cout << p << "\n";
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

int cmd_inspect(const InspectArgs& a) {
  std::optional<TaskKind> task;
  if (!a.task.empty()) task = parse_task(a.task);
  const auto run = harness::inspect_run(a.archive, task);
  if (!a.candidate.empty()) {
    std::cout << harness::format_candidate(run, a.candidate);
    return kOk;
  }
  std::cout << harness::format_generations(run);
  return run.lineage_errors.empty() ? kOk : kDomainError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teacher-guided evolution of constructive heuristics"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "warnings and errors only");

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "run the evolutionary search from a config file");
  evolve->add_option("-c,--config", ev.config, "YAML run configuration")->required();
  evolve->add_option("-o,--out", ev.out, "run directory (default runs/<config name>)");
  evolve->add_flag("--resume", ev.resume, "continue from the last checkpoint");
  evolve->add_option("--ablation", ev.ablation, "ablation flag, repeatable")->delimiter(',');
  evolve->add_option("--workers", ev.workers, "rollout worker threads (overrides config)");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "evaluate methods on instance sets");
  bench->add_option("--task", bn.task, "jssp | tsp | cvrp | maxcut");
  bench->add_option("--methods", bn.methods,
                    "rule names, teacher:<name>, <file>.heur, external:<command>")
      ->delimiter(',');
  bench->add_option("--instances", bn.instances,
                    "instance set, e.g. taillard:ids=21-30 or dir:<path>; repeatable");
  bench->add_option("--config", bn.config, "take task, options and eval sets from a run config");
  bench->add_option("--dispatch", bn.dispatch, "JSSP dispatch mode");
  bench->add_option("--workers", bn.workers, "rollout worker threads");
  bench->add_option("--format", bn.format, "stdout format")->check(CLI::IsMember({"text", "csv", "json"}));
  bench->add_option("--csv", bn.csv, "also write the CSV report here");
  bench->add_option("--json", bn.json, "also write the JSON report here");

  GenArgs gn;
  auto* gen = app.add_subcommand("gen-instances", "write seeded instance files");
  gen->add_option("--task", gn.task, "jssp | tsp | cvrp | maxcut")->required();
  gen->add_option("--out", gn.out, "output directory")->required();
  gen->add_option("--spec", gn.spec, "compact instance spec instead of the flags below");
  gen->add_option("--kind", gn.kind, "random | taillard | uniform | ba | er");
  gen->add_option("--jobs", gn.jobs);
  gen->add_option("--machines", gn.machines);
  gen->add_option("--nodes", gn.nodes);
  gen->add_option("--customers", gn.customers);
  gen->add_option("--capacity", gn.capacity);
  gen->add_option("--n", gn.n, "MaxCut vertices");
  gen->add_option("--m", gn.m, "BA attachment edges");
  gen->add_option("--p", gn.p, "ER edge probability");
  gen->add_option("--weighting", gn.weighting, "MaxCut edge weights");
  gen->add_option("--count", gn.count);
  gen->add_option("--name", gn.name, "set name; files are <name>-<i>");
  auto* seed_opt = gen->add_option("--seed", gn.seed);

  InspectArgs in;
  auto* inspect = app.add_subcommand("inspect", "summarize a run directory");
  inspect->add_option("--archive", in.archive, "run directory")->required();
  inspect->add_option("--candidate", in.candidate, "print one candidate (id or unique prefix)");
  inspect->add_option("--task", in.task, "override the task recorded in run.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }
  gn.seed_set = seed_opt->count() > 0;
  spdlog::set_level(verbose ? spdlog::level::debug
                    : quiet ? spdlog::level::warn
                            : spdlog::level::info);

  try {
    if (*evolve) return cmd_evolve(ev);
    if (*bench) return cmd_bench(bn);
    if (*gen) return cmd_gen(gn);
    if (*inspect) return cmd_inspect(in);
  } catch (const harness::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kUsageError;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kDomainError;
  }
  return kUsageError;
}
