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

#include "heurevo/harness/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "heurevo/evolution/archive.hpp"

namespace heurevo::harness {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json objective_json(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

nlohmann::ordered_json spec_json(const InstanceSpec& s, TaskKind task) {
  nlohmann::ordered_json j;
  j["name"] = default_set_name(task, s);
  j["kind"] = s.kind;
  j["count"] = s.count;
  j["seed"] = s.seed;
  if (s.jobs) j["jobs"] = s.jobs;
  if (s.machines) j["machines"] = s.machines;
  if (!s.taillard_ids.empty()) j["ids"] = s.taillard_ids;
  if (s.nodes) j["nodes"] = s.nodes;
  if (s.customers) j["customers"] = s.customers;
  if (s.capacity > 0) j["capacity"] = s.capacity;
  if (s.n) j["n"] = s.n;
  if (s.m) j["m"] = s.m;
  if (s.p > 0) j["p"] = s.p;
  if (task == TaskKind::kMaxCut) j["weighting"] = std::string(maxcut::to_string(s.weighting));
  if (!s.paths.empty()) j["paths"] = s.paths;
  return j;
}

// Echo of the effective configuration; never contains credentials.
nlohmann::ordered_json run_json(const RunConfig& cfg) {
  const auto& ev = cfg.evolution;
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(cfg.task));
  j["seed"] = cfg.seed;
  j["design"] = spec_json(cfg.design, cfg.task);
  j["eval"] = nlohmann::ordered_json::array();
  for (const auto& s : cfg.eval) j["eval"].push_back(spec_json(s, cfg.task));
  j["evolution"] = {{"population", ev.population},
                    {"generations", ev.generations},
                    {"budget", ev.budget},
                    {"top_k", ev.top_k},
                    {"lambda", ev.lambda},
                    {"retries", ev.retries},
                    {"teacher_every", ev.teacher_every},
                    {"random_seeds", ev.random_seeds},
                    {"prompt_disagreements", ev.prompt_disagreements},
                    {"analyzer_disagreements", ev.analyzer_disagreements}};
  j["sampling"] = {{"stride", ev.sampling.stride}, {"cap", ev.sampling.cap}};
  j["task_options"] = {{"dispatch", std::string(jssp::to_string(ev.task_options.dispatch))},
                       {"maxcut_steps_per_vertex", ev.task_options.maxcut_steps_per_vertex},
                       {"maxcut_all_plus", ev.task_options.maxcut_all_plus}};
  j["workers"] = ev.workers;
  j["ablation"] = evolution::ablation_names(ev.ablation);
  nlohmann::ordered_json t{{"kind", cfg.teacher.kind},
                           {"capability", std::string(teacher::to_string(cfg.teacher.capability))}};
  if (cfg.teacher.kind == "scripted") {
    t["name"] = cfg.teacher.name.empty() ? teacher::scripted_teacher_names(cfg.task).front()
                                         : cfg.teacher.name;
  } else if (cfg.teacher.kind == "external") {
    t["transport"] = std::string(teacher::to_string(cfg.teacher.external.transport));
    if (!cfg.teacher.external.command.empty()) t["command"] = cfg.teacher.external.command;
  }
  j["teacher"] = t;
  nlohmann::ordered_json b{{"kind", cfg.backend.kind}};
  if (cfg.backend.kind == "mock") {
    b["seed"] = cfg.backend.seed_set ? cfg.backend.mock.seed : cfg.seed;
    b["fault_rate"] = cfg.backend.mock.fault_rate;
  } else {
    b["url"] = cfg.backend.llm.url;
    b["model"] = cfg.backend.llm.model;
    b["temperature"] = cfg.backend.llm.temperature;
    b["analyzer_temperature"] = cfg.backend.llm.analyzer_temperature;
  }
  j["backend"] = b;
  return j;
}

// Adds a file sink to the default logger for the lifetime of the run.
class RunLog {
 public:
  RunLog(const fs::path& path, bool append, bool console) {
    previous_ = spdlog::default_logger();
    std::vector<spdlog::sink_ptr> sinks;
    sinks.push_back(std::make_shared<spdlog::sinks::basic_file_sink_mt>(path.string(), !append));
    if (console) sinks.push_back(std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    auto logger = std::make_shared<spdlog::logger>("heurevo", sinks.begin(), sinks.end());
    logger->set_level(previous_ ? previous_->level() : spdlog::level::info);
    logger->flush_on(spdlog::level::info);
    spdlog::set_default_logger(std::move(logger));
  }
  ~RunLog() {
    spdlog::default_logger()->flush();
    if (previous_) spdlog::set_default_logger(previous_);
  }
  RunLog(const RunLog&) = delete;
  RunLog& operator=(const RunLog&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

std::string convergence_csv(const std::vector<evolution::GenerationRecord>& history) {
  std::string out =
      "generation,best_so_far,population_best,mean_align,front_sizes,children,discarded,"
      "duplicates,analyzer,generation_calls,analyzer_calls\n";
  for (const auto& r : history) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{},{},{},{},{},{}\n", r.generation,
                       r.best_so_far, r.population_best, r.mean_align,
                       fmt::join(r.front_sizes, " "), r.children, r.discarded, r.duplicates,
                       r.analyzer_invoked ? 1 : 0, r.generation_calls, r.analyzer_calls);
  }
  return out;
}

EvolveSummary run_evolve(const RunConfig& config, const EvolveOptions& options) {
  const std::string run_dir = !options.run_dir.empty()      ? options.run_dir
                              : !config.output_dir.empty() ? config.output_dir
                                                            : std::string("runs/run");
  const fs::path dir(run_dir);
  if (options.resume && !fs::exists(dir / "run.json")) {
    throw std::runtime_error("nothing to resume in " + run_dir);
  }
  fs::create_directories(dir);
  RunLog log(dir / "run.log", options.resume, options.console_log);

  const auto echo = run_json(config);
  if (options.resume) {
    std::ifstream in(dir / "run.json");
    const auto previous = nlohmann::json::parse(in, nullptr, false);
    if (previous.is_discarded() || !previous.contains("config") ||
        previous["config"].dump() != nlohmann::json(echo).dump()) {
      throw std::runtime_error("configuration differs from the one recorded in " +
                               (dir / "run.json").string());
    }
  }
  write_text(dir / "run.json", nlohmann::ordered_json{{"config", echo}}.dump(2) + "\n");

  spdlog::info("{} run, design set {}, seed {}", to_string(config.task),
               default_set_name(config.task, config.design), config.seed);
  const auto design = build_instance_set(config.task, config.design, Split::kDesign);
  auto teacher = make_teacher(config.teacher, config.task);
  auto backend = make_backend(config.backend, config.seed, (dir / "llm.jsonl").string());

  EvolveSummary summary;
  summary.run_dir = run_dir;
  summary.result = evolution::run_evolution(config.evolution, design, teacher, *backend,
                                            {.run_dir = run_dir, .resume = options.resume});
  const auto& result = summary.result;

  write_text(dir / "convergence.csv", convergence_csv(result.history));
  nlohmann::ordered_json final_json;
  if (result.best) {
    save_program(result.best->program, (dir / "best.heur").string());
    final_json = {{"id", result.best->id()},
                  {"objective", objective_json(native_objective(config.task, result.best->objective))},
                  {"align", result.best->align()},
                  {"generation", result.best->generation_born}};
    spdlog::info("best {} objective {} align {:.4f}", result.best->id(), result.best->objective,
                 result.best->align());
  } else {
    spdlog::warn("no valid candidate; best.heur not written");
  }

  if (result.best && !config.eval.empty()) {
    std::vector<InstanceSet> sets;
    for (const auto& spec : config.eval) {
      sets.push_back(build_instance_set(config.task, spec, Split::kEval));
    }
    const Method best{"best", program_selector(result.best->program)};
    summary.eval_rows =
        run_bench(config.task, sets, {best}, config.evolution.task_options, config.evolution.workers);
    write_text(dir / "eval.csv", format_csv(summary.eval_rows));
    write_text(dir / "eval.json", report_json(config.task, summary.eval_rows).dump(2) + "\n");
  }

  nlohmann::ordered_json run{{"config", echo}};
  run["result"] = {{"generations", result.history.empty() ? 0 : result.history.back().generation},
                   {"archive_size", result.archive.size()},
                   {"generation_calls", result.generation_calls},
                   {"analyzer_calls", result.analyzer_calls},
                   {"best", final_json}};
  write_text(dir / "run.json", run.dump(2) + "\n");
  return summary;
}

RunInspection inspect_run(const std::string& run_dir, std::optional<TaskKind> task) {
  const fs::path dir(run_dir);
  RunInspection run;
  if (task) {
    run.task = *task;
  } else {
    std::ifstream in(dir / "run.json");
    if (!in) throw std::runtime_error("missing " + (dir / "run.json").string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("config") || !j["config"].contains("task")) {
      throw std::runtime_error("corrupt " + (dir / "run.json").string());
    }
    run.task = parse_task(j["config"]["task"].get<std::string>());
  }
  const auto archive_path = dir / "archive.jsonl";
  if (!fs::exists(archive_path)) throw std::runtime_error("missing " + archive_path.string());
  run.archive = evolution::read_archive(archive_path.string(), run.task);
  for (auto& cp : evolution::read_checkpoints(run_dir)) run.records.push_back(std::move(cp.record));

  std::map<std::string, int> born;
  for (const auto& c : run.archive) born.emplace(c.id(), c.generation_born);
  for (const auto& c : run.archive) {
    for (const auto& p : c.program.parent_ids()) {
      auto it = born.find(p);
      if (it == born.end()) {
        run.lineage_errors.push_back(fmt::format("{}: unknown parent {}", c.id(), p));
      } else if (it->second >= c.generation_born) {
        run.lineage_errors.push_back(fmt::format("{}: parent {} born in generation {} >= {}",
                                                 c.id(), p, it->second, c.generation_born));
      }
    }
  }
  for (const auto& r : run.records) {
    for (const auto& id : r.population_ids) {
      if (!born.count(id)) {
        run.lineage_errors.push_back(
            fmt::format("generation {}: population member {} not in archive", r.generation, id));
      }
    }
  }
  return run;
}

std::string format_generations(const RunInspection& run) {
  std::string out = fmt::format("{:>3}  {:>14}  {:>14}  {:>10}  {:>8}  {}\n", "gen", "best_so_far",
                                "pop_best", "mean_align", "children", "fronts");
  for (const auto& r : run.records) {
    out += fmt::format("{:>3}  {:>14.4f}  {:>14.4f}  {:>10.4f}  {:>8}  [{}]{}\n", r.generation,
                       native_objective(run.task, r.best_so_far),
                       native_objective(run.task, r.population_best), r.mean_align, r.children,
                       fmt::join(r.front_sizes, " "), r.analyzer_invoked ? "  analyzer" : "");
  }
  out += fmt::format("{} generations, {} archived candidates, ", run.records.empty() ? 0 : run.records.back().generation,
                     run.archive.size());
  out += run.lineage_errors.empty() ? std::string("lineage ok\n")
                                    : fmt::format("{} lineage errors\n", run.lineage_errors.size());
  for (const auto& e : run.lineage_errors) out += "  " + e + "\n";
  return out;
}

std::string format_candidate(const RunInspection& run, const std::string& id) {
  std::vector<const evolution::Candidate*> hits;
  for (const auto& c : run.archive) {
    if (c.id().starts_with(id)) hits.push_back(&c);
  }
  if (hits.empty()) throw std::invalid_argument("no candidate with id " + id);
  if (hits.size() > 1 && hits.front()->id() != id) {
    throw std::invalid_argument(fmt::format("id prefix {} matches {} candidates", id, hits.size()));
  }
  const auto& c = *hits.front();
  const auto& schema = schema_for(run.task);
  const auto& d = c.diagnostics;
  std::string out = fmt::format("id:          {}\n", c.id());
  out += fmt::format("generation:  {}\n", c.generation_born);
  out += fmt::format("mode:        {}\n", dsl::to_string(c.program.revision_mode()));
  out += fmt::format("parents:     {}\n", fmt::join(c.program.parent_ids(), ", "));
  if (!c.program.description().empty()) out += fmt::format("description: {}\n", c.program.description());
  out += fmt::format("{}:{}{}\n", objective_label(run.task),
                     std::string(12 - objective_label(run.task).size(), ' '),
                     c.valid ? fmt::format("{:.4f}", native_objective(run.task, c.objective))
                             : std::string("invalid"));
  out += fmt::format("align:       {:.4f} over {} states\n", d.align, d.n_states);
  if (d.value) out += fmt::format("value:       {:.4f}\n", *d.value);
  if (d.mean_percentile) out += fmt::format("percentile:  {:.4f}\n", *d.mean_percentile);
  out += "source:\n  " + c.program.canonical() + "\n";
  auto features = [&](const FeatureVector& f) {
    std::string s;
    for (std::size_t i = 0; i < f.size() && i < schema.size(); ++i) {
      s += fmt::format("{}{}={:.4g}", i ? " " : "", schema.name(i), f[i]);
    }
    return s;
  };
  out += fmt::format("disagreements: {}\n", d.disagreements.size());
  for (std::size_t k = 0; k < d.disagreements.size(); ++k) {
    const auto& dc = d.disagreements[k];
    out += fmt::format("  D{} step {} state {}\n", k + 1, dc.step, dc.state_digest);
    out += fmt::format("    program chose {}{}: {}\n", to_int(dc.heuristic_action),
                       dc.heuristic_score ? fmt::format(" [teacher value {:.4f}]", *dc.heuristic_score) : "",
                       features(dc.heuristic_features));
    out += fmt::format("    teacher chose {}{}: {}\n", to_int(dc.teacher_action),
                       dc.teacher_score ? fmt::format(" [teacher value {:.4f}]", *dc.teacher_score) : "",
                       features(dc.teacher_features));
  }
  return out;
}

}  // namespace heurevo::harness
