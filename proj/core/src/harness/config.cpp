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

#include "heurevo/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "heurevo/util/random.hpp"

namespace heurevo::harness {

namespace fs = std::filesystem;

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Mapping reader that remembers which keys were consumed so leftovers can
// be reported with their full path.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_, "expected a mapping");
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? node_[key] : YAML::Node(YAML::NodeType::Undefined);
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  template <typename T>
  bool get(const std::string& key, T& out) {
    auto n = raw(key);
    if (!n) return false;
    out = convert<T>(n, path(key));
    return true;
  }

  Section child(const std::string& key) { return Section(raw(key), path(key)); }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(join_path(path_, key), "unknown key");
    }
  }

  template <typename T>
  static T convert(const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) throw ConfigError(where, "expected a scalar value");
    if constexpr (std::is_same_v<T, std::string>) {
      return n.Scalar();
    } else if constexpr (std::is_same_v<T, bool>) {
      try {
        return n.as<bool>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where, fmt::format("'{}' is not a boolean", n.Scalar()));
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      try {
        return n.as<T>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where, fmt::format("'{}' is not a number", n.Scalar()));
      }
    } else {
      long long v = 0;
      try {
        v = n.as<long long>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where, fmt::format("'{}' is not an integer", n.Scalar()));
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) throw ConfigError(where, "must not be negative");
      }
      if (v < static_cast<long long>(std::numeric_limits<T>::min()) ||
          static_cast<unsigned long long>(v) > std::numeric_limits<T>::max()) {
        throw ConfigError(where, "out of range");
      }
      return static_cast<T>(v);
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where, e.what());
  }
}

std::vector<int> parse_ids_node(const YAML::Node& n, const std::string& where) {
  if (n.IsSequence()) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < n.size(); ++i) {
      ids.push_back(Section::convert<int>(n[i], fmt::format("{}[{}]", where, i)));
    }
    return ids;
  }
  const auto text = Section::convert<std::string>(n, where);
  return wrap(where, [&] { return parse_instance_spec("taillard:ids=" + text).taillard_ids; });
}

InstanceSpec parse_instances(Section s, const std::string& base_dir, std::uint64_t default_seed) {
  InstanceSpec spec;
  if (!s.get("kind", spec.kind)) throw ConfigError(s.path("kind"), "required");
  s.get("name", spec.name);
  spec.seed = default_seed;
  s.get("seed", spec.seed);
  s.get("count", spec.count);
  s.get("jobs", spec.jobs);
  s.get("machines", spec.machines);
  if (auto ids = s.raw("ids")) spec.taillard_ids = parse_ids_node(ids, s.path("ids"));
  s.get("nodes", spec.nodes);
  s.get("customers", spec.customers);
  s.get("capacity", spec.capacity);
  s.get("n", spec.n);
  s.get("m", spec.m);
  s.get("p", spec.p);
  std::string weighting;
  if (s.get("weighting", weighting)) {
    spec.weighting = wrap(s.path("weighting"), [&] { return maxcut::parse_weighting(weighting); });
  }
  auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).lexically_normal().string();
  };
  if (auto files = s.raw("files")) {
    if (!files.IsSequence()) throw ConfigError(s.path("files"), "expected a list of paths");
    for (std::size_t i = 0; i < files.size(); ++i) {
      spec.paths.push_back(
          resolve(Section::convert<std::string>(files[i], fmt::format("{}[{}]", s.path("files"), i))));
    }
  }
  std::string dir;
  if (s.get("dir", dir)) spec.paths = {resolve(dir)};
  if (spec.kind == "files" && spec.paths.empty()) throw ConfigError(s.path("files"), "required");
  if (spec.kind == "dir" && dir.empty()) throw ConfigError(s.path("dir"), "required");
  s.finish();
  return spec;
}

}  // namespace

InstanceSpec default_design_spec(TaskKind task) {
  InstanceSpec spec;
  spec.count = 8;
  switch (task) {
    case TaskKind::kJssp:
      spec.kind = "random";
      spec.jobs = 10;
      spec.machines = 10;
      break;
    case TaskKind::kTsp:
      spec.kind = "uniform";
      spec.nodes = 50;
      break;
    case TaskKind::kCvrp:
      spec.kind = "uniform";
      spec.customers = 50;
      break;
    case TaskKind::kMaxCut:
      spec.kind = "ba";
      spec.n = 100;
      spec.m = 4;
      break;
  }
  return spec;
}

RunConfig parse_run_config(const std::string& yaml_text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", fmt::format("invalid YAML: {}", e.what()));
  }
  if (!root || root.IsNull()) throw ConfigError("", "empty configuration");
  Section top(root, "");
  RunConfig cfg;

  std::string task;
  if (!top.get("task", task)) throw ConfigError("task", "required");
  cfg.task = wrap("task", [&] { return parse_task(task); });
  if (!top.get("seed", cfg.seed)) throw ConfigError("seed", "required");
  top.get("output_dir", cfg.output_dir);

  // Design seed defaults to the run seed; eval set i to a derived seed so
  // design and evaluation instances never coincide.
  if (top.has("design")) {
    cfg.design = parse_instances(top.child("design"), base_dir, cfg.seed);
  } else {
    cfg.design = default_design_spec(cfg.task);
    cfg.design.seed = cfg.seed;
  }
  if (auto eval = top.raw("eval")) {
    if (!eval.IsSequence()) throw ConfigError("eval", "expected a list of instance sets");
    for (std::size_t i = 0; i < eval.size(); ++i) {
      cfg.eval.push_back(parse_instances(Section(eval[i], fmt::format("eval[{}]", i)), base_dir,
                                         mix_seed(cfg.seed, 0xe7a1 + i)));
    }
  }

  auto& ev = cfg.evolution;
  ev.task = cfg.task;
  ev.seed = cfg.seed;
  {
    auto s = top.child("evolution");
    s.get("population", ev.population);
    s.get("generations", ev.generations);
    s.get("budget", ev.budget);
    s.get("top_k", ev.top_k);
    s.get("lambda", ev.lambda);
    s.get("retries", ev.retries);
    s.get("teacher_every", ev.teacher_every);
    s.get("random_seeds", ev.random_seeds);
    s.get("prompt_disagreements", ev.prompt_disagreements);
    s.get("analyzer_disagreements", ev.analyzer_disagreements);
    s.finish();
  }
  {
    auto s = top.child("sampling");
    s.get("stride", ev.sampling.stride);
    s.get("cap", ev.sampling.cap);
    s.finish();
  }
  {
    auto s = top.child("task_options");
    std::string dispatch;
    if (s.get("dispatch", dispatch)) {
      ev.task_options.dispatch =
          wrap(s.path("dispatch"), [&] { return jssp::parse_dispatch_mode(dispatch); });
    }
    s.get("maxcut_steps_per_vertex", ev.task_options.maxcut_steps_per_vertex);
    s.get("maxcut_all_plus", ev.task_options.maxcut_all_plus);
    s.finish();
  }
  top.get("workers", ev.workers);
  if (auto ab = top.raw("ablation")) {
    if (!ab.IsSequence()) throw ConfigError("ablation", "expected a list of flags");
    for (std::size_t i = 0; i < ab.size(); ++i) {
      const auto where = fmt::format("ablation[{}]", i);
      const auto flag = Section::convert<std::string>(ab[i], where);
      wrap(where, [&] { apply_ablation(ev.ablation, flag); });
    }
  }

  {
    auto s = top.child("teacher");
    auto& t = cfg.teacher;
    s.get("kind", t.kind);
    if (t.kind != "scripted" && t.kind != "external" && t.kind != "none") {
      throw ConfigError(s.path("kind"), fmt::format("unknown teacher kind '{}'", t.kind));
    }
    s.get("name", t.name);
    std::string cap;
    if (s.get("capability", cap)) {
      t.capability = wrap(s.path("capability"), [&] { return teacher::parse_capability(cap); });
    }
    t.external.capability = t.capability;
    if (!t.name.empty()) t.external.name = t.name;
    std::string transport;
    if (s.get("transport", transport)) {
      t.external.transport =
          wrap(s.path("transport"), [&] { return teacher::parse_transport(transport); });
    }
    s.get("command", t.external.command);
    s.get("host", t.external.host);
    s.get("port", t.external.port);
    long long timeout_ms = 0;
    if (s.get("timeout_ms", timeout_ms)) t.external.timeout = std::chrono::milliseconds(timeout_ms);
    s.get("connections", t.external.connections);
    if (t.kind == "external") {
      if (t.external.transport == teacher::Transport::kProcess && t.external.command.empty()) {
        throw ConfigError(s.path("command"), "required for a process teacher");
      }
      if (t.external.transport == teacher::Transport::kTcp && t.external.port <= 0) {
        throw ConfigError(s.path("port"), "required for a tcp teacher");
      }
    }
    if (t.kind == "scripted" && !t.name.empty()) {
      const auto names = teacher::scripted_teacher_names(cfg.task);
      if (std::find(names.begin(), names.end(), t.name) == names.end()) {
        throw ConfigError(s.path("name"),
                          fmt::format("no scripted teacher '{}' for {}", t.name, to_string(cfg.task)));
      }
    }
    s.finish();
  }
  {
    auto s = top.child("backend");
    auto& b = cfg.backend;
    s.get("kind", b.kind);
    if (b.kind != "mock" && b.kind != "llm") {
      throw ConfigError(s.path("kind"), fmt::format("unknown backend kind '{}'", b.kind));
    }
    b.seed_set = s.get("seed", b.mock.seed);
    s.get("fault_rate", b.mock.fault_rate);
    if (b.mock.fault_rate < 0 || b.mock.fault_rate > 1) {
      throw ConfigError(s.path("fault_rate"), "must be in [0, 1]");
    }
    s.get("url", b.llm.url);
    s.get("model", b.llm.model);
    s.get("api_key_env", b.llm.api_key_env);
    s.get("temperature", b.llm.temperature);
    s.get("analyzer_temperature", b.llm.analyzer_temperature);
    s.get("max_tokens", b.llm.max_tokens);
    long long ms = 0;
    if (s.get("timeout_ms", ms)) b.llm.timeout = std::chrono::milliseconds(ms);
    if (s.get("backoff_ms", ms)) b.llm.backoff = std::chrono::milliseconds(ms);
    s.get("retries", b.llm.retries);
    s.get("log_path", b.llm.log_path);
    if (b.kind == "llm") {
      if (b.llm.url.empty()) throw ConfigError(s.path("url"), "required for the llm backend");
      if (b.llm.model.empty()) throw ConfigError(s.path("model"), "required for the llm backend");
    }
    s.finish();
  }
  top.finish();

  try {
    ev.validate();
  } catch (const std::invalid_argument& e) {
    // validate() messages already carry the field name.
    throw ConfigError("", e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto base = fs::path(path).parent_path().string();
  return parse_run_config(buffer.str(), base.empty() ? "." : base);
}

teacher::TeacherPtr make_teacher(const TeacherSpec& spec, TaskKind task) {
  if (spec.kind == "none") return nullptr;
  if (spec.kind == "external") {
    auto cfg = spec.external;
    cfg.capability = spec.capability;
    return teacher::external_teacher(std::move(cfg));
  }
  const auto name = spec.name.empty() ? teacher::scripted_teacher_names(task).front() : spec.name;
  auto t = teacher::scripted_teacher(task, name);
  if (spec.capability == teacher::Capability::kActionOnly) t = teacher::action_only(std::move(t));
  return t;
}

std::unique_ptr<genbackend::Backend> make_backend(const BackendSpec& spec, std::uint64_t run_seed,
                                                  const std::string& log_path) {
  if (spec.kind == "llm") {
    auto cfg = spec.llm;
    if (!log_path.empty() && cfg.log_path.empty()) cfg.log_path = log_path;
    return std::make_unique<genbackend::LlmBackend>(std::move(cfg));
  }
  auto opts = spec.mock;
  if (!spec.seed_set) opts.seed = run_seed;
  return std::make_unique<genbackend::MockBackend>(opts);
}

}  // namespace heurevo::harness
