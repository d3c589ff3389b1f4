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

#include "heurevo/harness/instances.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "heurevo/util/random.hpp"

namespace heurevo::harness {

namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto at = s.find(sep);
    out.push_back(s.substr(0, at));
    if (at == std::string_view::npos) break;
    s.remove_prefix(at + 1);
  }
  return out;
}

template <typename T>
T to_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a valid number", key, v));
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(fmt::format("{}: '{}' is not a valid number", key, v));
}

std::vector<int> parse_ids(std::string_view v) {
  std::vector<int> ids;
  for (auto part : split(v, '+')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      ids.push_back(to_number<int>("ids", part));
      continue;
    }
    const int lo = to_number<int>("ids", part.substr(0, dash));
    const int hi = to_number<int>("ids", part.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument(fmt::format("ids: empty range '{}'", part));
    for (int i = lo; i <= hi; ++i) ids.push_back(i);
  }
  return ids;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double default_cvrp_capacity(int customers) {
  if (customers <= 20) return 30.0;
  if (customers <= 50) return 40.0;
  return 50.0;
}

InstanceSpec parse_instance_spec(std::string_view text) {
  InstanceSpec spec;
  const auto colon = text.find(':');
  spec.kind = std::string(text.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (spec.kind == "files" || spec.kind == "dir") {
    require(!rest.empty(), spec.kind + ": needs at least one path");
    for (auto p : split(rest, ',')) {
      if (p.starts_with("seed=")) {
        spec.seed = to_number<std::uint64_t>("seed", p.substr(5));
      } else if (p.starts_with("name=")) {
        spec.name = std::string(p.substr(5));
      } else {
        spec.paths.emplace_back(p);
      }
    }
    require(!spec.paths.empty(), spec.kind + ": needs at least one path");
    return spec;
  }
  if (rest.empty()) return spec;
  for (auto kv : split(rest, ',')) {
    const auto eq = kv.find('=');
    require(eq != std::string_view::npos, fmt::format("expected key=value, got '{}'", kv));
    const auto key = kv.substr(0, eq);
    const auto v = kv.substr(eq + 1);
    if (key == "name") spec.name = std::string(v);
    else if (key == "count") spec.count = to_number<std::size_t>(key, v);
    else if (key == "seed") spec.seed = to_number<std::uint64_t>(key, v);
    else if (key == "jobs") spec.jobs = to_number<int>(key, v);
    else if (key == "machines") spec.machines = to_number<int>(key, v);
    else if (key == "ids") spec.taillard_ids = parse_ids(v);
    else if (key == "nodes") spec.nodes = to_number<int>(key, v);
    else if (key == "customers") spec.customers = to_number<int>(key, v);
    else if (key == "capacity") spec.capacity = to_double(key, v);
    else if (key == "n") spec.n = to_number<int>(key, v);
    else if (key == "m") spec.m = to_number<int>(key, v);
    else if (key == "p") spec.p = to_double(key, v);
    else if (key == "weighting") spec.weighting = maxcut::parse_weighting(v);
    else throw std::invalid_argument(fmt::format("unknown instance parameter '{}'", key));
  }
  return spec;
}

std::string default_set_name(TaskKind task, const InstanceSpec& spec) {
  if (!spec.name.empty()) return spec.name;
  switch (task) {
    case TaskKind::kJssp:
      if (spec.kind == "taillard" && !spec.taillard_ids.empty()) {
        return fmt::format("ta{:02d}-{:02d}", spec.taillard_ids.front(), spec.taillard_ids.back());
      }
      if (spec.kind == "random") return fmt::format("jssp{}x{}", spec.jobs, spec.machines);
      break;
    case TaskKind::kTsp:
      if (spec.kind == "uniform") return fmt::format("tsp{}", spec.nodes);
      break;
    case TaskKind::kCvrp:
      if (spec.kind == "uniform") return fmt::format("cvrp{}", spec.customers);
      break;
    case TaskKind::kMaxCut:
      if (spec.kind == "ba" || spec.kind == "er") {
        return fmt::format("{}{}{}", spec.kind, spec.n, maxcut::to_string(spec.weighting));
      }
      break;
  }
  if (spec.kind == "dir" && !spec.paths.empty()) {
    return fs::path(spec.paths.front()).filename().string();
  }
  return spec.kind;
}

std::string_view instance_extension(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp: return ".txt";
    case TaskKind::kTsp: return ".tsp";
    case TaskKind::kCvrp: return ".vrp";
    case TaskKind::kMaxCut: return ".edges";
  }
  return ".txt";
}

ProblemInstance read_instance_file(TaskKind task, const std::string& path) {
  if (!fs::is_regular_file(path)) throw std::runtime_error("missing instance file " + path);
  // Instances are named after the file stem, so written sets read back
  // under the same names.
  const auto stem = fs::path(path).stem().string();
  switch (task) {
    case TaskKind::kJssp: {
      auto inst = jssp::read_taillard_file(path);
      inst.name = stem;
      return ProblemInstance(std::move(inst));
    }
    case TaskKind::kTsp:
    case TaskKind::kCvrp: {
      auto inst = routing::read_tsplib_file(path);
      if (inst.task != task) {
        throw std::runtime_error(fmt::format("{} is not a {} instance", path, to_string(task)));
      }
      inst.name = stem;
      return ProblemInstance(std::move(inst));
    }
    case TaskKind::kMaxCut: {
      auto inst = maxcut::read_edge_list_file(path);
      inst.name = stem;
      return ProblemInstance(std::move(inst));
    }
  }
  throw std::invalid_argument("unknown task");
}

void write_instance_file(const ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  switch (instance.task()) {
    case TaskKind::kJssp: jssp::write_taillard(out, instance.jssp()); break;
    case TaskKind::kTsp:
    case TaskKind::kCvrp: routing::write_tsplib(out, instance.routing()); break;
    case TaskKind::kMaxCut: maxcut::write_edge_list(out, instance.maxcut()); break;
  }
  if (!out) throw std::runtime_error("cannot write " + path);
}

InstanceSet build_instance_set(TaskKind task, const InstanceSpec& spec, Split split) {
  InstanceSet set;
  set.task = task;
  set.split = split;
  set.seed = spec.seed;
  set.name = default_set_name(task, spec);
  auto item_name = [&](std::size_t i) { return fmt::format("{}-{:03d}", set.name, i); };
  auto each = [&](auto&& make) {
    require(spec.count >= 1, "count: must be at least 1");
    for (std::size_t i = 0; i < spec.count; ++i) {
      Rng rng(mix_seed(spec.seed, i));
      auto inst = make(rng);
      inst.name = item_name(i);
      set.instances.emplace_back(std::move(inst));
    }
  };

  if (spec.kind == "files" || spec.kind == "dir") {
    std::vector<std::string> paths = spec.paths;
    if (spec.kind == "dir") {
      require(paths.size() == 1, "dir: expects exactly one directory");
      if (!fs::is_directory(paths[0])) throw std::runtime_error("missing instance directory " + paths[0]);
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(paths[0])) {
        if (e.is_regular_file()) found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      paths = std::move(found);
    }
    for (const auto& p : paths) set.instances.push_back(read_instance_file(task, p));
  } else if (task == TaskKind::kJssp && spec.kind == "taillard") {
    require(!spec.taillard_ids.empty(), "ids: required for taillard sets");
    for (int id : spec.taillard_ids) {
      auto inst = jssp::taillard_instance(id);
      if (!inst) throw std::invalid_argument(fmt::format("ids: no built-in Taillard instance ta{:02d}", id));
      set.instances.emplace_back(std::move(*inst));
    }
  } else if (task == TaskKind::kJssp && spec.kind == "random") {
    require(spec.jobs >= 1 && spec.machines >= 1, "jobs, machines: must be positive");
    each([&](Rng& rng) { return jssp::generate_random(spec.jobs, spec.machines, rng); });
  } else if (task == TaskKind::kTsp && spec.kind == "uniform") {
    require(spec.nodes >= 2, "nodes: must be at least 2");
    each([&](Rng& rng) { return routing::generate_tsp(spec.nodes, rng); });
  } else if (task == TaskKind::kCvrp && spec.kind == "uniform") {
    require(spec.customers >= 1, "customers: must be positive");
    const double cap = spec.capacity > 0 ? spec.capacity : default_cvrp_capacity(spec.customers);
    each([&](Rng& rng) { return routing::generate_cvrp(spec.customers, cap, rng); });
  } else if (task == TaskKind::kMaxCut && spec.kind == "ba") {
    require(spec.m >= 1 && spec.n > spec.m, "n, m: need 1 <= m < n");
    each([&](Rng& rng) { return maxcut::generate_ba(spec.n, spec.m, spec.weighting, rng); });
  } else if (task == TaskKind::kMaxCut && spec.kind == "er") {
    require(spec.n >= 2 && spec.p > 0 && spec.p <= 1, "n, p: need n >= 2 and 0 < p <= 1");
    each([&](Rng& rng) { return maxcut::generate_er(spec.n, spec.p, spec.weighting, rng); });
  } else {
    throw std::invalid_argument(
        fmt::format("'{}' is not an instance source for {}", spec.kind, to_string(task)));
  }
  set.validate();
  return set;
}

std::vector<std::string> write_instance_set(const InstanceSet& set, const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::string> out;
  for (const auto& inst : set.instances) {
    const auto path = (fs::path(dir) / (inst.name() + std::string(instance_extension(set.task)))).string();
    write_instance_file(inst, path);
    out.push_back(path);
  }
  return out;
}

}  // namespace heurevo::harness
