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

#include "heurevo/evolution/archive.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace heurevo::evolution {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

ordered_json case_to_json(const teacher::DisagreementCase& c) {
  ordered_json j;
  j["state"] = c.state_digest;
  j["step"] = c.step;
  j["heuristic_action"] = to_int(c.heuristic_action);
  j["teacher_action"] = to_int(c.teacher_action);
  j["heuristic_score"] = opt_number(c.heuristic_score);
  j["teacher_score"] = opt_number(c.teacher_score);
  j["heuristic_features"] = c.heuristic_features;
  j["teacher_features"] = c.teacher_features;
  return j;
}

teacher::DisagreementCase case_from_json(const json& j) {
  teacher::DisagreementCase c;
  c.state_digest = j.at("state").get<std::string>();
  c.step = j.at("step").get<int>();
  c.heuristic_action = ActionId{j.at("heuristic_action").get<std::int64_t>()};
  c.teacher_action = ActionId{j.at("teacher_action").get<std::int64_t>()};
  c.heuristic_score = read_opt(j, "heuristic_score");
  c.teacher_score = read_opt(j, "teacher_score");
  c.heuristic_features = j.at("heuristic_features").get<FeatureVector>();
  c.teacher_features = j.at("teacher_features").get<FeatureVector>();
  return c;
}

}  // namespace

ordered_json candidate_to_json(const Candidate& c) {
  ordered_json j;
  j["id"] = c.id();
  j["generation"] = c.generation_born;
  j["mode"] = std::string(dsl::to_string(c.program.revision_mode()));
  j["parents"] = c.program.parent_ids();
  j["source"] = c.program.canonical();
  j["description"] = c.program.description();
  j["valid"] = c.valid;
  j["objective"] = std::isfinite(c.objective) ? json(c.objective) : json(nullptr);
  j["align"] = c.diagnostics.align;
  j["value"] = opt_number(c.diagnostics.value);
  j["percentile"] = opt_number(c.diagnostics.mean_percentile);
  j["n_states"] = c.diagnostics.n_states;
  j["disagreements"] = ordered_json::array();
  for (const auto& d : c.diagnostics.disagreements) j["disagreements"].push_back(case_to_json(d));
  return j;
}

Candidate candidate_from_json(const json& j, TaskKind task) {
  dsl::ProgramMeta meta;
  meta.description = j.at("description").get<std::string>();
  meta.parent_ids = j.at("parents").get<std::vector<std::string>>();
  meta.revision_mode = dsl::parse_revision_mode(j.at("mode").get<std::string>());
  auto program =
      dsl::HeuristicProgram::parse(j.at("source").get<std::string>(), schema_for(task), meta);
  const auto id = j.at("id").get<std::string>();
  if (program.id() != id) {
    throw std::runtime_error(fmt::format("archive id {} does not match its source", id));
  }
  Candidate c{std::move(program)};
  c.generation_born = j.at("generation").get<int>();
  c.valid = j.at("valid").get<bool>();
  c.objective = read_opt(j, "objective").value_or(kInvalidObjective);
  c.diagnostics.align = j.at("align").get<double>();
  c.diagnostics.value = read_opt(j, "value");
  c.diagnostics.mean_percentile = read_opt(j, "percentile");
  c.diagnostics.n_states = j.at("n_states").get<std::size_t>();
  for (const auto& d : j.at("disagreements")) c.diagnostics.disagreements.push_back(case_from_json(d));
  return c;
}

ordered_json record_to_json(const GenerationRecord& r) {
  ordered_json j;
  j["generation"] = r.generation;
  j["best_so_far"] = std::isfinite(r.best_so_far) ? json(r.best_so_far) : json(nullptr);
  j["population_best"] =
      std::isfinite(r.population_best) ? json(r.population_best) : json(nullptr);
  j["mean_align"] = r.mean_align;
  j["front_sizes"] = r.front_sizes;
  j["population"] = r.population_ids;
  j["children"] = r.children;
  j["discarded"] = r.discarded;
  j["duplicates"] = r.duplicates;
  j["analyzer_invoked"] = r.analyzer_invoked;
  j["generation_calls"] = r.generation_calls;
  j["analyzer_calls"] = r.analyzer_calls;
  return j;
}

GenerationRecord record_from_json(const json& j) {
  GenerationRecord r;
  r.generation = j.at("generation").get<int>();
  r.best_so_far = read_opt(j, "best_so_far").value_or(kInvalidObjective);
  r.population_best = read_opt(j, "population_best").value_or(kInvalidObjective);
  r.mean_align = j.at("mean_align").get<double>();
  r.front_sizes = j.at("front_sizes").get<std::vector<std::size_t>>();
  r.population_ids = j.at("population").get<std::vector<std::string>>();
  r.children = j.at("children").get<std::size_t>();
  r.discarded = j.at("discarded").get<std::size_t>();
  r.duplicates = j.at("duplicates").get<std::size_t>();
  r.analyzer_invoked = j.at("analyzer_invoked").get<bool>();
  r.generation_calls = j.at("generation_calls").get<std::uint64_t>();
  r.analyzer_calls = j.at("analyzer_calls").get<std::uint64_t>();
  return r;
}

std::vector<Candidate> read_archive(const std::string& path, TaskKind task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open archive " + path);
  std::vector<Candidate> out;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(candidate_from_json(json::parse(line), task));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: corrupt archive line: {}", path, lineno, e.what()));
    }
  }
  return out;
}

void append_archive(const std::string& path, const std::vector<Candidate>& candidates) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write archive " + path);
  for (const auto& c : candidates) out << candidate_to_json(c).dump() << '\n';
}

std::string checkpoint_path(const std::string& run_dir, int generation) {
  return (fs::path(run_dir) / "checkpoints" / fmt::format("gen_{:04d}.json", generation)).string();
}

void write_checkpoint(const std::string& run_dir, const Checkpoint& cp) {
  const fs::path path = checkpoint_path(run_dir, cp.generation);
  fs::create_directories(path.parent_path());
  ordered_json j;
  j["generation"] = cp.generation;
  j["population"] = cp.population;
  j["retained"] = cp.retained;
  j["rng"] = cp.rng_state;
  j["generation_calls"] = cp.generation_calls;
  j["analyzer_calls"] = cp.analyzer_calls;
  j["record"] = record_to_json(cp.record);
  // Write-then-rename so an interrupted run never leaves half a file.
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(1) << '\n';
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  try {
    const json j = json::parse(in);
    Checkpoint cp;
    cp.generation = j.at("generation").get<int>();
    cp.population = j.at("population").get<std::vector<std::string>>();
    cp.retained = j.at("retained").get<std::vector<std::string>>();
    cp.rng_state = j.at("rng").get<std::string>();
    cp.generation_calls = j.at("generation_calls").get<std::uint64_t>();
    cp.analyzer_calls = j.at("analyzer_calls").get<std::uint64_t>();
    cp.record = record_from_json(j.at("record"));
    return cp;
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("corrupt checkpoint {}: {}", path, e.what()));
  }
}

std::vector<Checkpoint> read_checkpoints(const std::string& run_dir) {
  std::vector<Checkpoint> out;
  const fs::path dir = fs::path(run_dir) / "checkpoints";
  if (!fs::exists(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(read_checkpoint(f.string()));
  return out;
}

}  // namespace heurevo::evolution
