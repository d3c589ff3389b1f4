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

#ifndef HEUREVO_EVOLUTION_ARCHIVE_HPP_
#define HEUREVO_EVOLUTION_ARCHIVE_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heurevo/evolution/evolution.hpp"

namespace heurevo::evolution {

// One archive line: id, source, description, mode, parents, generation,
// valid, objective, align, value, percentile, n_states, disagreements.
nlohmann::ordered_json candidate_to_json(const Candidate& c);
Candidate candidate_from_json(const nlohmann::json& j, TaskKind task);

nlohmann::ordered_json record_to_json(const GenerationRecord& r);
GenerationRecord record_from_json(const nlohmann::json& j);


// Reads an archive.jsonl; throws std::runtime_error naming the bad line.
std::vector<Candidate> read_archive(const std::string& path, TaskKind task);
void append_archive(const std::string& path, const std::vector<Candidate>& candidates);

struct Checkpoint {
  int generation = 0;
  std::vector<std::string> population;
  std::vector<std::string> retained;
  std::string rng_state;
  std::uint64_t generation_calls = 0;
  std::uint64_t analyzer_calls = 0;
  GenerationRecord record;
};

std::string checkpoint_path(const std::string& run_dir, int generation);
void write_checkpoint(const std::string& run_dir, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);
// Checkpoints present in run_dir, sorted by generation.
std::vector<Checkpoint> read_checkpoints(const std::string& run_dir);

}  // namespace heurevo::evolution

#endif  // HEUREVO_EVOLUTION_ARCHIVE_HPP_
